"""
Classical measurement models on a finite parameter space.

A model is a probability vector over parameter points together with
bounded real-valued functions ("properties") on those points. Correlations
are evaluated exactly with :class:`fractions.Fraction`, the probabilities
being renormalized exactly so that they sum to one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    BoundMismatch,
    InvalidDistribution,
    InvalidGammaConstraint,
    InvalidModel,
    UnknownProperty,
)
from .inequalities import DEFAULT_TOL, GammaVector, InequalityReport

PROB_TOL = 1e-12


@dataclass(frozen=True)
class Observable:
    values: tuple[float, ...]
    bound: float


@dataclass(frozen=True, eq=False)
class LhvModel:
    """
    Finite classical model.

    Parameters
    ----------
    theta_points : tuple of str
        Labels of the parameter points.
    probabilities : tuple of float
        Non-negative weights summing to one within 1e-12.
    observables : mapping
        Property label to :class:`Observable` (one value per point plus a
        bound that every value at a point of positive probability respects).
    """

    theta_points: tuple[str, ...]
    probabilities: tuple[float, ...]
    observables: Mapping[str, Observable]

    def __post_init__(self):
        points = tuple(str(t) for t in self.theta_points)
        probs = tuple(float(p) for p in self.probabilities)
        n = len(points)
        if n == 0:
            raise InvalidModel("parameter space is empty")
        if len(probs) != n:
            raise InvalidModel(f"{n} points but {len(probs)} probabilities")
        if any(p < 0 for p in probs):
            raise InvalidDistribution(f"InvalidDistribution: negative probability in {probs}")
        total = float(np.sum(probs))
        if abs(total - 1.0) > PROB_TOL:
            raise InvalidDistribution(f"InvalidDistribution: probabilities sum to {total:.15g}")
        obs = {}
        for name, o in self.observables.items():
            if not isinstance(o, Observable):
                values, bound = o
                o = Observable(tuple(float(v) for v in values), float(bound))
            if len(o.values) != n:
                raise InvalidModel(f"property {name!r} has {len(o.values)} values for {n} points")
            if not o.bound > 0:
                raise InvalidModel(f"property {name!r} has non-positive bound {o.bound}")
            for p, v in zip(probs, o.values):
                if p > 0 and abs(v) > o.bound:
                    raise InvalidModel(f"property {name!r} takes value {v} beyond bound {o.bound}")
            obs[str(name)] = o
        object.__setattr__(self, "theta_points", points)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "observables", obs)

    def observable(self, label: str) -> Observable:
        try:
            return self.observables[label]
        except KeyError:
            raise UnknownProperty(f"UnknownProperty: {label!r} not in {sorted(self.observables)}") from None

    def bound(self, label: str) -> float:
        return self.observable(label).bound

    def exact_probabilities(self) -> list[Fraction]:
        fr = [Fraction(p) for p in self.probabilities]
        total = sum(fr)
        return [p / total for p in fr]


def exact_correlation(m: LhvModel, prop1: str, prop2: str) -> Fraction:
    f1, f2 = m.observable(prop1).values, m.observable(prop2).values
    return sum(
        (p * Fraction(x) * Fraction(y) for p, x, y in zip(m.exact_probabilities(), f1, f2)),
        Fraction(0),
    )


def classical_correlation(m: LhvModel, prop1: str, prop2: str) -> float:
    """``sum_theta pi(theta) f1(theta) f2(theta)``, computed exactly and rounded once."""
    return float(exact_correlation(m, prop1, prop2))


def bell_chain(m: LhvModel, a: str, d1: str, d2: str) -> tuple[float, float, float]:
    """
    The three members of the classical derivation, in order:
    ``|<A D1> - <A D2>|``, ``C1 * sum pi |f_D1 - f_D2|`` and the Bell right side.
    """
    c1, c2 = m.bound(a), _shared_bound(m, d1, d2)
    lhs = abs(exact_correlation(m, a, d1) - exact_correlation(m, a, d2))
    f1, f2 = m.observable(d1).values, m.observable(d2).values
    middle = Fraction(c1) * sum(
        (p * abs(Fraction(x) - Fraction(y)) for p, x, y in zip(m.exact_probabilities(), f1, f2)),
        Fraction(0),
    )
    rhs = Fraction(c1) * Fraction(c2) - Fraction(c1) / Fraction(c2) * exact_correlation(m, d1, d2)
    return float(lhs), float(middle), float(rhs)


def _shared_bound(m: LhvModel, d1: str, d2: str) -> float:
    b1, b2 = m.bound(d1), m.bound(d2)
    if b1 != b2:
        raise BoundMismatch(f"properties {d1!r} and {d2!r} have bounds {b1} and {b2}")
    return b1


def classical_bell_report(
    m: LhvModel, a: str, d1: str, d2: str, tol: float = DEFAULT_TOL
) -> InequalityReport:
    """``|<A D1> - <A D2>| <= C1 C2 - (C1/C2) <D1 D2>``; never violated."""
    c1, c2 = Fraction(m.bound(a)), Fraction(_shared_bound(m, d1, d2))
    lhs = abs(exact_correlation(m, a, d1) - exact_correlation(m, a, d2))
    rhs = c1 * c2 - c1 / c2 * exact_correlation(m, d1, d2)
    return InequalityReport(
        "classical_bell", float(lhs), float(rhs), tol, (), (f"properties: {a}, {d1}, {d2}",)
    )


def classical_extended_chsh(
    m: LhvModel,
    gammas: GammaVector | Sequence[float],
    a: str,
    c: str,
    b: str,
    d: str,
    c1: float | None = None,
    c2: float | None = None,
    tol: float = DEFAULT_TOL,
) -> InequalityReport:
    """
    Extended CHSH for a classical model, with ``A, C`` on the first side and
    ``B, D`` on the second. Bounds default to the larger declared bound on
    each side.
    """
    if not isinstance(gammas, GammaVector):
        gammas = GammaVector(tuple(gammas))
    branch = gammas.branch(tol)
    if branch is None:
        raise InvalidGammaConstraint(*gammas.residuals)
    if c1 is None:
        c1 = max(m.bound(a), m.bound(c))
    if c2 is None:
        c2 = max(m.bound(b), m.bound(d))
    g = [Fraction(x) for x in gammas.values]
    terms = [
        exact_correlation(m, a, b),
        exact_correlation(m, c, b),
        exact_correlation(m, c, d),
        exact_correlation(m, a, d),
    ]
    lhs = abs(sum((gi * ti for gi, ti in zip(g, terms)), Fraction(0)))
    rhs = 2 * Fraction(gammas.gamma0) * Fraction(c1) * Fraction(c2)
    notes = (f"properties: {a}, {c} | {b}, {d}", f"gamma={list(gammas.values)}", f"branch: {branch}")
    return InequalityReport("classical_extended_chsh", float(lhs), float(rhs), tol, (), notes)


def random_model(
    seed: int | Sequence[int], theta_size: int, bounds: Mapping[str, float]
) -> LhvModel:
    """
    Reproducible random model: probabilities from a normalized uniform draw,
    each property uniform in ``[-C, C]``.
    """
    if theta_size < 1:
        raise ValueError(f"theta_size must be positive, got {theta_size}")
    rng = np.random.default_rng(seed)
    p = rng.random(theta_size) + 1e-3
    p = p / p.sum()
    obs = {
        name: Observable(tuple(rng.uniform(-c, c, theta_size).tolist()), float(c))
        for name, c in bounds.items()
    }
    return LhvModel(tuple(f"t{i}" for i in range(theta_size)), tuple(p.tolist()), obs)


def random_valid_gamma(rng: np.random.Generator) -> GammaVector:
    """Random coefficients satisfying one of the two extended-CHSH constraints."""
    g1, g2, g3 = (float(x) for x in rng.uniform(0.2, 2.0, 3) * rng.choice([-1.0, 1.0], 3))
    if rng.random() < 0.5:
        return GammaVector((g1, g2, g3, -g2 * g3 / g1))
    return GammaVector((g1, g2, g3, -g1 * g2 / g3))
