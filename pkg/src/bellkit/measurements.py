"""
Finite-outcome POVMs and the operators they induce.

A POVM assigns a positive effect to each real outcome value. Its first-moment
operator ``W = sum_i value_i * effect_i`` is what every product expectation
value depends on; ``effect_operator`` computes it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from . import qlinalg
from .errors import (
    DimensionMismatch,
    Incomplete,
    InvalidOutcomeSet,
    NotHermitian,
    NotPsdEffect,
    UnknownOutcome,
)
from .qlinalg import DEFAULT_TOL, ComplexMatrix

NORM_SLACK = 1e-9


@dataclass(frozen=True)
class OutcomeSet:
    """Distinct real outcome values, each bounded in absolute value by ``bound``."""

    values: tuple[float, ...]
    bound: float

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        bound = float(self.bound)
        if not values:
            raise InvalidOutcomeSet("outcome set is empty")
        if len(set(values)) != len(values):
            raise InvalidOutcomeSet(f"outcome values must be distinct, got {values}")
        if not bound > 0:
            raise InvalidOutcomeSet(f"bound must be positive, got {bound}")
        worst = max(abs(v) for v in values)
        if worst > bound:
            raise InvalidOutcomeSet(f"|outcome| = {worst} exceeds bound {bound}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "bound", bound)

    @classmethod
    def of(cls, values: Iterable[float], bound: float | None = None) -> OutcomeSet:
        values = tuple(values)
        if bound is None:
            bound = max(abs(float(v)) for v in values) or 1.0
        return cls(values, bound)

    def index(self, value: float) -> int:
        for i, v in enumerate(self.values):
            if abs(v - value) <= 1e-12:
                return i
        raise UnknownOutcome(f"UnknownOutcome: {value} not in {self.values}")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class DiscretePovm:
    """
    A validated finite POVM.

    ``label`` identifies the measurement setting; it is carried into
    correlation records but otherwise opaque.
    """

    label: str
    outcomes: OutcomeSet
    effects: tuple[ComplexMatrix, ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        effects = tuple(np.array(qlinalg.as_matrix(e), copy=True) for e in self.effects)
        if len(effects) != len(self.outcomes):
            raise DimensionMismatch(
                f"{len(self.outcomes)} outcomes but {len(effects)} effects"
            )
        dims = {e.shape[0] for e in effects}
        if len(dims) != 1:
            raise DimensionMismatch(f"effects have differing dimensions {sorted(dims)}")
        for i, e in enumerate(effects):
            defect = qlinalg.hermitian_defect(e)
            if defect > self.tol:
                raise NotHermitian(f"NotHermitian: effect {i} off by {defect:.3e}")
            lo = np.linalg.eigvalsh(0.5 * (e + e.conj().T))[0]
            if lo < -self.tol:
                raise NotPsdEffect(i, float(lo))
            e.setflags(write=False)
        total = sum(effects[1:], effects[0])
        defect = float(np.max(np.abs(total - np.eye(total.shape[0]))))
        if defect > self.tol:
            raise Incomplete(defect)
        object.__setattr__(self, "effects", effects)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    @property
    def bound(self) -> float:
        return self.outcomes.bound

    def effect_of(self, subset: Iterable[float]) -> ComplexMatrix:
        """``M(B)``: the sum of effects over the outcome values in ``subset``."""
        idx = sorted({self.outcomes.index(v) for v in subset})
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for i in idx:
            out = out + self.effects[i]
        return out


def make_povm(
    label: str,
    outcomes: OutcomeSet | Sequence[float],
    effects: Sequence[npt.ArrayLike],
    tol: float = DEFAULT_TOL,
) -> DiscretePovm:
    """
    Build and validate a POVM.

    ``outcomes`` may be an :class:`OutcomeSet` or a plain sequence of values,
    in which case the bound defaults to the largest absolute value.
    """
    if not isinstance(outcomes, OutcomeSet):
        outcomes = OutcomeSet.of(outcomes)
    return DiscretePovm(str(label), outcomes, tuple(effects), tol)


def effect_operator(p: DiscretePovm) -> ComplexMatrix:
    """
    First-moment operator ``W = sum_i value_i * effect_i``.

    Its operator norm never exceeds the POVM's outcome bound; this is
    asserted on every call.
    """
    w = np.zeros((p.dim, p.dim), dtype=np.complex128)
    for value, e in zip(p.outcomes.values, p.effects):
        w = w + value * e
    norm = qlinalg.operator_norm(w)
    assert norm <= p.bound + NORM_SLACK, f"||W|| = {norm} exceeds bound {p.bound}"
    return w


def spin_matrix(theta: float) -> ComplexMatrix:
    """``(|u><u| - |d><d|) cos 2t + (|u><d| + |d><u|) sin 2t``."""
    c, s = np.cos(2 * theta), np.sin(2 * theta)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


def spin_observable(theta: float, label: str | None = None) -> DiscretePovm:
    """
    Projective +/-1 measurement of the spin component at angle ``theta``.

    The effects are the spectral projectors of :func:`spin_matrix`, written in
    closed form as ``(I +/- J) / 2``.
    """
    j = spin_matrix(theta)
    eye = np.eye(2, dtype=np.complex128)
    if label is None:
        label = f"theta={theta:.12g}"
    return DiscretePovm(label, OutcomeSet((1.0, -1.0), 1.0), (0.5 * (eye + j), 0.5 * (eye - j)))


def noise_povm(dim: int = 2, label: str = "noise") -> DiscretePovm:
    """Uninformative +/-1 POVM with both effects ``I/2``; its ``W`` vanishes."""
    half = 0.5 * np.eye(dim, dtype=np.complex128)
    return DiscretePovm(label, OutcomeSet((1.0, -1.0), 1.0), (half, half))


def similarity_holds(alice: DiscretePovm, bob: DiscretePovm, tol: float = DEFAULT_TOL) -> bool:
    """
    Whether Alice's and Bob's devices agree at the level of first moments.

    Only the ``W`` operators are compared; two POVMs with different effects
    but the same ``W`` count as similar.
    """
    if alice.dim != bob.dim:
        raise DimensionMismatch(f"dimensions differ: {alice.dim} vs {bob.dim}")
    diff = effect_operator(alice) - effect_operator(bob)
    return float(np.max(np.abs(diff))) <= tol


def joint_expectation_operator(
    p1: DiscretePovm, p2: DiscretePovm, symmetrized: bool = False
) -> ComplexMatrix:
    """``W1 (x) W2`` or its symmetrized version."""
    w1, w2 = effect_operator(p1), effect_operator(p2)
    if symmetrized:
        if p1.dim != p2.dim:
            raise DimensionMismatch(
                f"symmetrized joint measurement needs equal dimensions, got {p1.dim} and {p2.dim}"
            )
        return qlinalg.sym_tensor(w1, w2)
    return np.kron(w1, w2)
