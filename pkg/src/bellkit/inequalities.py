"""
Bell-type inequalities, separable-state bounds and sufficient conditions.

Every check returns an :class:`InequalityReport`. Correlation arguments may be
:class:`~bellkit.expectations.CorrelationRecord` instances or bare floats;
records are kept on the report so it stays self-describing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence, Union

import numpy as np
import numpy.typing as npt

from .errors import (
    BoundMismatch,
    BoundNotUnit,
    DifferentStates,
    InvalidGammaConstraint,
    NonpositiveBound,
    NotSymmetrizedRep,
    OutOfRange,
    ZeroGammas,
)
from .expectations import CorrelationRecord, bob_bob_correlation, correlation
from .measurements import DiscretePovm, effect_operator, similarity_holds
from .qlinalg import trace_product
from .states import (
    DensityOperator,
    SeparableRepresentation,
    assemble,
    is_special_form,
    mix_representations,
    same_state,
    sigma_sym_of,
)

DEFAULT_TOL = 1e-9
SCALAR_SLACK = 1e-12
DEFAULT_ALPHA_GRID = tuple(np.linspace(0.0, 1.0, 11))

Correlation = Union[CorrelationRecord, float]


@dataclass(frozen=True)
class InequalityReport:
    """
    Outcome of checking ``lhs <= rhs``.

    ``slack`` is ``rhs - lhs``; the inequality counts as violated when the
    slack is below ``-tol``.
    """

    name: str
    lhs: float
    rhs: float
    tol: float = DEFAULT_TOL
    inputs: tuple[CorrelationRecord, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def violated(self) -> bool:
        return self.slack < -self.tol

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "violated": self.violated,
            "tol": self.tol,
            "inputs": [r.to_dict() for r in self.inputs],
            "notes": list(self.notes),
        }


def _report(name, lhs, rhs, tol, values=(), notes=()) -> InequalityReport:
    records = tuple(v for v in values if isinstance(v, CorrelationRecord))
    return InequalityReport(name, float(lhs), float(rhs), tol, records, tuple(notes))


def scalar_bound(x: npt.ArrayLike, y: npt.ArrayLike):
    """
    ``1 - x*y``, an upper bound on ``|x - y|`` whenever ``|x|, |y| <= 1``.

    Works elementwise on arrays.
    """
    xa, ya = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any(np.abs(xa) > 1 + SCALAR_SLACK) or np.any(np.abs(ya) > 1 + SCALAR_SLACK):
        raise OutOfRange("scalar_bound needs |x| <= 1 and |y| <= 1")
    out = 1.0 - xa * ya
    return float(out) if out.ndim == 0 else out


def _check_bounds(c1: float, c2: float) -> None:
    if not (c1 > 0 and c2 > 0):
        raise NonpositiveBound(f"outcome bounds must be positive, got C1={c1}, C2={c2}")


def bell_original(
    e_ab: Correlation,
    e_ac: Correlation,
    e_bc: Correlation,
    c1: float = 1.0,
    c2: float = 1.0,
    tol: float = DEFAULT_TOL,
) -> InequalityReport:
    """
    Bell's inequality in perfect-correlation form,
    ``|E(a,b) - E(a,c)| <= C1*C2 - (C1/C2) E(b,c)``.

    Holds for every classical model but can fail for separable quantum
    states: on :func:`~bellkit.states.rho_zero` with spin angles
    ``(0, pi/6, pi/3)`` the left side is 1 and the right side 3/4.
    """
    _check_bounds(c1, c2)
    lhs = abs(float(e_ab) - float(e_ac))
    rhs = c1 * c2 - (c1 / c2) * float(e_bc)
    return _report("bell_original", lhs, rhs, tol, (e_ab, e_ac, e_bc))


def chsh_value(e_ab: Correlation, e_cb: Correlation, e_cd: Correlation, e_ad: Correlation) -> float:
    return abs(float(e_ab) + float(e_cb) + float(e_cd) - float(e_ad))


def chsh_report(
    e_ab: Correlation,
    e_cb: Correlation,
    e_cd: Correlation,
    e_ad: Correlation,
    c1: float = 1.0,
    c2: float = 1.0,
    tol: float = DEFAULT_TOL,
) -> InequalityReport:
    """CHSH: ``|E(a,b) + E(c,b) + E(c,d) - E(a,d)| <= 2*C1*C2``."""
    _check_bounds(c1, c2)
    return _report(
        "chsh", chsh_value(e_ab, e_cb, e_cd, e_ad), 2 * c1 * c2, tol, (e_ab, e_cb, e_cd, e_ad)
    )


@dataclass(frozen=True)
class GammaVector:
    """
    Coefficients of the extended CHSH combination
    ``g1 E(a,b) + g2 E(c,b) + g3 E(c,d) + g4 E(a,d)``.

    The combination is bounded by ``2 * max|g_i| * C1 * C2`` for separable
    states provided ``g1*g4 = -g2*g3`` or ``g1*g2 = -g3*g4``.
    """

    values: tuple[float, float, float, float]

    def __post_init__(self):
        vals = tuple(float(g) for g in self.values)
        if len(vals) != 4:
            raise ValueError(f"need four coefficients, got {len(vals)}")
        if sum(abs(g) for g in vals) == 0:
            raise ZeroGammas("at least one coefficient must be nonzero")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, *g: float) -> GammaVector:
        return cls(tuple(g))

    @property
    def gamma0(self) -> float:
        return max(abs(g) for g in self.values)

    @property
    def residuals(self) -> tuple[float, float]:
        """``(|g1 g4 + g2 g3|, |g1 g2 + g3 g4|)``."""
        g1, g2, g3, g4 = self.values
        return abs(g1 * g4 + g2 * g3), abs(g1 * g2 + g3 * g4)

    def branch(self, tol: float = DEFAULT_TOL) -> str | None:
        """Which constraint holds (relative to ``gamma0**2``), or None."""
        scale = tol * self.gamma0**2
        r_ad, r_cb = self.residuals
        if r_ad <= scale:
            return "g1*g4 = -g2*g3"
        if r_cb <= scale:
            return "g1*g2 = -g3*g4"
        return None

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        return self.branch(tol) is not None


CHSH_GAMMA = GammaVector((1.0, 1.0, 1.0, -1.0))


def extended_chsh(
    gammas: GammaVector | Sequence[float],
    e_ab: Correlation,
    e_cb: Correlation,
    e_cd: Correlation,
    e_ad: Correlation,
    c1: float = 1.0,
    c2: float = 1.0,
    tol: float = DEFAULT_TOL,
) -> InequalityReport:
    """
    Extended CHSH inequality
    ``|g1 E(a,b) + g2 E(c,b) + g3 E(c,d) + g4 E(a,d)| <= 2 max|g_i| C1 C2``.

    Raises
    ------
    InvalidGammaConstraint
        If neither ``g1 g4 + g2 g3`` nor ``g1 g2 + g3 g4`` vanishes
        (relative to ``tol * max|g_i|**2``).
    """
    if not isinstance(gammas, GammaVector):
        gammas = GammaVector(tuple(gammas))
    _check_bounds(c1, c2)
    branch = gammas.branch(tol)
    if branch is None:
        raise InvalidGammaConstraint(*gammas.residuals)
    g1, g2, g3, g4 = gammas.values
    lhs = abs(g1 * float(e_ab) + g2 * float(e_cb) + g3 * float(e_cd) + g4 * float(e_ad))
    rhs = 2 * gammas.gamma0 * c1 * c2
    return _report(
        "extended_chsh",
        lhs,
        rhs,
        tol,
        (e_ab, e_cb, e_cd, e_ad),
        (f"gamma={list(gammas.values)}", f"branch: {branch}"),
    )


def _bob_bound(pb1: DiscretePovm, pb2: DiscretePovm) -> float:
    # both Bob settings must be bounded by the same C2; the larger bound is valid for both
    return max(pb1.bound, pb2.bound)


def _alice_terms(rep, pa, pb1, pb2):
    rho_s = assemble(rep)
    e1 = correlation(rho_s, pa, pb1, rep.symmetrized)
    e2 = correlation(rho_s, pa, pb2, rep.symmetrized)
    return rho_s, e1, e2


def _separable_rhs(rep, pa, pb1, pb2) -> tuple[float, CorrelationRecord]:
    c1, c2 = pa.bound, _bob_bound(pb1, pb2)
    bb = bob_bob_correlation(rep, pb1, pb2)
    return c1 * c2 - (c1 / c2) * bb.value, bb


def separable_bound(
    rep: SeparableRepresentation,
    pa: DiscretePovm,
    pb1: DiscretePovm,
    pb2: DiscretePovm,
    tol: float = DEFAULT_TOL,
) -> InequalityReport:
    """
    Upper bound on ``|E(a,b1) - E(a,b2)|`` for a separable state, built from
    one of its representations:

        C1*C2 - (C1/C2) <l2 l2'>_sigma

    where ``<l2 l2'>_sigma`` is Bob's two settings measured jointly on the
    representation's auxiliary state (see
    :func:`~bellkit.expectations.bob_bob_correlation`). Symmetrized
    representations use symmetrized joint measurements throughout.
    """
    _, e1, e2 = _alice_terms(rep, pa, pb1, pb2)
    rhs, bb = _separable_rhs(rep, pa, pb1, pb2)
    name = "separable_bound_sym" if rep.symmetrized else "separable_bound"
    return _report(name, abs(e1.value - e2.value), rhs, tol, (e1, e2, bb))


def separable_bound_inf(
    reps: Sequence[SeparableRepresentation],
    pa: DiscretePovm,
    pb1: DiscretePovm,
    pb2: DiscretePovm,
    tol: float = DEFAULT_TOL,
    alphas: Sequence[float] | None = DEFAULT_ALPHA_GRID,
) -> InequalityReport:
    """
    :func:`separable_bound` minimized over several representations of one
    state and, unless ``alphas`` is None, over their pairwise mixtures on the
    given grid. The result is an upper approximation of the infimum over all
    representations.
    """
    reps = list(reps)
    if not reps:
        raise ValueError("need at least one representation")
    ref = assemble(reps[0])
    for r in reps[1:]:
        if not same_state(ref, assemble(r)):
            raise DifferentStates("all representations must describe the same state")
    _, e1, e2 = _alice_terms(reps[0], pa, pb1, pb2)

    best_rhs, best_bb, best_tag = None, None, None
    candidates = [(f"rep[{i}]", r) for i, r in enumerate(reps)]
    if alphas is not None:
        for i, j in combinations(range(len(reps)), 2):
            for a in alphas:
                if 0.0 < a < 1.0:
                    candidates.append((f"mix(rep[{i}], rep[{j}], {a:.6g})", mix_representations(reps[i], reps[j], a)))
    for tag, r in candidates:
        rhs, bb = _separable_rhs(r, pa, pb1, pb2)
        if best_rhs is None or rhs < best_rhs:
            best_rhs, best_bb, best_tag = rhs, bb, tag
    notes = (
        f"rhs minimized over {len(candidates)} candidate representations; attained at {best_tag}",
        "rhs is an upper approximation of the infimum over all separable representations",
    )
    return _report("separable_bound_inf", abs(e1.value - e2.value), best_rhs, tol, (e1, e2, best_bb), notes)


def two_term_linear_bound(
    gamma1: float,
    gamma2: float,
    rep: SeparableRepresentation,
    pa: DiscretePovm,
    pb1: DiscretePovm,
    pb2: DiscretePovm,
    tol: float = DEFAULT_TOL,
) -> InequalityReport:
    """
    ``|g1 E(a,b1) + g2 E(a,b2)| <= g0 C1 C2 + (g1 g2 / g0)(C1/C2) <l2 l2'>_sigma``
    with ``g0 = max(|g1|, |g2|)``.
    """
    g1, g2 = float(gamma1), float(gamma2)
    if abs(g1) + abs(g2) == 0:
        raise ZeroGammas("gamma1 and gamma2 are both zero")
    g0 = max(abs(g1), abs(g2))
    _, e1, e2 = _alice_terms(rep, pa, pb1, pb2)
    c1, c2 = pa.bound, _bob_bound(pb1, pb2)
    bb = bob_bob_correlation(rep, pb1, pb2)
    lhs = abs(g1 * e1.value + g2 * e2.value)
    rhs = g0 * c1 * c2 + (g1 * g2 / g0) * (c1 / c2) * bb.value
    return _report("two_term_linear_bound", lhs, rhs, tol, (e1, e2, bb), (f"gamma=({g1:g}, {g2:g})",))


def as_symmetric(rep: SeparableRepresentation) -> SeparableRepresentation:
    """
    Return ``rep`` as a symmetrized representation.

    Plain representations are accepted only in special form (identical
    factors in every term), where symmetrizing leaves the state unchanged.
    """
    if rep.symmetrized:
        return rep
    if not is_special_form(rep):
        raise NotSymmetrizedRep(
            "a symmetrized representation (or one with identical factors per term) is required"
        )
    return SeparableRepresentation(rep.terms, True, rep.label)


def quantum_bell_analogue(
    rep: SeparableRepresentation,
    pa: DiscretePovm,
    pb1: DiscretePovm,
    pb2: DiscretePovm,
    tol: float = DEFAULT_TOL,
    alice_b1: DiscretePovm | None = None,
) -> InequalityReport:
    """
    Quantum analogue of Bell's inequality for identical subsystems:

        |E(a,b1) - E(a,b2)| <= C**2 - <l1 l2>_sigma^(b1,b2)

    with all correlations symmetrized and ``sigma`` the auxiliary state of the
    representation. Alice and Bob must be similar at setting ``b1``: if
    Alice's device there (``alice_b1``) is given it is used for the sigma term
    and checked against ``pb1``; otherwise Bob's device is taken for both.
    A failed similarity check is recorded in the report notes.
    """
    rep = as_symmetric(rep)
    bounds = {pa.bound, pb1.bound, pb2.bound}
    if alice_b1 is not None:
        bounds.add(alice_b1.bound)
    if len(bounds) != 1:
        raise BoundMismatch(f"all outcome bounds must coincide, got {sorted(bounds)}")
    (c,) = bounds
    notes = []
    first = pb1
    if alice_b1 is not None:
        first = alice_b1
        if not similarity_holds(alice_b1, pb1):
            notes.append("warning: Alice and Bob are not similar at setting b1")
    else:
        notes.append("similarity assumed: Bob's device used on both sides at b1")
    _, e1, e2 = _alice_terms(rep, pa, pb1, pb2)
    sigma = sigma_sym_of(rep)
    es = correlation(sigma, first, pb2, symmetrized=True)
    return _report("quantum_bell_analogue", abs(e1.value - e2.value), c * c - es.value, tol, (e1, e2, es), notes)


class ConditionSign(enum.Enum):
    PLUS_SIGN = "PlusSign"
    MINUS_SIGN = "MinusSign"
    NOT_SATISFIED = "NotSatisfied"


class Restriction(enum.Enum):
    PLUS = "Plus"
    MINUS = "Minus"
    NEITHER = "Neither"


def _sign_of(plus_ok: bool, minus_ok: bool) -> ConditionSign:
    # exact ties (both hold) resolve to plus
    if plus_ok:
        return ConditionSign.PLUS_SIGN
    if minus_ok:
        return ConditionSign.MINUS_SIGN
    return ConditionSign.NOT_SATISFIED


@dataclass(frozen=True)
class VbiResult:
    """
    Result of comparing ``<l1 l2>_sigma`` with ``<l1 l2>_rho_s``.

    ``sign_consistent`` says whether the detected sign agrees with the sign
    of the same-setting correlation ``<l1 l2>_rho_s^(b1,b1)``, which the
    condition requires.
    """

    sign: ConditionSign
    sigma_value: float
    state_value: float
    diagonal_value: float
    sign_consistent: bool = field(default=True)


def condition_vbi(
    rep: SeparableRepresentation,
    pb1: DiscretePovm,
    pb2: DiscretePovm,
    rho_s: DensityOperator,
    tol: float = DEFAULT_TOL,
) -> VbiResult:
    """
    Test ``<l1 l2>_sigma^(b1,b2) = +/- <l1 l2>_rho_s^(b1,b2)``.

    When it holds the quantum analogue coincides with Bell's inequality in
    perfect-correlation (plus) or anti-correlation (minus) form.
    """
    rep = as_symmetric(rep)
    if not same_state(assemble(rep), rho_s):
        raise DifferentStates("representation does not assemble to rho_s")
    sigma = sigma_sym_of(rep)
    sv = correlation(sigma, pb1, pb2, symmetrized=True).value
    rv = correlation(rho_s, pb1, pb2, symmetrized=True).value
    diag = correlation(rho_s, pb1, pb1, symmetrized=True).value
    sign = _sign_of(abs(sv - rv) <= tol, abs(sv + rv) <= tol)
    if sign is ConditionSign.PLUS_SIGN:
        consistent = diag >= -tol
    elif sign is ConditionSign.MINUS_SIGN:
        consistent = diag <= tol
    else:
        consistent = False
    return VbiResult(sign, sv, rv, diag, consistent)


def condition_sor(rep: SeparableRepresentation, pb1: DiscretePovm, tol: float = DEFAULT_TOL) -> ConditionSign:
    """
    Termwise condition ``tr[rho_m W] = +/- tr[rho'_m W]`` with one sign for
    all terms; it implies :func:`condition_vbi`.
    """
    rep = as_symmetric(rep)
    w = effect_operator(pb1)
    diffs, sums = [], []
    for t in rep.terms:
        a = trace_product(t.left.matrix, w).real
        b = trace_product(t.right.matrix, w).real
        diffs.append(abs(a - b))
        sums.append(abs(a + b))
    return _sign_of(max(diffs) <= tol, max(sums) <= tol)


def bell_restriction(rho_s: DensityOperator, p: DiscretePovm, tol: float = DEFAULT_TOL) -> Restriction:
    """Classify ``<l1 l2>_rho_s^(b1,b1)`` as +1, -1 or neither (unit-bounded outcomes only)."""
    if abs(p.bound - 1.0) > SCALAR_SLACK:
        raise BoundNotUnit(f"restriction is defined for outcome bound 1, got {p.bound}")
    v = correlation(rho_s, p, p, symmetrized=True).value
    if abs(v - 1.0) <= tol:
        return Restriction.PLUS
    if abs(v + 1.0) <= tol:
        return Restriction.MINUS
    return Restriction.NEITHER
