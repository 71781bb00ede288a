"""
Density operators and separable representations.

A :class:`SeparableRepresentation` is the explicit convex mixture a separable
state is built from. Besides assembling the state itself, a representation
induces auxiliary two-copy states: ``sigma2_of`` (right factors, doubled),
``sigma1_of`` (left factors, doubled) and, for symmetrized representations,
``sigma_sym_of`` (both factors, each doubled, averaged).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import numpy.typing as npt

from . import qlinalg
from .errors import (
    DifferentStates,
    DimensionMismatch,
    IncompatibleReps,
    InvalidRepresentation,
    NotBipartiteSquare,
    NotHermitian,
    NotPsd,
    NotSymmetrizedRep,
    SymmetrizedRepUnsupported,
    TraceNotOne,
)
from .qlinalg import DEFAULT_TOL, ComplexMatrix

SAME_STATE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """
    Validated density matrix, optionally recording a bipartite factorization.

    Construction checks Hermiticity, unit trace and positivity within ``tol``
    and raises :class:`NotHermitian`, :class:`TraceNotOne` or :class:`NotPsd`
    naming the measured defect. The stored matrix is read-only.
    """

    matrix: ComplexMatrix
    factor_dims: tuple[int, int] | None = None
    label: str = "rho"
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        m = np.array(qlinalg.as_matrix(self.matrix), copy=True)
        dim = m.shape[0]
        if self.factor_dims is not None:
            d1, d2 = (int(d) for d in self.factor_dims)
            if d1 < 1 or d2 < 1 or d1 * d2 != dim:
                raise DimensionMismatch(
                    f"factor_dims {self.factor_dims} do not multiply to dimension {dim}"
                )
            object.__setattr__(self, "factor_dims", (d1, d2))
        defect = qlinalg.hermitian_defect(m)
        if defect > self.tol:
            raise NotHermitian(f"NotHermitian: max|rho - rho^H| = {defect:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > self.tol:
            raise TraceNotOne(f"TraceNotOne: trace = {tr.real:.12g}{tr.imag:+.3g}j")
        w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        if w[0] < -self.tol:
            raise NotPsd(f"NotPsd: smallest eigenvalue {w[0]:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def relabel(self, label: str) -> DensityOperator:
        return DensityOperator(self.matrix, self.factor_dims, label, self.tol)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def make_density(
    m: npt.ArrayLike,
    factor_dims: tuple[int, int] | None = None,
    label: str = "rho",
    tol: float = DEFAULT_TOL,
) -> DensityOperator:
    """Validate ``m`` and wrap it as a :class:`DensityOperator`."""
    return DensityOperator(np.asarray(m), factor_dims, label, tol)


def pure_state(vec: npt.ArrayLike, label: str = "psi") -> DensityOperator:
    return DensityOperator(qlinalg.projector(vec), None, label)


def maximally_mixed(d1: int, d2: int | None = None) -> DensityOperator:
    if d2 is None:
        return DensityOperator(np.eye(d1) / d1, None, "mixed")
    n = d1 * d2
    return DensityOperator(np.eye(n) / n, (d1, d2), "mixed")


def rho_zero() -> DensityOperator:
    """The separable two-qubit state ``(|ud><ud| + |du><du|) / 2``."""
    up, down = qlinalg.projector(qlinalg.UP), qlinalg.projector(qlinalg.DOWN)
    m = 0.5 * (np.kron(up, down) + np.kron(down, up))
    return DensityOperator(m, (2, 2), "rho0")


def _as_density(x) -> DensityOperator:
    if isinstance(x, DensityOperator):
        return x
    return DensityOperator(np.asarray(x))


class Term(NamedTuple):
    weight: float
    left: DensityOperator
    right: DensityOperator


@dataclass(frozen=True, eq=False)
class SeparableRepresentation:
    """
    Weighted product-state decomposition ``sum_m w_m left_m (x) right_m``.

    With ``symmetrized=True`` each product is replaced by its symmetrized
    tensor product when the state is assembled, and left/right dimensions
    must agree. Weights must be positive and sum to one.
    """

    terms: tuple[Term, ...]
    symmetrized: bool = False
    label: str = "rho_s"

    def __post_init__(self):
        terms = tuple(
            Term(float(w), _as_density(left), _as_density(right)) for w, left, right in self.terms
        )
        if not terms:
            raise InvalidRepresentation("a representation needs at least one term")
        weights = np.array([t.weight for t in terms])
        if np.any(weights <= 0):
            raise InvalidRepresentation(f"weights must be positive, got {weights.tolist()}")
        if abs(weights.sum() - 1.0) > DEFAULT_TOL:
            raise InvalidRepresentation(f"weights sum to {weights.sum():.12g}, not 1")
        d1 = {t.left.dim for t in terms}
        d2 = {t.right.dim for t in terms}
        if len(d1) != 1 or len(d2) != 1:
            raise InvalidRepresentation(
                f"left dims {sorted(d1)} and right dims {sorted(d2)} must each be uniform"
            )
        if self.symmetrized and d1 != d2:
            raise InvalidRepresentation(
                "symmetrized representation needs equal left and right dimensions"
            )
        object.__setattr__(self, "terms", terms)

    @property
    def dims(self) -> tuple[int, int]:
        t = self.terms[0]
        return t.left.dim, t.right.dim

    @property
    def weights(self) -> npt.NDArray[np.float64]:
        return np.array([t.weight for t in self.terms])

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


def representation(
    terms: Iterable[tuple[float, npt.ArrayLike, npt.ArrayLike]],
    symmetrized: bool = False,
    label: str = "rho_s",
) -> SeparableRepresentation:
    return SeparableRepresentation(tuple(terms), symmetrized, label)


def rho_zero_representation(symmetrized: bool = False) -> SeparableRepresentation:
    """
    The natural decomposition of :func:`rho_zero`.

    Unsymmetrized it has two terms (up (x) down and down (x) up); symmetrized a
    single term {up (x) down}_sym suffices.
    """
    up = pure_state(qlinalg.UP, "up")
    down = pure_state(qlinalg.DOWN, "down")
    if symmetrized:
        return SeparableRepresentation(((1.0, up, down),), True, "rho0")
    return SeparableRepresentation(((0.5, up, down), (0.5, down, up)), False, "rho0")


def _weighted_sum(pairs: Sequence[tuple[float, ComplexMatrix]]) -> ComplexMatrix:
    out = np.zeros_like(pairs[0][1])
    for w, m in pairs:
        out = out + w * m
    return out


def assemble(rep: SeparableRepresentation) -> DensityOperator:
    """The state a representation describes."""
    prod = qlinalg.sym_tensor if rep.symmetrized else qlinalg.kron
    m = _weighted_sum([(t.weight, prod(t.left.matrix, t.right.matrix)) for t in rep.terms])
    return DensityOperator(m, rep.dims, rep.label)


def sigma2_of(rep: SeparableRepresentation) -> DensityOperator:
    """``sum_m w_m right_m (x) right_m`` on the doubled right space."""
    if rep.symmetrized:
        raise SymmetrizedRepUnsupported(
            "sigma2_of is defined for plain representations; use sigma_sym_of"
        )
    d = rep.dims[1]
    m = _weighted_sum([(t.weight, np.kron(t.right.matrix, t.right.matrix)) for t in rep.terms])
    return DensityOperator(m, (d, d), "sigma2")


def sigma1_of(rep: SeparableRepresentation) -> DensityOperator:
    """``sum_m w_m left_m (x) left_m`` on the doubled left space."""
    if rep.symmetrized:
        raise SymmetrizedRepUnsupported(
            "sigma1_of is defined for plain representations; use sigma_sym_of"
        )
    d = rep.dims[0]
    m = _weighted_sum([(t.weight, np.kron(t.left.matrix, t.left.matrix)) for t in rep.terms])
    return DensityOperator(m, (d, d), "sigma1")


def sigma_sym_of(rep: SeparableRepresentation) -> DensityOperator:
    """``sum_m (w_m / 2)(left_m (x) left_m + right_m (x) right_m)``."""
    if not rep.symmetrized:
        raise NotSymmetrizedRep("sigma_sym_of needs a symmetrized representation")
    d1, d2 = rep.dims
    if d1 != d2:
        raise DimensionMismatch(f"left/right dimensions differ: {d1} vs {d2}")
    m = _weighted_sum(
        [
            (0.5 * t.weight, np.kron(t.left.matrix, t.left.matrix) + np.kron(t.right.matrix, t.right.matrix))
            for t in rep.terms
        ]
    )
    return DensityOperator(m, (d1, d1), "sigma")


def same_state(a: DensityOperator, b: DensityOperator, tol: float = SAME_STATE_TOL) -> bool:
    return a.dim == b.dim and float(np.max(np.abs(a.matrix - b.matrix))) <= tol


def mix_representations(
    r1: SeparableRepresentation, r2: SeparableRepresentation, alpha: float
) -> SeparableRepresentation:
    """
    Convex combination of two representations of the same state.

    The terms of ``r1`` are scaled by ``alpha`` and those of ``r2`` by
    ``1 - alpha``; terms whose weight becomes zero are dropped, so the
    endpoints return the original term lists. The result still represents
    the same state, and its auxiliary states are the matching mixtures.

    Raises
    ------
    IncompatibleReps
        Different dimensions or symmetrization flags.
    DifferentStates
        ``r1`` and ``r2`` assemble to different states (max-abs > 1e-9).
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if r1.dims != r2.dims or r1.symmetrized != r2.symmetrized:
        raise IncompatibleReps(
            f"dims {r1.dims}/{r2.dims}, symmetrized {r1.symmetrized}/{r2.symmetrized}"
        )
    if not same_state(assemble(r1), assemble(r2)):
        raise DifferentStates("representations describe different states")
    terms = [Term(alpha * t.weight, t.left, t.right) for t in r1.terms if alpha > 0]
    terms += [Term((1 - alpha) * t.weight, t.left, t.right) for t in r2.terms if alpha < 1]
    return SeparableRepresentation(tuple(terms), r1.symmetrized, r1.label)


def is_swap_symmetric(rho: DensityOperator, tol: float = DEFAULT_TOL) -> bool:
    """
    Whether ``rho`` is invariant under exchange of its two factors.

    Invariance is tested as ``S rho S == rho`` with ``S`` the flip operator.
    """
    if rho.factor_dims is None or rho.factor_dims[0] != rho.factor_dims[1]:
        raise NotBipartiteSquare(
            f"swap symmetry needs factor_dims (d, d), got {rho.factor_dims}"
        )
    s = qlinalg.swap_operator(rho.factor_dims[0])
    return float(np.max(np.abs(s @ rho.matrix @ s - rho.matrix))) <= tol


def is_special_form(rep: SeparableRepresentation, tol: float = DEFAULT_TOL) -> bool:
    """True when every term has identical left and right factors."""
    if rep.dims[0] != rep.dims[1]:
        return False
    return all(float(np.max(np.abs(t.left.matrix - t.right.matrix))) <= tol for t in rep.terms)
