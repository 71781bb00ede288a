"""Joint probabilities and product expectation values."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import qlinalg
from .errors import DimensionMismatch, ImaginaryTrace
from .measurements import DiscretePovm, joint_expectation_operator
from .states import DensityOperator, SeparableRepresentation, sigma2_of, sigma_sym_of

IMAG_TOL = 1e-10
PROB_SLACK = 1e-10


@dataclass(frozen=True)
class CorrelationRecord:
    """One product expectation value together with where it came from."""

    state_id: str
    setting_pair: tuple[str, str]
    symmetrized: bool
    value: float

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> dict:
        return {
            "state": self.state_id,
            "settings": list(self.setting_pair),
            "symmetrized": self.symmetrized,
            "value": self.value,
        }


def _check_dims(rho: DensityOperator, p1: DiscretePovm, p2: DiscretePovm) -> None:
    if p1.dim * p2.dim != rho.dim:
        raise DimensionMismatch(
            f"POVM dimensions {p1.dim} x {p2.dim} do not match state dimension {rho.dim}"
        )
    if rho.factor_dims is not None and rho.factor_dims != (p1.dim, p2.dim):
        raise DimensionMismatch(
            f"state factors {rho.factor_dims} do not match POVMs ({p1.dim}, {p2.dim})"
        )


def _real_trace(rho: DensityOperator, op) -> float:
    t = qlinalg.trace_product(rho.matrix, op)
    if abs(t.imag) > IMAG_TOL:
        raise ImaginaryTrace(f"trace has imaginary part {t.imag:.3e}")
    return t.real


def joint_probability(
    rho: DensityOperator,
    p1: DiscretePovm,
    p2: DiscretePovm,
    b1: Iterable[float],
    b2: Iterable[float],
    symmetrized: bool = False,
) -> float:
    """Probability that outcome 1 lies in ``b1`` and outcome 2 in ``b2``."""
    _check_dims(rho, p1, p2)
    m1, m2 = p1.effect_of(b1), p2.effect_of(b2)
    op = qlinalg.sym_tensor(m1, m2) if symmetrized else np.kron(m1, m2)
    p = _real_trace(rho, op)
    assert -PROB_SLACK <= p <= 1 + PROB_SLACK, f"probability {p} out of range"
    return min(1.0, max(0.0, p))


def correlation(
    rho: DensityOperator,
    p1: DiscretePovm,
    p2: DiscretePovm,
    symmetrized: bool = False,
) -> CorrelationRecord:
    """
    Expectation of the product of the two outcomes, ``tr[rho (W1 (x) W2)]``.

    With ``symmetrized=True`` the symmetrized tensor product is used, as for
    joint measurements on identical subsystems.
    """
    _check_dims(rho, p1, p2)
    value = _real_trace(rho, joint_expectation_operator(p1, p2, symmetrized))
    return CorrelationRecord(rho.label, (p1.label, p2.label), symmetrized, value)


def correlation_from_probabilities(
    rho: DensityOperator, p1: DiscretePovm, p2: DiscretePovm, symmetrized: bool = False
) -> float:
    """Same quantity as :func:`correlation`, summed over joint outcome probabilities."""
    total = 0.0
    for v1 in p1.outcomes.values:
        for v2 in p2.outcomes.values:
            total += v1 * v2 * joint_probability(rho, p1, p2, [v1], [v2], symmetrized)
    return total


def auxiliary_state(rep: SeparableRepresentation) -> DensityOperator:
    """``sigma_sym_of`` for symmetrized representations, ``sigma2_of`` otherwise."""
    return sigma_sym_of(rep) if rep.symmetrized else sigma2_of(rep)


def bob_bob_correlation(
    rep: SeparableRepresentation, pb1: DiscretePovm, pb2: DiscretePovm
) -> CorrelationRecord:
    """
    Correlation of two Bob-side settings measured jointly on the auxiliary
    two-copy state of ``rep``.

    This is ``tr[sigma {W_b1 (x) W_b2}_sym]`` where ``sigma`` comes from
    :func:`auxiliary_state`. For ``pb1 is pb2`` the value is non-negative.
    """
    sigma = auxiliary_state(rep)
    return correlation(sigma, pb1, pb2, symmetrized=True)
