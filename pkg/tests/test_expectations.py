import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellkit.errors import DimensionMismatch
from bellkit.expectations import (
    bob_bob_correlation,
    correlation,
    correlation_from_probabilities,
    joint_probability,
)
from bellkit.states import make_density, maximally_mixed, representation, rho_zero
from bellkit.measurements import spin_observable
from bellkit.sweep import random_povm, random_product_terms

from conftest import angles, random_density


@given(angles, angles)
def test_rho_zero_closed_form(ta, tb):
    a, b = spin_observable(ta), spin_observable(tb)
    expected = -np.cos(2 * ta) * np.cos(2 * tb)
    assert abs(correlation(rho_zero(), a, b).value - expected) <= 1e-12
    assert abs(correlation(rho_zero(), a, b, symmetrized=True).value - expected) <= 1e-12


def test_record_provenance():
    rec = correlation(rho_zero(), spin_observable(0, "a"), spin_observable(1, "b"))
    assert rec.state_id == "rho0"
    assert rec.setting_pair == ("a", "b")
    assert float(rec) == rec.value
    assert rec.to_dict()["settings"] == ["a", "b"]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]), st.booleans())
def test_trace_matches_probability_sum(seed, d, sym):
    rng = np.random.default_rng(seed)
    rho = make_density(random_density(rng, d * d), (d, d))
    p1 = random_povm(rng, d, 1.5, "p")
    p2 = random_povm(rng, d, 0.7, "q")
    direct = correlation(rho, p1, p2, sym).value
    via_probs = correlation_from_probabilities(rho, p1, p2, sym)
    assert abs(direct - via_probs) <= 1e-10
    assert abs(direct) <= 1.5 * 0.7 + 1e-9


def test_joint_probability_marginals():
    rho = rho_zero()
    a, b = spin_observable(0.0), spin_observable(0.0)
    assert joint_probability(rho, a, b, [1], [-1]) == pytest.approx(0.5)
    assert joint_probability(rho, a, b, [1], [1]) == pytest.approx(0.0)
    assert joint_probability(rho, a, b, [1, -1], [1, -1]) == pytest.approx(1.0)


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        correlation(maximally_mixed(2, 3), spin_observable(0), spin_observable(0))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]), st.booleans())
def test_bob_bob_diagonal_nonnegative(seed, d, sym):
    rng = np.random.default_rng(seed)
    rep = representation(random_product_terms(rng, d, d), symmetrized=sym)
    p = random_povm(rng, d, 1.0, "b")
    assert bob_bob_correlation(rep, p, p).value >= -1e-12
