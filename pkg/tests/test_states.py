import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellkit import qlinalg
from bellkit.errors import (
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
from bellkit.states import (
    DensityOperator,
    assemble,
    is_special_form,
    is_swap_symmetric,
    make_density,
    maximally_mixed,
    mix_representations,
    pure_state,
    representation,
    rho_zero,
    rho_zero_representation,
    same_state,
    sigma1_of,
    sigma2_of,
    sigma_sym_of,
)
from bellkit.sweep import random_product_terms

from conftest import random_density


def test_rho_zero_matrix():
    expected = np.zeros((4, 4))
    expected[1, 1] = expected[2, 2] = 0.5
    assert np.array_equal(rho_zero().matrix, expected)
    assert rho_zero().factor_dims == (2, 2)


@pytest.mark.parametrize(
    "m, err",
    [
        (np.array([[0.5, 0.1], [0.0, 0.5]]), NotHermitian),
        (np.diag([0.5, 0.4]), TraceNotOne),
        (np.diag([1.5, -0.5]), NotPsd),
    ],
)
def test_validation_errors(m, err):
    with pytest.raises(err, match=err.__name__):
        make_density(m)


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        make_density(np.diag([0.5, 0.4]))


def test_factor_dims_must_multiply():
    with pytest.raises(DimensionMismatch):
        make_density(np.eye(4) / 4, (3, 2))


def test_matrix_is_read_only():
    rho = rho_zero()
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_rho_zero_representations_assemble():
    for sym in (False, True):
        assert same_state(assemble(rho_zero_representation(sym)), rho_zero())


def test_representation_validation():
    up = pure_state(qlinalg.UP)
    with pytest.raises(InvalidRepresentation):
        representation([(0.5, up, up)])
    with pytest.raises(InvalidRepresentation):
        representation([(1.0, up, up), (0.0, up, up)])
    with pytest.raises(InvalidRepresentation):
        representation([(0.5, up, up), (0.5, up, maximally_mixed(3))])
    with pytest.raises(InvalidRepresentation):
        representation([(1.0, up, maximally_mixed(3))], symmetrized=True)


def test_sigma_functions_respect_symmetrization():
    with pytest.raises(SymmetrizedRepUnsupported):
        sigma2_of(rho_zero_representation(True))
    with pytest.raises(SymmetrizedRepUnsupported):
        sigma1_of(rho_zero_representation(True))
    with pytest.raises(NotSymmetrizedRep):
        sigma_sym_of(rho_zero_representation(False))


def test_sigma_sym_of_rho_zero():
    up, down = qlinalg.projector(qlinalg.UP), qlinalg.projector(qlinalg.DOWN)
    expected = 0.5 * (np.kron(up, up) + np.kron(down, down))
    assert np.allclose(sigma_sym_of(rho_zero_representation(True)).matrix, expected)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_auxiliary_states_are_states(seed, d):
    rng = np.random.default_rng(seed)
    terms = random_product_terms(rng, d, d)
    plain = representation(terms)
    sym = representation(terms, symmetrized=True)
    for s in (sigma1_of(plain), sigma2_of(plain), sigma_sym_of(sym)):
        assert s.dim == d * d
        assert is_swap_symmetric(s)


def _two_reps_of_mixed():
    z = [pure_state(qlinalg.UP), pure_state(qlinalg.DOWN)]
    x = [pure_state(np.array([1, 1]) / np.sqrt(2)), pure_state(np.array([1, -1]) / np.sqrt(2))]
    r1 = representation([(0.25, a, b) for a in z for b in z])
    r2 = representation([(0.25, a, b) for a in x for b in z])
    return r1, r2


def test_mixture_is_linear_in_sigma2():
    r1, r2 = _two_reps_of_mixed()
    s1, s2 = sigma2_of(r1).matrix, sigma2_of(r2).matrix
    for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
        mix = mix_representations(r1, r2, alpha)
        assert same_state(assemble(mix), maximally_mixed(2, 2))
        assert np.max(np.abs(sigma2_of(mix).matrix - (alpha * s1 + (1 - alpha) * s2))) <= 1e-12


def test_mixture_endpoints_return_original_terms():
    r1, r2 = _two_reps_of_mixed()
    assert len(mix_representations(r1, r2, 1.0)) == len(r1)
    assert len(mix_representations(r1, r2, 0.0)) == len(r2)


def test_mixture_errors():
    r1, _ = _two_reps_of_mixed()
    with pytest.raises(DifferentStates):
        mix_representations(r1, rho_zero_representation(), 0.5)
    with pytest.raises(IncompatibleReps):
        mix_representations(rho_zero_representation(True), rho_zero_representation(False), 0.5)


def test_swap_symmetry(rng):
    assert is_swap_symmetric(rho_zero())
    ud = pure_state(np.kron(qlinalg.UP, qlinalg.DOWN))
    ud = DensityOperator(ud.matrix, (2, 2))
    assert not is_swap_symmetric(ud)
    with pytest.raises(NotBipartiteSquare):
        is_swap_symmetric(make_density(random_density(rng, 4)))
    with pytest.raises(NotBipartiteSquare):
        is_swap_symmetric(maximally_mixed(2, 3))


def test_special_form():
    up = pure_state(qlinalg.UP)
    down = pure_state(qlinalg.DOWN)
    assert is_special_form(representation([(0.5, up, up), (0.5, down, down)]))
    assert not is_special_form(rho_zero_representation())
