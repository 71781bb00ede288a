import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellkit import qlinalg
from bellkit.errors import (
    BoundMismatch,
    BoundNotUnit,
    DifferentStates,
    InvalidGammaConstraint,
    NonpositiveBound,
    NotSymmetrizedRep,
    OutOfRange,
    ZeroGammas,
)
from bellkit.expectations import correlation
from bellkit.inequalities import (
    CHSH_GAMMA,
    ConditionSign,
    GammaVector,
    Restriction,
    bell_original,
    bell_restriction,
    chsh_report,
    condition_sor,
    condition_vbi,
    extended_chsh,
    quantum_bell_analogue,
    scalar_bound,
    separable_bound,
    separable_bound_inf,
    two_term_linear_bound,
)
from bellkit.measurements import OutcomeSet, make_povm, spin_observable
from bellkit.states import (
    assemble,
    maximally_mixed,
    pure_state,
    representation,
    rho_zero,
    rho_zero_representation,
)

from conftest import angles

unit = st.floats(-1, 1, allow_nan=False)


def spins(*thetas):
    return [spin_observable(t, n) for t, n in zip(thetas, "abcd")]


def test_bell_original_counterexample():
    a, b, c = spins(0, np.pi / 6, np.pi / 3)
    rho = rho_zero()
    r = bell_original(correlation(rho, a, b), correlation(rho, a, c), correlation(rho, b, c))
    assert r.lhs == pytest.approx(1.0, abs=1e-12)
    assert r.rhs == pytest.approx(0.75, abs=1e-12)
    assert r.violated
    assert [rec.setting_pair for rec in r.inputs] == [("a", "b"), ("a", "c"), ("b", "c")]


def test_report_slack_and_tolerance():
    r = bell_original(0.5, -0.5, 0.0 + 1e-10)
    assert r.slack == pytest.approx(-1e-10)
    assert not r.violated
    assert bell_original(0.5, -0.5, 1e-8).violated


def test_nonpositive_bound():
    with pytest.raises(NonpositiveBound):
        bell_original(0, 0, 0, c1=0.0)


@given(unit, unit)
def test_scalar_bound(x, y):
    assert abs(x - y) <= scalar_bound(x, y) + 1e-15


def test_scalar_bound_range():
    with pytest.raises(OutOfRange):
        scalar_bound(1.5, 0.0)
    xs = np.linspace(-1, 1, 5)
    assert scalar_bound(xs, xs).shape == (5,)


def test_chsh_holds_on_rho_zero():
    a, b, c, d = spins(0, np.pi / 6, np.pi / 3, np.pi / 2)
    rho = rho_zero()
    e = [correlation(rho, x, y) for x, y in ((a, b), (c, b), (c, d), (a, d))]
    r = chsh_report(*e)
    assert r.lhs == pytest.approx(1.75)
    assert not r.violated


@given(angles, angles, angles, angles)
def test_extended_chsh_reduces_to_chsh(ta, tb, tc, td):
    a, b, c, d = spins(ta, tb, tc, td)
    rho = rho_zero()
    e = [correlation(rho, x, y) for x, y in ((a, b), (c, b), (c, d), (a, d))]
    r1, r2 = chsh_report(*e), extended_chsh(CHSH_GAMMA, *e)
    assert r1.lhs == r2.lhs and r1.rhs == r2.rhs


def test_gamma_constraints():
    assert GammaVector.of(1, 2, 3, -6).branch() == "g1*g4 = -g2*g3"
    assert GammaVector.of(1, 2, -2, 1).branch() == "g1*g2 = -g3*g4"
    with pytest.raises(ZeroGammas):
        GammaVector.of(0, 0, 0, 0)
    with pytest.raises(InvalidGammaConstraint) as e:
        extended_chsh((1, 1, 1, 1), 0, 0, 0, 0)
    assert e.value.residual_ad == pytest.approx(2.0)


def test_example_separable_bound_values():
    a, b, c = spins(0, np.pi / 6, np.pi / 3)
    sym = separable_bound(rho_zero_representation(True), a, b, c)
    assert sym.name == "separable_bound_sym"
    assert sym.rhs == pytest.approx(1.25, abs=1e-12)
    assert not sym.violated
    plain = separable_bound(rho_zero_representation(False), a, b, c)
    assert not plain.violated


def test_separable_bound_inf_not_above_members():
    z = [pure_state(qlinalg.UP), pure_state(qlinalg.DOWN)]
    x = [pure_state(np.array([1, 1]) / np.sqrt(2)), pure_state(np.array([1, -1]) / np.sqrt(2))]
    r1 = representation([(0.25, p, q) for p in z for q in z])
    r2 = representation([(0.25, p, q) for p in z for q in x])
    a, b, c = spins(0.1, 0.4, 1.3)
    inf = separable_bound_inf([r1, r2], a, b, c)
    assert inf.rhs <= min(separable_bound(r, a, b, c).rhs for r in (r1, r2)) + 1e-12
    assert any("upper approximation" in n for n in inf.notes)
    with pytest.raises(DifferentStates):
        separable_bound_inf([r1, rho_zero_representation()], a, b, c)


def test_two_term_reduces_to_separable_bound():
    rep = rho_zero_representation()
    a, b, c = spins(0.3, 0.9, 2.0)
    r = two_term_linear_bound(1.0, -1.0, rep, a, b, c)
    s = separable_bound(rep, a, b, c)
    assert r.lhs == pytest.approx(s.lhs) and r.rhs == pytest.approx(s.rhs)
    with pytest.raises(ZeroGammas):
        two_term_linear_bound(0, 0, rep, a, b, c)


def test_quantum_analogue_example():
    a, b, c = spins(0, np.pi / 6, np.pi / 3)
    r = quantum_bell_analogue(rho_zero_representation(True), a, b, c)
    assert r.lhs == pytest.approx(1.0, abs=1e-12)
    assert r.rhs == pytest.approx(1.25, abs=1e-12)
    assert not r.violated


def test_quantum_analogue_rejects_plain_non_special():
    a, b, c = spins(0, 1, 2)
    with pytest.raises(NotSymmetrizedRep):
        quantum_bell_analogue(rho_zero_representation(False), a, b, c)


def test_quantum_analogue_bound_mismatch():
    a, b, _ = spins(0, 1, 2)
    half = make_povm("h", OutcomeSet((0.5, -0.5), 0.5), list(b.effects))
    with pytest.raises(BoundMismatch):
        quantum_bell_analogue(rho_zero_representation(True), a, b, half)


def test_quantum_analogue_similarity_note():
    a, b, c = spins(0, 1, 2)
    r = quantum_bell_analogue(rho_zero_representation(True), a, b, c, alice_b1=spin_observable(1.5))
    assert any("not similar" in n for n in r.notes)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), angles, angles, angles)
def test_special_form_reduction(seed, ta, tb, tc):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    w = rng.random(n) + 0.05
    w /= w.sum()
    states = [pure_state(rng.standard_normal(2) + 1j * rng.standard_normal(2)) for _ in range(n)]
    rep = representation([(w[m], states[m], states[m]) for m in range(n)])
    a, b, c = spins(ta, tb, tc)
    rho = assemble(rep)
    r = quantum_bell_analogue(rep, a, b, c)
    direct = 1.0 - correlation(rho, b, c, symmetrized=True).value
    assert abs(r.rhs - direct) <= 1e-10
    assert correlation(rho, b, b, symmetrized=True).value >= -1e-10
    assert not r.violated


@settings(max_examples=50, deadline=None)
@given(angles, angles)
def test_vbi_minus_on_rho_zero(tb, tc):
    b, c = spin_observable(tb), spin_observable(tc)
    res = condition_vbi(rho_zero_representation(True), b, c, rho_zero())
    assert res.sign is ConditionSign.MINUS_SIGN
    assert res.sigma_value == pytest.approx(-res.state_value, abs=1e-12)


def test_vbi_requires_matching_state():
    b = spin_observable(0.1)
    with pytest.raises(DifferentStates):
        condition_vbi(rho_zero_representation(True), b, b, maximally_mixed(2, 2))


def test_vbi_plus_for_special_form():
    up, down = pure_state(qlinalg.UP), pure_state(qlinalg.DOWN)
    rep = representation([(0.5, up, up), (0.5, down, down)])
    b, c = spins(0.2, 0.7)[:2]
    assert condition_vbi(rep, b, c, assemble(rep)).sign is ConditionSign.PLUS_SIGN


@given(angles)
def test_sor_minus_for_spin(theta):
    sign = condition_sor(rho_zero_representation(True), spin_observable(theta))
    if abs(np.cos(2 * theta)) <= 1e-9:
        assert sign is ConditionSign.PLUS_SIGN
    else:
        assert sign is ConditionSign.MINUS_SIGN


def test_sor_not_satisfied():
    rep = representation(
        [(0.5, pure_state([1, 0]), pure_state([0.6, 0.8])), (0.5, pure_state([0.8, 0.6]), pure_state([0, 1]))],
        symmetrized=True,
    )
    assert condition_sor(rep, spin_observable(0.0)) is ConditionSign.NOT_SATISFIED


def test_bell_restriction():
    assert bell_restriction(rho_zero(), spin_observable(0.0)) is Restriction.MINUS
    up, down = pure_state(qlinalg.UP), pure_state(qlinalg.DOWN)
    same = assemble(representation([(0.5, up, up), (0.5, down, down)]))
    assert bell_restriction(same, spin_observable(0.0)) is Restriction.PLUS
    assert bell_restriction(rho_zero(), spin_observable(np.pi / 8)) is Restriction.NEITHER
    scaled = make_povm("s", OutcomeSet((2.0, -2.0), 2.0), list(spin_observable(0).effects))
    with pytest.raises(BoundNotUnit):
        bell_restriction(rho_zero(), scaled)
