import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from nonclassical.errors import DegenerateStateError, SmallSqueezingError
from nonclassical.oracle import build_state
from nonclassical.specfun import laguerre
from nonclassical.states import (
    EPS_R,
    Operation,
    StateSpec,
    hermite_argument,
    inverse_norm_squared,
    normalization,
    normalization_reductions,
)

from conftest import specs
from reference_values import REFERENCES


@pytest.mark.parametrize("ref", REFERENCES, ids=str)
def test_inverse_norm_frozen(ref):
    assert inverse_norm_squared(ref.spec) == pytest.approx(ref.inv_norm2, rel=1e-10)
    assert normalization(ref.spec) == pytest.approx(ref.inv_norm2 ** -0.5, rel=1e-10)


@given(specs())
def test_inverse_norm_matches_oracle(spec):
    state = build_state(spec)
    assert inverse_norm_squared(spec) == pytest.approx(state.norm_squared, rel=1e-9)


@pytest.mark.parametrize("op", ["add", "sub"])
@pytest.mark.parametrize("m", [0, 1, 2, 4])
@pytest.mark.parametrize("alpha, r", [(0.0, 0.3), (0.0, 0.9), (0.7 - 0.4j, 0.0), (1.5j, 0.0)])
def test_reduced_normalisations(op, m, alpha, r):
    spec = StateSpec(op, m, alpha, r, 0.6)
    if op == "sub" and alpha == 0 and r == 0 and m > 0:
        pytest.skip("degenerate")
    assert normalization_reductions(spec) == pytest.approx(normalization(spec), rel=1e-10)


def test_squeezed_vacuum_odd_subtraction():
    spec = StateSpec("sub", 3, 0.0, 0.5)
    assert normalization_reductions(spec) == pytest.approx(normalization(spec), rel=1e-10)


@pytest.mark.parametrize("spec", [StateSpec("sub", 1, 0.0, 0.0), StateSpec("sub", 4, 0.0, 0.0)])
def test_degenerate_subtraction(spec):
    with pytest.raises(DegenerateStateError):
        normalization(spec)


def test_add_m0_equals_sub_m0():
    a = StateSpec("add", 0, 0.4 + 0.3j, 0.5, 1.0)
    assert normalization(a) == normalization(a.with_(op="sub")) == 1.0


def test_subtraction_from_weakly_squeezed_vacuum_is_not_degenerate():
    spec = StateSpec("sub", 4, 0.0, 1e-8)
    assert inverse_norm_squared(spec) == pytest.approx(build_state(spec).norm_squared, rel=1e-9)


def test_hermite_argument_refused_below_threshold():
    with pytest.raises(SmallSqueezingError):
        hermite_argument(StateSpec("add", 2, 0.5, EPS_R / 2))


@settings(max_examples=25)
@given(specs(max_alpha=1.2))
def test_closed_forms_exact_either_side_of_threshold(spec):
    for r in (0.99 * EPS_R, 1.01 * EPS_R, 1e-12):
        s = spec.with_(r=r)
        assert inverse_norm_squared(s) == pytest.approx(build_state(s).norm_squared, rel=1e-9)


@given(st.sampled_from(["add", "sub"]), st.integers(0, 3), st.floats(0.5, 1.5),
       st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_continuous_across_threshold(op, m, mod, arg, phi):
    lo = StateSpec(op, m, cmath.rect(mod, arg), 0.99 * EPS_R, phi)
    hi = lo.with_(r=1.01 * EPS_R)
    assert inverse_norm_squared(lo) == pytest.approx(inverse_norm_squared(hi), rel=1e-6)


@pytest.mark.parametrize("op", ["add", "sub"])
@pytest.mark.parametrize("m", [0, 1, 3, 6])
def test_general_form_at_r0_is_exact(op, m):
    spec = StateSpec(op, m, 0.7 - 0.4j, 0.0, 1.1)
    x = abs(spec.alpha) ** 2
    expected = math.factorial(m) * laguerre(m, -x) if op == "add" else x ** m
    assert inverse_norm_squared(spec) == pytest.approx(expected, rel=1e-13)


def test_large_m_near_zero_squeezing_stays_finite():
    spec = StateSpec("add", 50, 2.0, 2e-6, 0.3)
    assert math.isfinite(inverse_norm_squared(spec)) and inverse_norm_squared(spec) > 0


def test_hermite_argument_value():
    spec = StateSpec("add", 1, 1.0, 0.5, 0.4)
    expected = 1j * cmath.exp(-0.2j) / math.sqrt(math.sinh(1.0))
    assert hermite_argument(spec).value == pytest.approx(expected)
    assert not hermite_argument(spec).regularized


def test_beta_commutes_displacement_through_squeeze():
    spec = StateSpec("sub", 0, 0.4 + 0.2j, 0.7, 1.3)
    # <a> of a squeezed coherent state is alpha; beta is the pre-squeeze amplitude
    b, r, phi = spec.beta, spec.r, spec.phi
    back = b * math.cosh(r) + b.conjugate() * cmath.exp(1j * phi) * math.sinh(r)
    assert back == pytest.approx(spec.alpha)


@pytest.mark.parametrize("bad", [
    dict(op="mul", m=1, alpha=0, r=0), dict(op="add", m=-1, alpha=0, r=0),
    dict(op="add", m=1.5, alpha=0, r=0), dict(op="add", m=1, alpha=0, r=-0.1),
    dict(op="add", m=1, alpha=complex("nan"), r=0), dict(op="add", m=1, alpha=0, r=0.1, phi=math.inf),
])
def test_invalid_specs(bad):
    with pytest.raises(ValueError):
        StateSpec(**bad)


def test_operation_parse():
    assert Operation.parse("ADD") is Operation.ADD
    assert Operation.parse(Operation.SUBTRACT) is Operation.SUBTRACT


@pytest.mark.parametrize("k", [1, 2, -1, 5])
@pytest.mark.parametrize("phi", [0.0, 0.5, math.pi / 3, math.pi, 6.0])
def test_phi_periodic_images_identical(k, phi):
    assert StateSpec("add", 1, 0.3, 0.2, phi + 2 * math.pi * k) == StateSpec("add", 1, 0.3, 0.2, phi)


@given(st.floats(-50, 50), st.integers(-3, 3))
def test_phi_stored_reduced(phi, k):
    a = StateSpec("add", 1, 0.3, 0.2, phi)
    b = StateSpec("add", 1, 0.3, 0.2, phi + 2 * math.pi * k)
    assert 0.0 <= a.phi < 2 * math.pi
    d = abs(a.phi - b.phi)
    assert min(d, 2 * math.pi - d) <= 1e-12


@given(specs())
def test_record_round_trip(spec):
    assert StateSpec.from_record(spec.to_record()) == spec
