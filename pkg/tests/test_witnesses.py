import math

import pytest
from hypothesis import given

from nonclassical.errors import BoundsError, UndefinedWitnessError
from nonclassical.moments import MomentTable
from nonclassical.oracle import build_state, oracle_quadrature_moment
from nonclassical.states import StateSpec
from nonclassical.witnesses import (
    agarwal_a3,
    agarwal_determinants,
    hong_mandel,
    hong_mandel_weight,
    hoa,
    hosps,
    mandel_q,
    quadrature_central_moment,
    report_columns,
    witness_report,
)

from conftest import ALPHA_FIG, specs

COHERENT = [0.6 + 0.2j, 1.3, -0.4j, 2.0 - 1.0j]


def fock(n):
    return StateSpec("add", n, 0.0, 0.0)


@pytest.mark.parametrize("i, w", [(0, 1), (1, 1), (2, 3), (3, 15), (4, 105)])
def test_hong_mandel_weights(i, w):
    assert hong_mandel_weight(i) == w


@pytest.mark.parametrize("n", [2, 3, 4, 7])
def test_fock_a3_is_minus_one(n):
    assert agarwal_a3(MomentTable(fock(n))) == pytest.approx(-1.0, abs=1e-9)


def test_fock_one_a3_undefined():
    det_m, det_mu = agarwal_determinants(MomentTable(fock(1)))
    assert det_m == det_mu == 0.0
    with pytest.raises(UndefinedWitnessError):
        agarwal_a3(MomentTable(fock(1)))
    assert "A3" in witness_report(fock(1)).undefined


@pytest.mark.parametrize("alpha", COHERENT)
def test_coherent_witnesses_vanish(alpha):
    t = MomentTable(StateSpec("sub", 0, alpha, 0.0))
    assert abs(mandel_q(t)) < 1e-10
    for n in (2, 3, 4):
        assert abs(hoa(t, n)) < 1e-10 * max(1, abs(alpha) ** (2 * n))
        assert abs(hosps(t, n)) < 1e-10 * max(1, abs(alpha) ** (2 * n))
    assert abs(agarwal_a3(t)) < 1e-10
    for n in (2, 4, 6):
        assert abs(hong_mandel(t, n)) < 1e-10


def test_fock_one_antibunching():
    t = MomentTable(fock(1))
    assert hoa(t, 2) == pytest.approx(-1.0)
    assert mandel_q(t) == pytest.approx(-1.0)


def test_hosps_second_order_equals_hoa():
    t = MomentTable(StateSpec("add", 2, ALPHA_FIG, 0.3, 0.5))
    assert hosps(t, 2) == pytest.approx(hoa(t, 2), rel=1e-12)


@pytest.mark.parametrize("n, expected", [(2, math.exp(-1) - 1), (4, math.exp(-2) - 1), (6, math.exp(-3) - 1)])
def test_squeezed_vacuum_hong_mandel(n, expected):
    # quadrature variance shrinks by e^{-2r}, so S(n) = e^{-n r} - 1 at r = 0.5
    t = MomentTable(StateSpec("sub", 0, 0.0, 0.5, math.pi))
    assert hong_mandel(t, n) == pytest.approx(expected, abs=1e-9)


@given(specs(max_alpha=1.0, max_r=0.6))
def test_quadrature_moments_match_oracle(spec):
    state = build_state(spec)
    t = MomentTable(spec)
    for n in (2, 4):
        assert quadrature_central_moment(t, n) == pytest.approx(
            oracle_quadrature_moment(state, n), rel=1e-7, abs=1e-8)


@given(specs())
def test_mandel_q_lower_bound(spec):
    # Q >= -1 for any state with positive mean photon number
    t = MomentTable(spec)
    if t.mean_photon_number > 1e-6:
        assert mandel_q(t) >= -1 - 1e-9


@pytest.mark.parametrize("call", [
    lambda t: hoa(t, 1), lambda t: hosps(t, 0), lambda t: hong_mandel(t, 10),
])
def test_order_bounds(call):
    with pytest.raises(BoundsError):
        call(MomentTable(fock(2)))


@pytest.mark.parametrize("n", [3, 5])
def test_odd_quadrature_order_rejected(n):
    with pytest.raises(ValueError):
        hong_mandel(MomentTable(fock(2)), n)


def test_vacuum_mandel_q_undefined():
    with pytest.raises(UndefinedWitnessError):
        mandel_q(MomentTable(StateSpec("add", 0, 0.0, 0.0)))
    assert witness_report(StateSpec("add", 0, 0.0, 0.0)).q_mandel is None


def test_report_flags_and_columns():
    rep = witness_report(fock(1))
    assert rep.flags["D1"] and rep.flags["Q"]
    assert not rep.flags["S2"]
    assert rep.columns() == report_columns()
    row = rep.row()
    assert row["A3"] is None and "D1" in row["nonclassical"].split(";")
    js = rep.to_json()
    assert js["undefined"] == ["A3"]


def test_coherent_entries_sit_on_boundary():
    rep = witness_report(StateSpec("sub", 0, 0.6 + 0.2j, 0.0))
    assert not any(rep.flags.values())
    assert {"Q", "D1", "A3", "S2"} <= rep.boundary


def test_report_from_oracle_table_agrees():
    spec = StateSpec("sub", 2, ALPHA_FIG, 0.4, 1.0)
    a = witness_report(spec).values()
    b = witness_report(spec, MomentTable.from_oracle(build_state(spec), spec)).values()
    for k in a:
        assert a[k] == pytest.approx(b[k], rel=1e-7, abs=1e-9), k
