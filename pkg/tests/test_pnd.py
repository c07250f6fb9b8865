import math

import numpy as np
import pytest
from hypothesis import given

from nonclassical.errors import BoundsError, DegenerateStateError, UndefinedWitnessError
from nonclassical.oracle import build_state
from nonclassical.pnd import eta, klyshko, pnd
from nonclassical.states import StateSpec

from conftest import specs
from reference_values import REFERENCES


@pytest.mark.parametrize("ref", REFERENCES, ids=str)
def test_pnd_frozen(ref):
    P = pnd(ref.spec, 5).probabilities
    np.testing.assert_allclose(P, ref.pnd, rtol=1e-9, atol=1e-12)


@given(specs())
def test_pnd_matches_oracle(spec):
    dist = pnd(spec, 40)
    probs = build_state(spec).probabilities()[:41]
    probs = np.pad(probs, (0, 41 - len(probs)))
    np.testing.assert_allclose(dist.probabilities, probs, atol=1e-10)


@given(specs())
def test_pnd_normalised(spec):
    dist = pnd(spec)
    assert dist.tail_mass <= 1e-10
    assert np.all(dist.probabilities >= 0)
    assert math.fsum(dist.probabilities) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("m", [1, 2, 4])
@pytest.mark.parametrize("alpha, r", [(0.5, 0.3), (1.2j, 0.0), (0.0, 0.7)])
def test_photon_addition_burns_holes(m, alpha, r):
    P = pnd(StateSpec("add", m, alpha, r, 0.4), 20).probabilities
    assert np.all(P[:m] == 0.0)
    assert P[m] > 0


@pytest.mark.parametrize("m", [0, 1, 2, 3])
@pytest.mark.parametrize("r", [0.2, 0.6])
def test_squeezed_vacuum_parity(m, r):
    # an even state stays even (odd) after an even (odd) number of photon operations
    for op in ("add", "sub"):
        P = pnd(StateSpec(op, m, 0.0, r, 1.0), 30).probabilities
        assert np.all(P[(m + 1) % 2::2] == 0.0)


@pytest.mark.parametrize("alpha", [0.3, 1.0 + 0.5j, 2.0])
def test_klyshko_zero_on_coherent(alpha):
    dist = pnd(StateSpec("sub", 0, alpha, 0.0), 14)
    for n in range(11):
        assert abs(klyshko(dist, n)) < 1e-12


@pytest.mark.parametrize("r", [0.1, 0.3, 0.5])
def test_klyshko_negative_for_photon_added(r):
    dist = pnd(StateSpec("add", 1, 1.0, r, 0.0), 14)
    assert min(klyshko(dist, n) for n in range(7)) < 0


@pytest.mark.parametrize("r, negative", [(0.1, False), (0.3, False), (0.5, True)])
def test_klyshko_photon_subtracted(r, negative):
    # at alpha = 1 the subtracted state only fails the test once squeezing is strong enough
    dist = pnd(StateSpec("sub", 1, 1.0, r, 0.0), 14)
    assert (min(klyshko(dist, n) for n in range(11)) < 0) == negative


def test_klyshko_fock_one():
    assert klyshko(pnd(StateSpec("add", 1, 0.0, 0.0), 4), 0) == -1.0


def test_klyshko_bounds():
    dist = pnd(StateSpec("add", 1, 0.5, 0.2), 5)
    klyshko(dist, 3)
    with pytest.raises(BoundsError):
        klyshko(dist, 4)


def test_eta_values():
    assert eta(pnd(StateSpec("sub", 0, 1.0, 0.0), 40)) == pytest.approx(
        math.exp(-1) / (1 - 2 * math.exp(-1)), rel=1e-12)
    with pytest.raises(UndefinedWitnessError):
        eta(pnd(StateSpec("add", 1, 0.0, 0.0), 5))
    spec = StateSpec("add", 1, 0.5, 0.6, 0.0)
    P = build_state(spec).probabilities()
    assert eta(pnd(spec)) == pytest.approx(P[1] / (1 - P[0] - P[1]), abs=1e-8)


def test_csv_output():
    text = pnd(StateSpec("add", 1, 0.5, 0.2), 3).to_csv()
    lines = text.splitlines()
    assert lines[0].startswith("# op=add m=1")
    assert lines[1] == "n,P_n"
    assert len(lines) == 6


def test_degenerate_rejected():
    with pytest.raises(DegenerateStateError):
        pnd(StateSpec("sub", 2, 0.0, 0.0), 5)
