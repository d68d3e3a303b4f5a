"""Farey sequence generation: exact equality with brute-force enumeration
plus the structural invariants (unimodularity, minimal gap, reversal)."""

import numpy as np
import pytest

from fareycorr.errors import InputValidationError, SizingError
from fareycorr.farey import FareyFraction, farey_sequence, iter_farey

from oracles import farey_pairs_brute

F5 = [(1, 5), (1, 4), (1, 3), (2, 5), (1, 2), (3, 5), (2, 3), (3, 4), (4, 5), (1, 1)]


def _pairs(seq):
    return list(zip(seq.numerators.tolist(), seq.denominators.tolist()))


def test_order_one():
    assert _pairs(farey_sequence(1)) == [(1, 1)]


def test_order_five_exact():
    assert _pairs(farey_sequence(5)) == F5


def test_unimodular_neighbor_example():
    # 2/7 and 1/3 are consecutive at order 7: 1*7 - 2*3 = 1
    pairs = _pairs(farey_sequence(7))
    i = pairs.index((2, 7))
    assert pairs[i + 1] == (1, 3)
    assert 1 * 7 - 2 * 3 == 1


@pytest.mark.parametrize("order", list(range(1, 121)) + [200, 350, 500])
def test_matches_brute_enumeration(order):
    assert _pairs(farey_sequence(order)) == farey_pairs_brute(order)


def test_structural_invariants_every_order_to_500(tables):
    for order in range(1, 501):
        seq = farey_sequence(order)
        a = seq.numerators
        q = seq.denominators
        assert (a[0], q[0]) == (1, order)
        assert (a[-1], q[-1]) == (1, 1)
        assert len(seq) == tables.phi_cumulative[order]
        if len(seq) == 1:
            continue
        # unimodularity of every consecutive pair, in exact integers
        assert np.array_equal(
            a[1:] * q[:-1] - a[:-1] * q[1:], np.ones(len(seq) - 1, dtype=np.int64)
        )
        # gap a'/q' - a/q = 1/(q q') >= 1/Q^2  <=>  q*q' <= Q^2
        assert int(np.max(q[:-1] * q[1:])) <= order * order


@pytest.mark.parametrize("order", [2, 3, 10, 50, 137])
def test_reflection_permutes_interior(order):
    seq = farey_sequence(order)
    interior = {(a, q) for a, q in _pairs(seq) if a < q}
    assert {(q - a, q) for a, q in interior} == interior


def test_iterator_streams_the_same_sequence():
    seq = farey_sequence(50)
    streamed = [(f.a, f.q) for f in iter_farey(50)]
    assert streamed == _pairs(seq)
    assert [(f.a, f.q) for f in seq.items] == streamed


def test_values_and_unit_points():
    seq = farey_sequence(30)
    v = seq.values()
    assert v[0] == 1 / 30 and v[-1] == 1.0
    assert np.all(np.diff(v) > 0)
    u = seq.unit_points()
    assert len(u) == len(v)
    assert u[0] == 0.0 and u[-1] < 1.0  # 1/1 wrapped to the origin
    assert np.all(np.diff(u) > 0)


def test_fraction_validation():
    with pytest.raises(InputValidationError):
        FareyFraction(2, 4)  # not reduced
    with pytest.raises(InputValidationError):
        FareyFraction(0, 1)  # 0/1 is outside (0,1]
    with pytest.raises(InputValidationError):
        FareyFraction(3, 2)
    assert FareyFraction(1, 2).value == 0.5


def test_order_validation_and_budget(monkeypatch):
    with pytest.raises(InputValidationError):
        farey_sequence(0)
    with pytest.raises(InputValidationError):
        farey_sequence(2.5)
    monkeypatch.setenv("FAREYCORR_MAX_POINTS", "1000")
    with pytest.raises(SizingError):
        farey_sequence(200)
    farey_sequence(50)  # well under the patched budget
