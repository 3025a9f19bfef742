import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from railyard.partitions import (
    conjugate,
    counting_measure,
    interlaces,
    make_partition,
    partitions_of,
    partitions_up_to,
    size,
    strips_above,
    strips_below,
    vertical_strips_above,
    vertical_strips_below,
)

partitions = st.lists(st.integers(0, 6), max_size=5).map(lambda v: make_partition(sorted(v, reverse=True)))
small_partitions = st.lists(st.integers(0, 3), max_size=4).map(lambda v: make_partition(sorted(v, reverse=True)))


@pytest.mark.parametrize(
    "lam, expected",
    [((3, 1, 1), (3, 1, 1)), ((), ()), ((2, 0), (1, 1)), ((4, 2), (2, 2, 1, 1))],
)
def test_conjugate(lam, expected):
    assert conjugate(make_partition(lam)) == expected


@pytest.mark.parametrize(
    "lam, mu, conjugated, expected",
    [
        ((2,), (), False, True),
        ((3, 1, 1), (2, 0), True, True),
        ((3, 1, 1), (2, 0), False, False),
        ((2, 1), (2, 1), False, True),
    ],
)
def test_interlaces(lam, mu, conjugated, expected):
    assert interlaces(make_partition(lam), make_partition(mu), conjugated) is expected


def test_make_partition_rejects_increasing():
    with pytest.raises(ValueError):
        make_partition([1, 2])
    with pytest.raises(ValueError):
        make_partition([1, -1])


def test_trailing_zeros_ignored():
    assert make_partition([3, 1, 0, 0]) == (3, 1)


@given(partitions)
def test_conjugate_is_an_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert size(conjugate(lam)) == size(lam)


@given(partitions)
def test_strips_below_interlace(lam):
    below = list(strips_below(lam))
    assert len(below) == len(set(below))
    assert all(interlaces(lam, mu) for mu in below)
    assert lam in below


@settings(max_examples=30)
@given(small_partitions, st.integers(0, 4))
def test_strips_above_match_brute_force(lam, extra):
    cap = size(lam) + extra
    found = set(strips_above(lam, cap))
    expected = {mu for mu in partitions_up_to(cap) if interlaces(mu, lam)}
    assert found == expected


@settings(max_examples=30)
@given(partitions)
def test_vertical_strips_are_conjugate_strips(lam):
    assert all(interlaces(lam, mu, conjugated=True) for mu in vertical_strips_below(lam))
    cap = size(lam) + 3
    assert all(interlaces(mu, lam, conjugated=True) for mu in vertical_strips_above(lam, cap))


def test_partitions_of_counts():
    assert [len(list(partitions_of(n))) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


def test_counting_measure_examples():
    m = counting_measure((), 4)
    np.testing.assert_allclose(m.atoms, [0.75, 0.5, 0.25, 0.0])
    assert m.mass == 1.0
    np.testing.assert_allclose(counting_measure((2, 1), 2).atoms, [1.5, 0.5])


@pytest.mark.parametrize("N", [1, 2, 5, 40])
def test_empty_partition_first_moment(N):
    assert counting_measure((), N).moment(1) == pytest.approx((N - 1) / (2 * N))


def test_counting_measure_rejects_long_partition():
    with pytest.raises(ValueError):
        counting_measure((1, 1, 1), 2)


@given(partitions)
def test_atoms_strictly_decreasing(lam):
    atoms = counting_measure(lam, 6).atoms
    assert np.all(np.diff(atoms) < 0)
