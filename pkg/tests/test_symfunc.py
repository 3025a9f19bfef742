import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from railyard.partitions import make_partition, partitions_up_to
from railyard.symfunc import (
    complete_homogeneous,
    schur,
    schur_principal,
    skew_schur,
    staircase_partition,
    staircase_schur,
)

weights = st.lists(st.floats(0.1, 2.0), min_size=1, max_size=4)


def test_complete_homogeneous_examples():
    assert complete_homogeneous(-1, (0.5, 0.7)) == 0.0
    assert complete_homogeneous(0, (0.5, 0.7)) == 1.0
    a, b = 0.5, 0.7
    assert complete_homogeneous(2, (a, b)) == pytest.approx(a * a + a * b + b * b)


def test_skew_schur_examples():
    assert skew_schur((2, 1), (2, 1), (0.3, 0.9)) == pytest.approx(1.0)
    assert skew_schur((2,), (1,), (0.3, 0.9)) == pytest.approx(1.2)
    assert skew_schur((2, 1), (), (1.0, 1.0, 1.0)) == pytest.approx(8.0)
    assert skew_schur((1,), (2,), (1.0, 1.0)) == 0.0


@pytest.mark.parametrize("lam, k, expected", [((), 5, 1.0), ((1,), 2, 2.0), ((2, 1), 3, 8.0)])
def test_schur_principal(lam, k, expected):
    assert schur_principal(lam, k) == pytest.approx(expected)


@pytest.mark.parametrize("lam", list(partitions_up_to(5)))
def test_principal_matches_jacobi_trudi(lam):
    k = max(len(lam), 3)
    assert schur_principal(lam, k) == pytest.approx(schur(lam, [1.0] * k))


def test_schur_principal_needs_enough_variables():
    with pytest.raises(ValueError):
        schur_principal((1, 1, 1), 2)


def test_staircase_examples():
    assert staircase_schur(1, (0.2, 0.5, 0.9)) == 1.0
    assert staircase_schur(2, (2.0, 3.0)) == pytest.approx(5.0)
    assert staircase_schur(3, (0.7, 0.7)) == pytest.approx(3 * 0.7**2)


@settings(max_examples=40)
@given(st.integers(1, 4), weights)
def test_staircase_product_is_a_schur_function(M, xs):
    xs = sorted(set(round(x, 3) for x in xs))
    lam = staircase_partition(M, len(xs))
    assert staircase_schur(M, xs) == pytest.approx(schur(lam, xs), rel=1e-8)


def test_staircase_partition_shape():
    assert staircase_partition(3, 4) == (6, 4, 2)
    assert staircase_partition(1, 4) == ()


@settings(max_examples=40)
@given(st.lists(st.integers(0, 3), max_size=3), weights)
def test_schur_is_symmetric(parts, xs):
    lam = make_partition(sorted(parts, reverse=True))
    if len(lam) > len(xs):
        return
    assert schur(lam, xs) == pytest.approx(schur(lam, xs[::-1]), rel=1e-9, abs=1e-12)
