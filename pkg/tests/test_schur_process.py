from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from railyard.errors import SpecError, TruncationError
from railyard.graph import build
from railyard.schur_process import (
    BoundaryPair,
    batch_rng,
    enumerate_sequences,
    pair_product,
    partition_function_product,
    partition_function_transfer,
    sample_sequences,
    schur_generating_fn,
    schur_generating_fn_direct,
    sequence_probability,
)
from railyard.verify import check_sampler

FOUR_COLUMN_Z = 1.12 * 1.10 / (0.85 * 0.92)


def test_four_column_partition_function(four_column):
    assert pair_product(four_column) == pytest.approx(FOUR_COLUMN_Z, rel=1e-12)
    assert partition_function_transfer(four_column, cap=30) == pytest.approx(FOUR_COLUMN_Z, rel=1e-10)


def test_adaptive_cap_converges(four_column):
    assert partition_function_transfer(four_column, cap=None) == pytest.approx(FOUR_COLUMN_Z, rel=1e-10)


def test_single_column_has_unit_weight():
    spec = build(1, 1, "L", "-", (0.5,))
    assert partition_function_transfer(spec) == pytest.approx(1.0)


def test_two_column_geometric_series():
    spec = build(1, 2, "LL", "+-", (0.5, 0.6))
    assert partition_function_transfer(spec) == pytest.approx(1 / (1 - 0.3), rel=1e-12)


@st.composite
def specs_without_rminus(draw):
    n = draw(st.integers(1, 4))
    b = draw(st.lists(st.sampled_from("+-"), min_size=n, max_size=n))
    a = [draw(st.sampled_from("LR")) if s == "+" else "L" for s in b]
    x = draw(st.lists(st.floats(0.05, 0.3), min_size=n, max_size=n))
    return build(1, n, "".join(a), "".join(b), x)


@settings(max_examples=25, deadline=None)
@given(specs_without_rminus())
def test_transfer_matches_product(spec):
    zt = partition_function_transfer(spec, cap=20)
    assert zt == pytest.approx(partition_function_product(spec), rel=1e-8)
    if spec.slots("L-"):
        zl = partition_function_transfer(spec, BoundaryPair((1,), ()), cap=20)
        assert zl == pytest.approx(partition_function_product(spec, (1,)), rel=1e-8)


def test_product_variant_two():
    spec = build(1, 3, "LRR", "+--", (0.3, 0.4, 0.2))
    zt = partition_function_transfer(spec, BoundaryPair((1, 1), ()), cap=20)
    assert zt == pytest.approx(partition_function_product(spec, (1, 1), variant=2), rel=1e-8)


def test_product_variant_requirements(four_column):
    with pytest.raises(SpecError):
        partition_function_product(four_column, (1,), variant=1)
    with pytest.raises(ValueError):
        partition_function_product(four_column, (1,), variant=3)


def test_boundary_beyond_cap(four_column):
    with pytest.raises(TruncationError):
        partition_function_transfer(four_column, BoundaryPair((5, 5), ()), cap=8)


def test_sampler_empty_middle_frequency():
    spec = build(1, 2, "LL", "+-", (0.5, 0.5))
    draws = sample_sequences(spec, seed=1, count=4000)
    empty = sum(1 for seq in draws if seq[1] == ())
    assert empty / len(draws) == pytest.approx(0.75, abs=0.03)
    assert all(seq[0] == () and seq[-1] == () for seq in draws)


def test_sampler_is_thread_independent(four_column):
    one = sample_sequences(four_column, seed=4, count=2100, cap=20, threads=1)
    two = sample_sequences(four_column, seed=4, count=2100, cap=20, threads=2)
    assert one == two


def test_batch_rng_streams():
    a = batch_rng(9, 0).random(4)
    np.testing.assert_array_equal(a, batch_rng(9, 0).random(4))
    assert not np.array_equal(a, batch_rng(9, 1).random(4))


def test_enumeration_matches_sequence_probability(four_column):
    probs = enumerate_sequences(four_column, max_size=3)
    assert 0.5 < sum(probs.values()) < 1.0
    for seq in list(probs)[:25]:
        assert probs[seq] == pytest.approx(sequence_probability(four_column, seq), rel=1e-10)
    assert probs[((),) * 5] == pytest.approx(1 / FOUR_COLUMN_Z)


def test_sequence_probability_rejects_bad_input(four_column):
    with pytest.raises(SpecError):
        sequence_probability(four_column, ((), ()))
    with pytest.raises(SpecError):
        sequence_probability(four_column, ((), (2,), (1,), (), ()))


def test_empirical_frequencies_follow_enumeration(four_column):
    counts = Counter(sample_sequences(four_column, seed=2, count=3000))
    probs = enumerate_sequences(four_column, max_size=4)
    top = max(probs, key=probs.get)
    se = np.sqrt(probs[top] * (1 - probs[top]) / 3000)
    assert abs(counts[top] / 3000 - probs[top]) < 5 * se


@pytest.mark.slow
def test_sampler_chi_square(four_column):
    check = check_sampler(four_column, count=10_000, seed=2024)
    assert check.passed, check.detail


SGF_SPEC = dict(l=1, r=4, a="LRLL", b="++--", x=(0.3, 0.2, 0.4, 0.3))


@pytest.mark.parametrize("left", [(), (1,)])
def test_generating_function_closed_form(left):
    spec = build(**SGF_SPEC)
    closed = schur_generating_fn(spec, 2, {3: 0.35}, left)
    direct = schur_generating_fn_direct(spec, 2, {3: 0.35}, left, cap=12)
    assert closed == pytest.approx(direct, rel=1e-6)


def test_generating_function_identity_substitution():
    spec = build(**SGF_SPEC)
    assert schur_generating_fn(spec, 2, {}, (1,)) == pytest.approx(1.0)
    assert schur_generating_fn(spec, 2, {3: 0.4, 4: 0.3}) == pytest.approx(1.0)


def test_generating_function_guards(four_column):
    spec = build(**SGF_SPEC)
    with pytest.raises(SpecError):
        schur_generating_fn(four_column, 2, {})
    with pytest.raises(SpecError):
        schur_generating_fn(spec, 2, {2: 0.1})
    with pytest.raises(SpecError):
        schur_generating_fn(spec, 7, {})
