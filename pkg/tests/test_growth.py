import numpy as np
import pytest

from railyard.errors import SpecError
from railyard.graph import DimerCovering, build
from railyard.growth import column_moments, conjugate_rows, resample_middle, sample_growth, truncated_geometric
from railyard.model import realize

COUNT = 4000


def _fraction_empty(rows: np.ndarray) -> float:
    return float(np.mean(~rows.any(axis=1)))


def test_truncated_geometric_stays_in_range():
    rng = np.random.default_rng(0)
    lo = np.zeros(500, dtype=np.int64)
    hi = np.arange(500, dtype=np.int64) % 4
    k = truncated_geometric(lo, hi, 0.7, rng)
    assert np.all((k >= lo) & (k <= hi))
    np.testing.assert_array_equal(truncated_geometric(lo, hi, 0.0, rng), lo)


def test_truncated_geometric_two_point_law():
    rng = np.random.default_rng(1)
    lo = np.zeros(20_000, dtype=np.int64)
    k = truncated_geometric(lo, lo + 1, 0.5, rng)
    assert k.mean() == pytest.approx(1 / 3, abs=0.02)


def test_conjugate_rows():
    arr = np.array([[3, 1, 1], [0, 0, 0]])
    np.testing.assert_array_equal(conjugate_rows(arr), [[3, 1, 1], [0, 0, 0]])
    np.testing.assert_array_equal(conjugate_rows(np.array([[4, 2]])), [[2, 2, 1, 1]])


def test_mixed_swap_adds_at_most_one_box_per_row():
    rng = np.random.default_rng(2)
    lam = np.zeros((1000, 1), dtype=np.int64)
    nu = resample_middle("R", "L", 0.25, lam, lam, rng)
    assert nu.max() <= 1
    assert nu.sum() / 1000 == pytest.approx(0.2, abs=0.04)


def test_geometric_middle_partition():
    spec = build(1, 2, "LL", "+-", (0.5, 0.5))
    sample = sample_growth(spec, COUNT, seed=3)
    rows = sample.rows(2)
    assert rows.shape[1] == 1
    assert rows.mean() == pytest.approx(1 / 3, abs=0.05)
    assert not sample.rows(1).any() and not sample.rows(3).any()


def test_empty_column_probabilities(four_column):
    sample = sample_growth(four_column, COUNT, seed=5, keep=(2, 3))
    z = 1.12 * 1.10 / (0.85 * 0.92)
    assert _fraction_empty(sample.rows(3)) == pytest.approx(1 / z, abs=0.04)
    assert _fraction_empty(sample.rows(2)) == pytest.approx(0.85 / 1.12, abs=0.04)


def test_samples_interlace(four_column):
    sample = sample_growth(four_column, 200, seed=8)
    for s in range(sample.count):
        DimerCovering(four_column, tuple(sample.partition(s, m) for m in range(1, 6)))


def test_output_does_not_depend_on_threads(four_column):
    one = sample_growth(four_column, 600, seed=6, batch_size=256, threads=1)
    two = sample_growth(four_column, 600, seed=6, batch_size=256, threads=3)
    for m in one.columns:
        np.testing.assert_array_equal(one.rows(m), two.rows(m))


def test_keep_outside_graph(four_column):
    with pytest.raises(SpecError):
        sample_growth(four_column, 10, keep=(9,))


def test_column_moments_of_lminus_model(lminus_only):
    realization = realize(lminus_only, 40)
    point = lminus_only.point_at(0.5)
    mean, se = column_moments(realization, point, (1, 2), count=64, seed=0)
    # nothing to interact with: the measure is deterministic
    np.testing.assert_allclose(se, 0.0, atol=1e-15)
    t = realization.column(point)
    n = realization.lminus_after(t)
    assert mean[0] == pytest.approx(n * (n - 1) / 2 / realization.N**2)
