import pytest

from railyard.errors import ConvergenceError, SpecError
from railyard.graph import (
    DimerCovering,
    base_covering,
    build,
    charge,
    column_partition,
    covering_weight,
    height,
    height_formula,
)
from railyard.schur_process import sample


def test_four_column_graph_is_valid(four_column):
    assert four_column.n_columns == 4
    assert four_column.kind(3) == "R-"
    assert list(four_column.interacting_pairs()) == [(1, 3), (1, 4), (2, 3), (2, 4)]


def test_vacuous_convergence_guard():
    spec = build(1, 1, "L", "-", (2.0,))
    assert spec.weight(1) == 2.0


def test_convergence_guard_reports_pair():
    with pytest.raises(ConvergenceError) as info:
        build(1, 2, "LL", "+-", (2.0, 1.0))
    assert (info.value.i, info.value.j) == (1, 2)
    assert info.value.product == pytest.approx(2.0)


@pytest.mark.parametrize(
    "args",
    [
        (2, 1, "L", "+", (0.5,)),
        (1, 2, "L", "+-", (0.5, 0.5)),
        (1, 1, "X", "+", (0.5,)),
        (1, 1, "L", "*", (0.5,)),
        (1, 1, "L", "+", (0.0,)),
    ],
)
def test_malformed_specs(args):
    with pytest.raises(SpecError):
        build(*args)


def test_unicode_minus_accepted():
    assert build(1, 1, "R", "−", (0.3,)).sign(1) == "-"


def test_base_covering(four_column):
    cov = base_covering(four_column)
    assert cov.diagonal_edges == frozenset()
    assert covering_weight(four_column, cov) == 1.0
    for m in range(1, 6):
        assert column_partition(four_column, cov, m) == ()
        assert charge(four_column, cov, m) == 0
    for x in (1.5, 3.5, 6.5, 8.5):
        for y in (-3.25, 0.25, 2.75):
            assert height(four_column, cov, x, y) == 0


def test_covering_weight_single_diagonal(four_column):
    cov = DimerCovering(four_column, ((), (), (1,), (1,), (1,)))
    assert cov.diagonal_counts() == [0, 1, 0, 0]
    assert covering_weight(four_column, cov) == pytest.approx(0.2)


def test_covering_weight_product(four_column):
    cov = DimerCovering(four_column, ((1, 1), (2, 1), (2, 1), (1,), (1,)))
    assert cov.diagonal_counts() == [1, 0, 2, 0]
    assert covering_weight(four_column, cov) == pytest.approx(0.048)


def test_figure2_column_partitions(four_column):
    seq = ((), (2,), (3, 1, 1), (2,), ())
    cov = DimerCovering(four_column, seq)
    assert cov.pure
    assert tuple(column_partition(four_column, cov, m) for m in range(1, 6)) == seq
    assert cov.diagonal_counts() == [2, 3, 3, 2]


def test_interlacing_rule_enforced(four_column):
    with pytest.raises(SpecError):
        DimerCovering(four_column, ((), (2,), (1,), (), ()))


def test_edges_cover_each_vertex_once(four_column):
    cov = DimerCovering(four_column, ((), (2,), (3, 1, 1), (2,), ()))
    cov.validate()


def test_edges_round_trip(four_column):
    cov = DimerCovering(four_column, ((), (2,), (3, 1, 1), (2,), ()))
    rebuilt = DimerCovering.from_edges(four_column, cov.edges(), cov.window)
    assert rebuilt.partitions == cov.partitions


def test_json_round_trip(four_column):
    cov = DimerCovering(four_column, ((1, 1), (2, 1), (2, 1), (1,), (1,)))
    assert DimerCovering.from_json(cov.to_json()) == cov


def test_sampled_coverings_have_zero_charge(four_column):
    for cov in sample(four_column, (), seed=3, count=20, cap=30):
        assert all(charge(four_column, cov, m) == 0 for m in range(1, 6))


def test_heights_agree_with_closed_counts(four_column):
    for cov in sample(four_column, (), seed=11, count=5, cap=30):
        lo, hi = cov.window
        for m in four_column.columns:
            for x in (2 * m - 0.5, 2 * m + 0.5):
                for y in (lo - 1.75, lo + 0.25, 0.25, -0.75, hi + 1.25):
                    assert height(four_column, cov, x, y) == height_formula(four_column, cov, x, y)


def test_height_rejects_points_off_faces(four_column):
    cov = base_covering(four_column)
    with pytest.raises(ValueError):
        height(four_column, cov, 2.0, 0.25)
    with pytest.raises(ValueError):
        height(four_column, cov, 2.5, 0.5)


def test_column_partition_needs_pure_covering(four_column):
    cov = DimerCovering(four_column, ((1, 1), (2, 1), (2, 1), (1,), (1,)))
    with pytest.raises(SpecError):
        column_partition(four_column, cov, 2)
