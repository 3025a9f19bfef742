import numpy as np
import pytest

from railyard.errors import ConvergenceError, SpecError
from railyard.model import (
    TINY_WEIGHT,
    AsymptoticModel,
    ObservationPoint,
    Segment,
    Slot,
    empirical_moments,
    realize,
)
from railyard.partitions import counting_measure


def test_slot_fractions(two_segment):
    weights = [c for _, c in two_segment.slot_weights(1)] + [c for _, c in two_segment.slot_weights(2)]
    np.testing.assert_allclose(weights, [0.15, 0.15, 0.7 / 3, 0.7 / 3, 0.7 / 3])
    assert sum(weights) == pytest.approx(1.0)
    assert two_segment.kind_fraction("L-") == pytest.approx(0.15 + 0.7 / 3)


@pytest.mark.parametrize(
    "chi, expected",
    [(0.0, ObservationPoint(1, 0.0)), (0.15, ObservationPoint(1, 0.5)), (0.3, ObservationPoint(1, 1.0))],
)
def test_point_at_first_segment(two_segment, chi, expected):
    point = two_segment.point_at(chi)
    assert point.p == expected.p
    assert point.alpha == pytest.approx(expected.alpha)


def test_point_at_second_segment(two_segment):
    point = two_segment.point_at(0.65)
    assert point.p == 2
    assert point.alpha == pytest.approx(0.5)
    assert point.chi(two_segment) == pytest.approx(0.65)
    with pytest.raises(SpecError):
        two_segment.point_at(1.5)


def test_model_validation():
    slots = (Slot("L", "-", 0.5),)
    with pytest.raises(SpecError):
        AsymptoticModel(V=(0.0, 1.0, 2.0), segments=(Segment(slots),))
    with pytest.raises(SpecError):
        AsymptoticModel(V=(1.0, 1.0), segments=(Segment(slots),))
    with pytest.raises(SpecError):
        AsymptoticModel(V=(0.0, 1.0), segments=(Segment((Slot("Q", "-", 0.5),)),))
    with pytest.raises(SpecError):
        AsymptoticModel(V=(0.0, 1.0), segments=(Segment(slots, zeta=(0.5, 0.5)),))


def test_convergence_guard_spans_segments():
    first = Segment((Slot("L", "+", 2.0),))
    second = Segment((Slot("L", "-", 0.6),))
    with pytest.raises(ConvergenceError):
        AsymptoticModel(V=(0.0, 0.5, 1.0), segments=(first, second))
    # a later + slot never meets an earlier - slot
    AsymptoticModel(V=(0.0, 0.5, 1.0), segments=(second, first))


def test_dict_round_trip(two_segment):
    assert AsymptoticModel.from_dict(two_segment.to_dict()) == two_segment


def test_from_spec(four_column):
    model = AsymptoticModel.from_spec(four_column, 4)
    assert [s.kind for s in model.segments[0].slots] == ["L+", "R+", "R-", "L-"]
    with pytest.raises(SpecError):
        AsymptoticModel.from_spec(four_column, 2)
    with pytest.raises(SpecError):
        AsymptoticModel.from_spec(four_column, 3)


def test_realize_single_segment(single_segment):
    realization = realize(single_segment, 20)
    assert realization.spec.n_columns == 60
    assert realization.N == 59
    t = realization.column(single_segment.point_at(0.5))
    assert t == 30
    assert realization.lminus_after(t) == 10


def test_realize_two_segments(two_segment):
    realization = realize(two_segment, 10)
    assert realization.starts == (1, 7)
    assert realization.lengths == (6, 21)
    assert realization.column(two_segment.point_at(0.3)) == 6


def test_zero_weights_are_replaced(four_slot):
    spec = realize(four_slot, 3).spec
    assert spec.weight(4) == TINY_WEIGHT
    assert spec.weight(1) == 1.0


def test_non_canonical_density_cannot_be_realised():
    seg = Segment((Slot("L", "-", 0.5), Slot("L", "+", 0.5)), zeta=(0.25, 0.75))
    with pytest.raises(SpecError):
        realize(AsymptoticModel(V=(0.0, 1.0), segments=(seg,)), 4)


def test_empirical_moments_match_counting_measure():
    rows = np.array([[2, 1, 0], [0, 0, 0]])
    values = empirical_moments(rows, 4, 4, (1, 2))
    for s, lam in enumerate([(2, 1), ()]):
        measure = counting_measure(lam, 4)
        assert values[s, 0] == pytest.approx(measure.moment(1))
        assert values[s, 1] == pytest.approx(measure.moment(2))


def test_empirical_moments_reject_long_rows():
    with pytest.raises(SpecError):
        empirical_moments(np.array([[1, 1, 1]]), 2, 2, (1,))
