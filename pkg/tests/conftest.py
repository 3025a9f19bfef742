from pathlib import Path

import pytest

from railyard.graph import build
from railyard.model import AsymptoticModel, Segment, Slot
from railyard.piecewise import PiecewiseBoundary

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def configs_dir() -> Path:
    return CONFIGS


@pytest.fixture
def four_column():
    return build(1, 4, "LRRL", "++--", (0.3, 0.2, 0.4, 0.5))


@pytest.fixture
def single_segment() -> AsymptoticModel:
    slots = (Slot("L", "-", 1 / 3), Slot("R", "+", 1 / 2), Slot("L", "+", 1.0))
    return AsymptoticModel(V=(0.0, 1.0), segments=(Segment(slots),))


@pytest.fixture
def two_segment() -> AsymptoticModel:
    first = (Slot("L", "-", 1 / 3), Slot("R", "+", 1 / 2))
    second = (Slot("L", "-", 1.0), Slot("R", "+", 1 / 6), Slot("L", "+", 1 / 5))
    return AsymptoticModel(V=(0.0, 0.3, 1.0), segments=(Segment(first), Segment(second)))


@pytest.fixture
def four_slot() -> AsymptoticModel:
    slots = (Slot("L", "-", 1.0), Slot("R", "+", 1 / 2), Slot("L", "+", 1 / 3), Slot("L", "-", 0.0))
    return AsymptoticModel(V=(0.0, 1.0), segments=(Segment(slots),))


@pytest.fixture
def four_slot_boundary() -> PiecewiseBoundary:
    return PiecewiseBoundary(
        a=(-1.0, 1 / 6, 4 / 3, 9 / 2, 23 / 4),
        b=(-5 / 6, 1 / 3, 3 / 2, 19 / 4, 6.0),
    )


@pytest.fixture
def lminus_only() -> AsymptoticModel:
    """Every column is (L,-): the left partition stays empty."""
    return AsymptoticModel(V=(0.0, 1.0), segments=(Segment((Slot("L", "-", 0.5),)),))
