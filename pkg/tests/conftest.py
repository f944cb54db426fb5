"""Shared regions, models, and instances used across the test modules."""

from pathlib import Path

import pytest

from exitwalk import (
    InjectionInstance,
    Region,
    TransitionModel,
)

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def box3() -> Region:
    """3x3 box: three columns of heights 0..2."""
    return Region(((0, 2),) * 3)


@pytest.fixture
def box2() -> Region:
    """2x2 box: two columns of heights 0..1 (one interior column)."""
    return Region(((0, 1),) * 2)


@pytest.fixture
def single_cell() -> Region:
    """Two one-cell columns: the smallest region with an interior column."""
    return Region(((0, 0), (0, 0)))


@pytest.fixture
def micro_region() -> Region:
    """Two columns of heights -1..1."""
    return Region(((-1, 1), (-1, 1)))


@pytest.fixture
def micro_instance(micro_region) -> InjectionInstance:
    return InjectionInstance(micro_region, a=0, b=0, c=1, d=-1, r=1)


@pytest.fixture
def box3_instance(box3) -> InjectionInstance:
    return InjectionInstance(box3, a=1, b=1, c=2, d=0, r=1)


@pytest.fixture
def staircase_instance() -> InjectionInstance:
    region = Region(((0, 2), (1, 3), (2, 4)))
    return InjectionInstance(region, a=2, b=2, c=4, d=2, r=1)


@pytest.fixture
def tall_box_instance() -> InjectionInstance:
    """Three columns of four rows, start heights at the middle."""
    region = Region(((0, 3),) * 3)
    return InjectionInstance(region, a=1, b=1, c=2, d=0, r=1)


@pytest.fixture
def uniform1() -> TransitionModel:
    return TransitionModel.uniform(1)


@pytest.fixture
def uniform2() -> TransitionModel:
    return TransitionModel.uniform(2)
