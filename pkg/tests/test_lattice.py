"""Geometry layer: column regions, lattice paths, shifts, and projections."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exitwalk import (
    DYCK,
    SCHRODER,
    SQUARE,
    SQUARE_DIAG,
    STEP_VECTORS,
    BadShiftUnit,
    DisconnectedColumns,
    EmptyColumn,
    LatticePath,
    LatticePoint,
    Region,
    RegionError,
    boundary_paths,
    contains,
    path_in_region,
    projection_profile,
    shift_path,
    validate_region,
    vertex_intersections,
)

# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------


def test_box_region_basic_queries(box3):
    assert box3.m == 2
    assert box3.lo(0) == 0 and box3.hi(2) == 2
    assert box3.column(1) == (0, 2)
    assert box3.column_points(1) == [LatticePoint(1, 0), LatticePoint(1, 1), LatticePoint(1, 2)]
    assert len(list(box3.points())) == 9


def test_single_column_region_is_allowed():
    region = Region(((3, 5),))
    assert region.m == 0
    assert list(region.points()) == [LatticePoint(0, 3), LatticePoint(0, 4), LatticePoint(0, 5)]


def test_empty_column_rejected():
    with pytest.raises(EmptyColumn):
        Region(((0, 2), (2, 1)))


def test_vertically_disjoint_adjacent_columns_rejected():
    with pytest.raises(DisconnectedColumns):
        Region(((0, 1), (3, 4)))


def test_touching_adjacent_columns_are_connected():
    # sharing a single height is enough
    region = Region(((0, 1), (1, 3), (3, 3)))
    assert region.m == 2


def test_no_columns_rejected():
    with pytest.raises(RegionError):
        Region(())


def test_contains_checks_column_ranges(box3):
    assert contains(box3, (0, 0))
    assert contains(box3, (2, 2))
    assert not contains(box3, (1, 3))
    assert not contains(box3, (-1, 0))
    assert not contains(box3, (3, 0))


def test_region_json_roundtrip(box3):
    data = box3.to_json()
    assert data["m"] == 2
    assert Region.from_json(data) == box3


def test_region_json_rejects_width_mismatch(box3):
    data = box3.to_json()
    data["m"] = 5
    with pytest.raises(RegionError):
        Region.from_json(data)


def test_region_json_rejects_unknown_step_set(box3):
    data = box3.to_json()
    data["step_set"] = "hexagonal"
    with pytest.raises(RegionError):
        Region.from_json(data)


def test_diagonal_regions_need_unit_boundary_slopes():
    # valid: every boundary changes by exactly one per column
    Region(((0, 0), (-1, 1), (0, 2)), DYCK)
    # invalid: a flat stretch on the lower boundary
    with pytest.raises(RegionError):
        Region(((0, 0), (0, 2)), DYCK)


def test_validate_region_helper_matches_constructor():
    assert validate_region([(0, 2), (0, 2)]) == Region(((0, 2), (0, 2)))


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------


def test_path_vertices_and_end():
    path = LatticePath(LatticePoint(0, 0), ("R", "U", "R"))
    assert path.vertices == (
        LatticePoint(0, 0),
        LatticePoint(1, 0),
        LatticePoint(1, 1),
        LatticePoint(2, 1),
    )
    assert path.end == LatticePoint(2, 1)
    assert len(path) == 3


def test_empty_path():
    path = LatticePath(LatticePoint(4, -2), ())
    assert path.vertices == (LatticePoint(4, -2),)
    assert path.end == LatticePoint(4, -2)
    assert len(path) == 0


def test_unknown_step_name_rejected():
    with pytest.raises(ValueError):
        LatticePath(LatticePoint(0, 0), ("Q",))


def test_path_json_roundtrip():
    path = LatticePath(LatticePoint(1, -1), ("NE", "SE", "EE"))
    assert LatticePath.from_json(path.to_json()) == path


def test_path_in_region_uses_every_vertex(box2):
    inside = LatticePath(LatticePoint(0, 0), ("R", "U"))
    assert path_in_region(box2, inside)
    leaves = LatticePath(LatticePoint(0, 0), ("U", "U"))
    assert not path_in_region(box2, leaves)
    point_only = LatticePath(LatticePoint(1, 1), ())
    assert path_in_region(box2, point_only)


def test_step_vectors_table_is_consistent():
    assert STEP_VECTORS["R"] == (1, 0)
    assert STEP_VECTORS["NE"] == (1, 1)
    assert STEP_VECTORS["EE"] == (2, 0)
    for name in SQUARE_DIAG.steps:
        assert name in STEP_VECTORS
    assert DYCK.vertical_unit == 2 and SQUARE.vertical_unit == 1


# ---------------------------------------------------------------------------
# Vertical shifts
# ---------------------------------------------------------------------------


def test_shift_square_path_by_any_amount():
    path = LatticePath(LatticePoint(0, 0), ("R", "U"))
    shifted = shift_path(path, 3)
    assert shifted.start == LatticePoint(0, 3)
    assert shifted.steps == path.steps


def test_shift_diagonal_path_requires_even_amount():
    path = LatticePath(LatticePoint(0, 0), ("NE", "SE"))
    assert shift_path(path, 2).start == LatticePoint(0, 2)
    with pytest.raises(BadShiftUnit):
        shift_path(path, 1)


def test_shift_with_explicit_step_set_overrides_inference():
    # a path of only R steps could belong to any family; force the diagonal rule
    path = LatticePath(LatticePoint(0, 0), ("EE",))
    with pytest.raises(BadShiftUnit):
        shift_path(path, 1, step_set=SCHRODER)


def test_shift_zero_is_identity():
    path = LatticePath(LatticePoint(2, 5), ("L", "D"))
    assert shift_path(path, 0) == path


@given(
    steps=st.lists(st.sampled_from(["R", "L", "U", "D"]), max_size=10),
    dy=st.integers(min_value=-6, max_value=6),
)
@settings(deadline=None, max_examples=60)
def test_shift_roundtrip_property(steps, dy):
    path = LatticePath(LatticePoint(0, 0), tuple(steps))
    assert shift_path(shift_path(path, dy), -dy) == path


# ---------------------------------------------------------------------------
# Boundary envelopes
# ---------------------------------------------------------------------------


def test_boundary_paths_of_box(box3):
    upper, lower, left, right = boundary_paths(box3)
    assert upper == LatticePath(LatticePoint(0, 2), ("R", "R"))
    assert lower == LatticePath(LatticePoint(0, 0), ("R", "R"))
    assert left == (LatticePoint(0, 0), LatticePoint(0, 1), LatticePoint(0, 2))
    assert right == (LatticePoint(2, 0), LatticePoint(2, 1), LatticePoint(2, 2))


def test_boundary_paths_staircase_transitions():
    region = Region(((0, 1), (1, 2)))
    upper, lower, _, _ = boundary_paths(region)
    # the upper envelope dips to the shared height before moving right
    assert upper.vertices == (LatticePoint(0, 1), LatticePoint(1, 1), LatticePoint(1, 2))
    # the lower envelope climbs to the shared height before moving right
    assert lower.vertices == (LatticePoint(0, 0), LatticePoint(0, 1), LatticePoint(1, 1))
    assert path_in_region(region, upper) and path_in_region(region, lower)


def test_boundary_paths_single_column():
    upper, lower, left, right = boundary_paths(Region(((0, 2),)))
    assert upper == LatticePath(LatticePoint(0, 2), ())
    assert lower == LatticePath(LatticePoint(0, 0), ())
    assert left == right


def test_boundary_paths_diagonal_region():
    region = Region(((0, 0), (-1, 1), (0, 2)), DYCK)
    upper, lower, _, _ = boundary_paths(region)
    assert upper == LatticePath(LatticePoint(0, 0), ("NE", "NE"))
    assert lower == LatticePath(LatticePoint(0, 0), ("SE", "NE"))


def test_boundary_paths_stay_inside_random_regions():
    from exitwalk.fixtures import random_region
    import random

    rng = random.Random(7)
    for _ in range(40):
        region = random_region(rng)
        upper, lower, left, right = boundary_paths(region)
        assert path_in_region(region, upper)
        assert path_in_region(region, lower)
        assert upper.start == LatticePoint(0, region.hi(0))
        assert upper.end == LatticePoint(region.m, region.hi(region.m))
        assert lower.start == LatticePoint(0, region.lo(0))
        assert lower.end == LatticePoint(region.m, region.lo(region.m))
        assert left == tuple(region.column_points(0))
        assert right == tuple(region.column_points(region.m))
        # envelopes never step left
        assert "L" not in upper.steps and "L" not in lower.steps


# ---------------------------------------------------------------------------
# Projection profiles
# ---------------------------------------------------------------------------


def test_projection_profile_simple_staircase():
    path = LatticePath(LatticePoint(0, 0), ("R", "U", "R"))
    prof = projection_profile(path)
    assert prof.h == (1, 1)
    assert prof.v == (0, 1, 0)


def test_projection_profile_counts_both_directions():
    # going right then back left crosses the same segment twice
    path = LatticePath(LatticePoint(0, 0), ("R", "L"))
    prof = projection_profile(path, m=1)
    assert prof.h == (2,)
    assert prof.v == (0, 0)


def test_projection_profile_long_flat_step_spans_two_cells():
    path = LatticePath(LatticePoint(0, 0), ("EE",))
    prof = projection_profile(path, m=2)
    assert prof.h == (1, 1)
    assert prof.v == (0, 0, 0)


def test_projection_profile_diagonals_are_horizontal_only():
    # diagonal steps have horizontal extent, so they never count as vertical
    path = LatticePath(LatticePoint(0, 0), ("NE", "SE"))
    prof = projection_profile(path, m=2)
    assert prof.h == (1, 1)
    assert prof.v == (0, 0, 0)


def test_projection_profile_empty_path_with_width():
    prof = projection_profile(LatticePath(LatticePoint(1, 0), ()), m=2)
    assert prof.h == (0, 0)
    assert prof.v == (0, 0, 0)


def test_projection_profile_rejects_negative_abscissa():
    path = LatticePath(LatticePoint(0, 0), ("L",))
    with pytest.raises(ValueError):
        projection_profile(path)


def test_projection_profile_rejects_width_overflow():
    path = LatticePath(LatticePoint(0, 0), ("R", "R"))
    with pytest.raises(ValueError):
        projection_profile(path, m=1)


def test_profile_addition_and_key():
    a = projection_profile(LatticePath(LatticePoint(0, 0), ("R", "U")), m=2)
    b = projection_profile(LatticePath(LatticePoint(1, 1), ("R", "D")), m=2)
    total = a + b
    assert total.h == (1, 1)
    assert total.v == (0, 1, 1)
    assert total.key() == ((1, 1), (0, 1, 1))


def test_profile_addition_rejects_width_mismatch():
    a = projection_profile(LatticePath(LatticePoint(0, 0), ()), m=1)
    b = projection_profile(LatticePath(LatticePoint(0, 0), ()), m=2)
    with pytest.raises(ValueError):
        a + b


@given(steps=st.lists(st.sampled_from(["R", "L", "U", "D"]), max_size=12))
@settings(deadline=None, max_examples=60)
def test_projection_profile_shift_invariant(steps):
    path = LatticePath(LatticePoint(12, 0), tuple(steps))
    prof = projection_profile(path)
    shifted = projection_profile(shift_path(path, 5))
    assert prof.key() == shifted.key()
    # every unit step lands in exactly one bucket
    assert sum(prof.h) + sum(prof.v) == len(steps)


# ---------------------------------------------------------------------------
# Vertex intersections
# ---------------------------------------------------------------------------


def test_vertex_intersections_basic():
    a = LatticePath(LatticePoint(0, 0), ("R", "U"))
    b = LatticePath(LatticePoint(1, 1), ("D", "L"))
    assert vertex_intersections(a, b) == frozenset(
        {LatticePoint(1, 1), LatticePoint(1, 0), LatticePoint(0, 0)}
    )


def test_vertex_intersections_disjoint():
    a = LatticePath(LatticePoint(0, 0), ("R",))
    b = LatticePath(LatticePoint(5, 5), ("R",))
    assert vertex_intersections(a, b) == frozenset()


def test_vertex_intersections_counts_revisits_once():
    a = LatticePath(LatticePoint(0, 0), ("R", "L", "R"))
    b = LatticePath(LatticePoint(1, 0), ())
    assert vertex_intersections(a, b) == frozenset({LatticePoint(1, 0)})
