"""Planar lattice geometry: x-monotone regions, lattice paths, projections.

A region is a width-m slab of integer columns; column x occupies the integer
heights [lo(x), hi(x)].  The left boundary segment (column 0) is where walks
start, the right boundary segment (column m) is where they exit.  Regions are
validated so that every column is nonempty and consecutive columns share at
least one height, which makes the upper and lower envelopes traceable by
x-monotone boundary paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, NamedTuple, Sequence

from .errors import BadShiftUnit, DisconnectedColumns, EmptyColumn, RegionError


class LatticePoint(NamedTuple):
    x: int
    y: int

    def shifted(self, dy: int) -> "LatticePoint":
        return LatticePoint(self.x, self.y + dy)


# Step names -> displacement vectors.  R/L/U/D are the unit square moves,
# NE/SW the square diagonals, NE/SE the "strictly advancing" diagonal moves,
# EE the double horizontal move.
STEP_VECTORS: dict[str, tuple[int, int]] = {
    "R": (1, 0),
    "L": (-1, 0),
    "U": (0, 1),
    "D": (0, -1),
    "NE": (1, 1),
    "SW": (-1, -1),
    "SE": (1, -1),
    "EE": (2, 0),
}


@dataclass(frozen=True)
class StepSet:
    """A named family of admissible steps with its vertical granularity.

    vertical_unit is the spacing of reachable heights within one column: 1 for
    the square families, 2 for the diagonal-only families (which preserve the
    parity of x + y).
    """

    kind: str
    steps: tuple[str, ...]
    vertical_unit: int

    def __contains__(self, name: str) -> bool:
        return name in self.steps

    def vector(self, name: str) -> tuple[int, int]:
        if name not in self.steps:
            raise KeyError(f"step {name!r} not in step set {self.kind!r}")
        return STEP_VECTORS[name]


SQUARE = StepSet("square", ("R", "L", "U", "D"), 1)
SQUARE_DIAG = StepSet("square_diag", ("R", "L", "U", "D", "NE", "SW"), 1)
DYCK = StepSet("dyck", ("NE", "SE"), 2)
SCHRODER = StepSet("schroder", ("NE", "SE", "EE"), 2)

STEP_SETS: dict[str, StepSet] = {
    s.kind: s for s in (SQUARE, SQUARE_DIAG, DYCK, SCHRODER)
}


@dataclass(frozen=True)
class Region:
    """Column-interval region between two x-monotone boundary paths.

    columns[x] = (lo, hi) for x in 0..m; width m = len(columns) - 1.  The
    constructor validates the column invariants, so every Region instance is
    usable.
    """

    columns: tuple[tuple[int, int], ...]
    step_set: StepSet = SQUARE

    def __post_init__(self):
        cols = tuple((int(lo), int(hi)) for lo, hi in self.columns)
        object.__setattr__(self, "columns", cols)
        if not cols:
            raise RegionError("region needs at least one column")
        for x, (lo, hi) in enumerate(cols):
            if lo > hi:
                raise EmptyColumn(x)
        for x in range(len(cols) - 1):
            lo0, hi0 = cols[x]
            lo1, hi1 = cols[x + 1]
            if max(lo0, lo1) > min(hi0, hi1):
                raise DisconnectedColumns(x)
        if self.step_set.vertical_unit == 2:
            # Boundary walks of diagonal-only step sets change height by
            # exactly one per column; other profiles are not representable
            # in the column-interval encoding.
            for x in range(len(cols) - 1):
                if abs(cols[x + 1][0] - cols[x][0]) != 1 or abs(
                    cols[x + 1][1] - cols[x][1]
                ) != 1:
                    raise RegionError(
                        f"step set {self.step_set.kind!r} needs boundary height "
                        f"changes of exactly 1 per column (column {x})"
                    )

    @property
    def m(self) -> int:
        return len(self.columns) - 1

    def column(self, x: int) -> tuple[int, int]:
        return self.columns[x]

    def lo(self, x: int) -> int:
        return self.columns[x][0]

    def hi(self, x: int) -> int:
        return self.columns[x][1]

    def column_points(self, x: int) -> list[LatticePoint]:
        lo, hi = self.columns[x]
        return [LatticePoint(x, y) for y in range(lo, hi + 1)]

    def points(self) -> Iterator[LatticePoint]:
        for x in range(self.m + 1):
            yield from self.column_points(x)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "columns": [[lo, hi] for lo, hi in self.columns],
            "step_set": self.step_set.kind,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Region":
        columns = tuple((int(lo), int(hi)) for lo, hi in data["columns"])
        kind = data.get("step_set", "square")
        if kind not in STEP_SETS:
            raise RegionError(f"unknown step set {kind!r}")
        if "m" in data and int(data["m"]) != len(columns) - 1:
            raise RegionError("m does not match number of columns")
        return cls(columns, STEP_SETS[kind])


def validate_region(
    columns: Sequence[tuple[int, int]], step_set: StepSet = SQUARE
) -> Region:
    """Build a Region, raising EmptyColumn / DisconnectedColumns on bad input."""
    return Region(tuple(columns), step_set)


def contains(region: Region, point: tuple[int, int]) -> bool:
    x, y = point
    if not 0 <= x <= region.m:
        return False
    lo, hi = region.columns[x]
    return lo <= y <= hi


@dataclass(frozen=True)
class LatticePath:
    """A start point plus a sequence of named steps."""

    start: LatticePoint
    steps: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "start", LatticePoint(*self.start))
        steps = tuple(self.steps)
        for s in steps:
            if s not in STEP_VECTORS:
                raise ValueError(f"unknown step name {s!r}")
        object.__setattr__(self, "steps", steps)

    def __len__(self) -> int:
        return len(self.steps)

    @cached_property
    def vertices(self) -> tuple[LatticePoint, ...]:
        out = [self.start]
        x, y = self.start
        for s in self.steps:
            dx, dy = STEP_VECTORS[s]
            x += dx
            y += dy
            out.append(LatticePoint(x, y))
        return tuple(out)

    @property
    def end(self) -> LatticePoint:
        return self.vertices[-1]

    def to_json(self) -> dict:
        return {"start": [self.start.x, self.start.y], "steps": list(self.steps)}

    @classmethod
    def from_json(cls, data: Mapping) -> "LatticePath":
        x, y = data["start"]
        return cls(LatticePoint(int(x), int(y)), tuple(data.get("steps", ())))


def path_in_region(region: Region, path: LatticePath) -> bool:
    """True when every vertex of the path lies in the region."""
    return all(contains(region, v) for v in path.vertices)


def _infer_vertical_unit(path: LatticePath) -> int:
    if path.steps and all(s in ("NE", "SE", "EE") for s in path.steps):
        return 2
    return 1


def shift_path(path: LatticePath, dy: int, step_set: StepSet | None = None) -> LatticePath:
    """Translate a path vertically by dy.

    dy must be a multiple of the vertical unit (taken from step_set when
    given, otherwise inferred from the step names) so the shifted path stays
    on the sublattice the steps can reach.
    """
    unit = step_set.vertical_unit if step_set is not None else _infer_vertical_unit(path)
    if dy % unit:
        raise BadShiftUnit(f"shift {dy} is not a multiple of vertical unit {unit}")
    return LatticePath(path.start.shifted(dy), path.steps)


def boundary_paths(
    region: Region,
) -> tuple[LatticePath, LatticePath, tuple[LatticePoint, ...], tuple[LatticePoint, ...]]:
    """Canonical boundary data (upper path, lower path, left segment, right segment).

    The upper path walks the upper envelope from (0, hi(0)) to (m, hi(m)); at
    each column transition it first descends to the shared height, moves
    right, then ascends.  The lower path mirrors this along the lower
    envelope.  For vertical-unit-2 step sets the transitions are single NE/SE
    steps.  The left and right segments list the integer points of columns 0
    and m bottom-to-top.
    """
    vu = region.step_set.vertical_unit
    m = region.m

    def envelope(select_hi: bool) -> LatticePath:
        level = region.hi(0) if select_hi else region.lo(0)
        steps: list[str] = []
        for x in range(m):
            nxt = region.hi(x + 1) if select_hi else region.lo(x + 1)
            if vu == 2:
                steps.append("NE" if nxt > level else "SE")
            else:
                if select_hi:
                    shared = min(level, nxt)
                    steps.extend(["D"] * (level - shared))
                    steps.append("R")
                    steps.extend(["U"] * (nxt - shared))
                else:
                    shared = max(level, nxt)
                    steps.extend(["U"] * (shared - level))
                    steps.append("R")
                    steps.extend(["D"] * (shared - nxt))
            level = nxt
        y0 = region.hi(0) if select_hi else region.lo(0)
        return LatticePath(LatticePoint(0, y0), tuple(steps))

    upper = envelope(True)
    lower = envelope(False)
    left = tuple(region.column_points(0))
    right = tuple(region.column_points(m))
    return upper, lower, left, right


@dataclass(frozen=True)
class ProjectionProfile:
    """Step-count projection of a path onto unit intervals of the x-axis.

    h[x] counts steps whose horizontal extent covers [x, x+1] (an EE step
    covers two unit intervals and contributes to both h[x] and h[x+1]);
    v[x] counts purely vertical steps taken at abscissa x.
    """

    h: tuple[int, ...]
    v: tuple[int, ...]

    def __add__(self, other: "ProjectionProfile") -> "ProjectionProfile":
        if len(self.h) != len(other.h) or len(self.v) != len(other.v):
            raise ValueError("profiles have different widths")
        return ProjectionProfile(
            tuple(a + b for a, b in zip(self.h, other.h)),
            tuple(a + b for a, b in zip(self.v, other.v)),
        )

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.h, self.v)


def projection_profile(path: LatticePath, m: int | None = None) -> ProjectionProfile:
    """Project a path's steps onto the x-axis.

    m fixes the ambient width (h has m entries, v has m+1); when omitted it
    defaults to the largest abscissa the path touches.  All vertices must
    have x >= 0.
    """
    verts = path.vertices
    max_x = max(v.x for v in verts)
    min_x = min(v.x for v in verts)
    if min_x < 0:
        raise ValueError("projection expects abscissae >= 0")
    if m is None:
        m = max_x
    elif max_x > m:
        raise ValueError(f"path reaches x={max_x}, beyond ambient width {m}")
    h = [0] * m
    v = [0] * (m + 1)
    x = path.start.x
    for s in path.steps:
        dx, dy = STEP_VECTORS[s]
        if dx == 0:
            v[x] += 1
        elif dx == 1:
            h[x] += 1
        elif dx == -1:
            h[x - 1] += 1
        else:  # EE spans [x, x+2]
            h[x] += 1
            h[x + 1] += 1
        x += dx
    return ProjectionProfile(tuple(h), tuple(v))


def vertex_intersections(first: LatticePath, second: LatticePath) -> frozenset[LatticePoint]:
    """Set of lattice points visited by both paths."""
    return frozenset(first.vertices) & frozenset(second.vertices)
