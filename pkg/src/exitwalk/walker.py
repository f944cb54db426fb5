"""Exact absorbed-walk solvers and log-concavity audits.

The central operation computes, in exact rational arithmetic, the
distribution of the height at which a killed random walk first reaches the
right edge of a region.  A float value-iteration oracle provides an
independent cross-check, unbounded strips are handled by truncation with
Cauchy-style convergence control, and a separate solver handles conditioned
monotone crossings via a two-sided factorization.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NoConvergence,
    SingularSystem,
    UnreachableB,
)
from .lattice import SQUARE, LatticePoint, Region, StepSet, contains

_ZERO = Fraction(0)

# Sampling/assembly order of the six supported moves.
SLOT_NAMES = ("right", "left", "up", "down", "up_right", "down_left")
SLOT_VECTORS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1))


def _fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"expected an exact rational (int, Fraction, or 'p/q'), got {v!r}")


@dataclass(frozen=True)
class TransitionModel:
    """Per-column step probabilities for a killed lattice walk.

    Each field holds one probability per interior column x = 0..width-1.
    Column probabilities must sum to exactly 1; moves that would leave the
    region kill the walk rather than being renormalized.
    """

    right: tuple[Fraction, ...]
    left: tuple[Fraction, ...]
    up: tuple[Fraction, ...]
    down: tuple[Fraction, ...]
    up_right: tuple[Fraction, ...] = ()
    down_left: tuple[Fraction, ...] = ()

    def __post_init__(self):
        width = len(self.right)
        for name in ("right", "left", "up", "down"):
            vals = tuple(_fraction(v) for v in getattr(self, name))
            object.__setattr__(self, name, vals)
        for name in ("up_right", "down_left"):
            raw = getattr(self, name)
            vals = tuple(_fraction(v) for v in raw) if raw else (_ZERO,) * width
            object.__setattr__(self, name, vals)
        for name in SLOT_NAMES:
            vals = getattr(self, name)
            if len(vals) != width:
                raise DimensionMismatch(
                    f"{name} has {len(vals)} entries, expected {width}"
                )
            if any(v < 0 for v in vals):
                raise ValueError(f"{name} contains a negative probability")
        for x in range(width):
            total = sum(getattr(self, name)[x] for name in SLOT_NAMES)
            if total != 1:
                raise ValueError(f"column {x} probabilities sum to {total}, not 1")

    @property
    def width(self) -> int:
        return len(self.right)

    @property
    def uses_diagonals(self) -> bool:
        return any(self.up_right) or any(self.down_left)

    def column_probs(self, x: int) -> tuple[Fraction, ...]:
        return tuple(getattr(self, name)[x] for name in SLOT_NAMES)

    def step_items(self, x: int) -> list[tuple[int, int, Fraction]]:
        """(dx, dy, probability) for each of the six slots of column x."""
        return [
            (dx, dy, getattr(self, name)[x])
            for name, (dx, dy) in zip(SLOT_NAMES, SLOT_VECTORS)
        ]

    @classmethod
    def uniform(cls, width: int, diagonals: bool = False) -> "TransitionModel":
        share = Fraction(1, 6 if diagonals else 4)
        flat = (share,) * width
        if diagonals:
            return cls(flat, flat, flat, flat, flat, flat)
        return cls(flat, flat, flat, flat)

    def to_json(self) -> dict:
        return {name: [str(v) for v in getattr(self, name)] for name in SLOT_NAMES}

    @classmethod
    def from_json(cls, data: Mapping) -> "TransitionModel":
        kwargs = {}
        for name in SLOT_NAMES:
            if name in data:
                kwargs[name] = tuple(_fraction(v) for v in data[name])
        for name in ("right", "left", "up", "down"):
            if name not in kwargs:
                raise DimensionMismatch(f"model JSON is missing {name!r}")
        return cls(**kwargs)


@dataclass
class ExitDistribution:
    """Exact exit-height law of a killed walk, plus the killed mass."""

    probabilities: dict[int, Fraction]
    start: LatticePoint
    kill_mass: Fraction

    @property
    def total_mass(self) -> Fraction:
        return sum(self.probabilities.values(), _ZERO)

    def as_floats(self) -> dict[int, float]:
        return {k: float(v) for k, v in self.probabilities.items()}

    def to_json(self) -> dict:
        return {
            "start": [self.start.x, self.start.y],
            "probabilities": {str(k): str(v) for k, v in sorted(self.probabilities.items())},
            "kill_mass": str(self.kill_mass),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ExitDistribution":
        x, y = data["start"]
        probs = {int(k): Fraction(v) for k, v in data["probabilities"].items()}
        return cls(probs, LatticePoint(int(x), int(y)), Fraction(data["kill_mass"]))


def _check_square_family(region: Region, model: TransitionModel):
    if region.step_set.kind not in ("square", "square_diag"):
        raise DimensionMismatch(
            "transition models describe unit square moves; region uses "
            f"step set {region.step_set.kind!r}"
        )
    if model.uses_diagonals and region.step_set.kind != "square_diag":
        raise DimensionMismatch("diagonal probabilities need a square_diag region")


def _state_layout(region: Region) -> tuple[list[int], int]:
    """Column-major state indexing for interior columns 0..m-1."""
    offsets = []
    idx = 0
    for x in range(region.m):
        lo, hi = region.columns[x]
        offsets.append(idx - lo)
        idx += hi - lo + 1
    return offsets, idx


def _leak_reachable(region: Region, model: TransitionModel) -> list[bool]:
    """Per interior state: can the walk ever reach column m or be killed?

    A model may trap mass in a conservative interior cycle (e.g. one column
    sending everything right, the next everything left); such states never
    terminate, their exit and kill masses are all exactly 0, and keeping them
    in the linear system would make it singular.
    """
    m = region.m
    offsets, n = _state_layout(region)
    radj: list[list[int]] = [[] for _ in range(n)]
    queue: deque[int] = deque()
    seen = [False] * n
    for x in range(m):
        lo, hi = region.columns[x]
        items = [(dx, dy) for dx, dy, p in model.step_items(x) if p]
        for y in range(lo, hi + 1):
            i = offsets[x] + y
            for dx, dy in items:
                tx, ty = x + dx, y + dy
                if 0 <= tx < m and region.lo(tx) <= ty <= region.hi(tx):
                    radj[offsets[tx] + ty].append(i)
                elif not seen[i]:
                    # the move exits at column m or kills: a terminal leak
                    seen[i] = True
                    queue.append(i)
    while queue:
        j = queue.popleft()
        for i in radj[j]:
            if not seen[i]:
                seen[i] = True
                queue.append(i)
    return seen


def _assemble_system(region: Region, model: TransitionModel):
    """Integer augmented rows of (I - Q) h = [exit columns | kill column].

    Each row is cleared of denominators with its column's lcm; the extra
    columns n..n+K-1 hold the one-step mass sent to each exit height and
    column n+K the one-step killed mass.  States that can never terminate
    (see _leak_reachable) carry h = 0 identically, so they are dropped and
    moves into them contribute to no right-hand side; what remains is the
    minimal -- i.e. probabilistic -- solution, and the reduced matrix is
    nonsingular.
    """
    m = region.m
    offsets, n_full = _state_layout(region)
    alive = _leak_reachable(region, model)
    remap = [-1] * n_full
    n = 0
    for i in range(n_full):
        if alive[i]:
            remap[i] = n
            n += 1
    lo_m, hi_m = region.columns[m]
    K = hi_m - lo_m + 1
    rows: list[dict[int, int]] = [dict() for _ in range(n)]
    band = 1
    for x in range(m):
        lo, hi = region.columns[x]
        items = [(dx, dy, p) for dx, dy, p in model.step_items(x) if p]
        denom = math.lcm(*(p.denominator for _, _, p in items)) if items else 1
        for y in range(lo, hi + 1):
            i = remap[offsets[x] + y]
            if i < 0:
                continue
            row = rows[i]
            row[i] = denom
            for dx, dy, p in items:
                tx, ty = x + dx, y + dy
                w = int(p * denom)
                if tx == m and lo_m <= ty <= hi_m:
                    col = n + (ty - lo_m)
                    row[col] = row.get(col, 0) + w
                elif 0 <= tx < m and region.lo(tx) <= ty <= region.hi(tx):
                    j = remap[offsets[tx] + ty]
                    if j >= 0:
                        row[j] = row.get(j, 0) - w
                        band = max(band, abs(j - i))
                    # else: mass entering a never-terminating state is gone
                else:
                    row[n + K] = row.get(n + K, 0) + w
    return rows, n, K, band, offsets, remap


def _bareiss_triangularize(rows: list[dict[int, int]], n: int, band: int) -> int:
    """Fraction-free banded forward elimination in place; returns the determinant.

    Rows enter the elimination window lazily and are rescaled by the running
    previous pivot on activation, which keeps every intermediate value a
    bordered minor of the original integer matrix (so all divisions below are
    exact).  Pivots of this diagonally dominant system must stay positive;
    a nonpositive pivot means some mass can circulate forever.
    """
    prev = 1
    next_active = band + 1
    for i in range(n):
        while next_active <= min(n - 1, i + band):
            if prev != 1:
                rows[next_active] = {
                    c: v * prev for c, v in rows[next_active].items()
                }
            next_active += 1
        piv_row = rows[i]
        piv = piv_row.get(i, 0)
        if piv <= 0:
            raise SingularSystem(f"nonpositive pivot at state {i}")
        for j in range(i + 1, min(n, i + band + 1)):
            rj = rows[j]
            f = rj.pop(i, 0)
            cols = set(rj)
            if f:
                cols.update(c for c in piv_row if c > i)
            new: dict[int, int] = {}
            for c in cols:
                val = rj.get(c, 0) * piv - f * piv_row.get(c, 0)
                if val:
                    q, rem = divmod(val, prev)
                    assert rem == 0, "fraction-free elimination lost exactness"
                    new[c] = q
            rows[j] = new
        prev = piv
    return prev


def _back_substitute(
    rows: list[dict[int, int]], n: int, det: int, rhs_col: int
) -> list[int]:
    """Integer numerators of the solution for one augmented column (over det)."""
    nums = [0] * n
    for i in reversed(range(n)):
        row = rows[i]
        acc = row.get(rhs_col, 0) * det
        for c, v in row.items():
            if i < c < n:
                acc -= v * nums[c]
        q, rem = divmod(acc, row[i])
        assert rem == 0, "back substitution lost exactness"
        nums[i] = q
    return nums


def exact_exit_distribution(
    region: Region, model: TransitionModel, start: LatticePoint
) -> ExitDistribution:
    """Exact law of the height at which the walk first reaches column m.

    The walk starts on the left segment, moves by the model's column
    probabilities, and dies on any move that leaves the region.  All
    arithmetic is integer/rational; the result is exact.  Mass that the
    model traps in a conservative interior cycle never terminates and is
    counted as neither exit nor kill, so total_mass + kill_mass < 1 for
    such models.
    """
    start = LatticePoint(*start)
    m = region.m
    _check_square_family(region, model)
    if model.width != m:
        raise DimensionMismatch(
            f"model has {model.width} weight columns, region has {m} interior columns"
        )
    if start.x != 0 or not contains(region, start):
        raise ValueError(f"start {start} must lie on the left segment")
    lo_m, hi_m = region.columns[m]
    if m == 0:
        probs = {k: Fraction(int(k == start.y)) for k in range(lo_m, hi_m + 1)}
        return ExitDistribution(probs, start, _ZERO)

    rows, n, K, band, offsets, remap = _assemble_system(region, model)
    start_idx = remap[offsets[0] + start.y]
    if start_idx < 0:
        # the start can never terminate: every exit and kill mass is zero
        probs = {k: _ZERO for k in range(lo_m, hi_m + 1)}
        return ExitDistribution(probs, start, _ZERO)
    det = _bareiss_triangularize(rows, n, band)
    probs: dict[int, Fraction] = {}
    for t in range(K):
        nums = _back_substitute(rows, n, det, n + t)
        probs[lo_m + t] = Fraction(nums[start_idx], det)
    kill_nums = _back_substitute(rows, n, det, n + K)
    return ExitDistribution(probs, start, Fraction(kill_nums[start_idx], det))


def value_iteration_distribution(
    region: Region,
    model: TransitionModel,
    start: LatticePoint,
    tol: float = 1e-16,
    max_sweeps: int = 500_000,
) -> tuple[dict[int, float], float]:
    """Float fixed-point oracle for exact_exit_distribution.

    Iterates H <- R + Q H until the sup-norm increment drops below tol.
    Returns (exit probabilities, kill mass) as floats.
    """
    start = LatticePoint(*start)
    m = region.m
    _check_square_family(region, model)
    if model.width != m:
        raise DimensionMismatch("model width must equal region width")
    if start.x != 0 or not contains(region, start):
        raise ValueError(f"start {start} must lie on the left segment")
    lo_m, hi_m = region.columns[m]
    if m == 0:
        return {k: float(k == start.y) for k in range(lo_m, hi_m + 1)}, 0.0

    offsets, n = _state_layout(region)
    K = hi_m - lo_m + 1
    Q = np.zeros((n, n))
    R = np.zeros((n, K + 1))
    for x in range(m):
        lo, hi = region.columns[x]
        for y in range(lo, hi + 1):
            i = offsets[x] + y
            for dx, dy, p in model.step_items(x):
                if not p:
                    continue
                tx, ty = x + dx, y + dy
                w = float(p)
                if tx == m and lo_m <= ty <= hi_m:
                    R[i, ty - lo_m] += w
                elif 0 <= tx < m and region.lo(tx) <= ty <= region.hi(tx):
                    Q[i, offsets[tx] + ty] += w
                else:
                    R[i, K] += w
    H = np.zeros((n, K + 1))
    for _ in range(max_sweeps):
        H2 = R + Q @ H
        delta = float(np.max(np.abs(H2 - H)))
        H = H2
        if delta < tol:
            break
    else:
        raise NoConvergence(f"value iteration stuck above tol={tol}")
    i0 = offsets[0] + start.y
    probs = {lo_m + t: float(H[i0, t]) for t in range(K)}
    return probs, float(H[i0, K])


@dataclass(frozen=True)
class LogConcavityReport:
    stride: int
    violations: tuple[tuple[int, object, object], ...]
    checked: int

    @property
    def passed(self) -> bool:
        return not self.violations


def log_concavity_check(values, stride: int = 1) -> LogConcavityReport:
    """Check v(k)^2 >= v(k-stride) * v(k+stride) at every index with both neighbors.

    values may be a mapping from integer index to value or a sequence
    (indexed from 0).  Exact if the values are exact.
    """
    if isinstance(values, Mapping):
        items = dict(values)
    else:
        items = {i: v for i, v in enumerate(values)}
    violations = []
    checked = 0
    for k in sorted(items):
        if k - stride in items and k + stride in items:
            checked += 1
            lhs = items[k] * items[k]
            rhs = items[k - stride] * items[k + stride]
            if lhs < rhs:
                violations.append((k, lhs, rhs))
    return LogConcavityReport(stride, tuple(violations), checked)


@dataclass(frozen=True)
class Strip:
    """A region template whose columns may be unbounded above and/or below."""

    columns: tuple[tuple[int | None, int | None], ...]
    model: TransitionModel
    step_set: StepSet = SQUARE

    @property
    def m(self) -> int:
        return len(self.columns) - 1

    def truncated(self, height: int) -> Region:
        cols = tuple(
            (lo if lo is not None else -height, hi if hi is not None else height)
            for lo, hi in self.columns
        )
        return Region(cols, self.step_set)

    def to_json(self) -> dict:
        return {
            "columns": [[lo, hi] for lo, hi in self.columns],
            "model": self.model.to_json(),
            "step_set": self.step_set.kind,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Strip":
        from .lattice import STEP_SETS

        cols = tuple(
            (None if lo is None else int(lo), None if hi is None else int(hi))
            for lo, hi in data["columns"]
        )
        model = TransitionModel.from_json(data["model"])
        return cls(cols, model, STEP_SETS[data.get("step_set", "square")])


def ladder_strip() -> tuple[Strip, LatticePoint]:
    """Width-1 unbounded strip with right/up/down each 1/3, started at the origin."""
    third = Fraction(1, 3)
    model = TransitionModel((third,), (_ZERO,), (third,), (third,))
    return Strip(((None, None), (None, None)), model), LatticePoint(0, 0)


@dataclass
class StripResult:
    probabilities: dict[int, float]
    error_bound: float
    height: int


def truncated_strip_distribution(
    strip: Strip,
    start: LatticePoint,
    tol: float,
    initial_height: int = 4,
    max_height: int = 4096,
) -> StripResult:
    """Exit law of an unbounded strip via height doubling.

    Solves the strip truncated at +/-H exactly, doubles H until consecutive
    solutions differ by less than tol in every component, and returns the
    finer solution.  Truncation only removes trajectories, so each entry is
    nondecreasing in H.
    """
    start = LatticePoint(*start)

    def solve(height: int) -> dict[int, float]:
        region = strip.truncated(height)
        dist = exact_exit_distribution(region, strip.model, start)
        return {k: float(p) for k, p in dist.probabilities.items()}

    height = initial_height
    prev = solve(height)
    while 2 * height <= max_height:
        cur = solve(2 * height)
        keys = set(prev) | set(cur)
        diff = max(abs(cur.get(k, 0.0) - prev.get(k, 0.0)) for k in keys)
        if diff < tol:
            return StripResult(cur, diff, 2 * height)
        prev, height = cur, 2 * height
    raise NoConvergence(f"strip exit law still moving at height {height}")


def _monotone_first_hit(
    region: Region,
    right_weights: Sequence[Fraction],
    up_weights: Sequence[Fraction],
    start: LatticePoint,
) -> dict[int, Fraction]:
    """Raw weighted mass of up/right walks first reaching the last column.

    right_weights[x] and up_weights[x] weight the moves out of column x for
    x = 0..m-1.  Weights need not be stochastic; the result is unnormalized.
    """
    m = region.m
    cur: dict[int, Fraction] = {}
    lo0, hi0 = region.columns[0]
    if lo0 <= start.y <= hi0 and start.x == 0:
        cur[start.y] = Fraction(1)
    out: dict[int, Fraction] = {}
    for x in range(m):
        lo, hi = region.columns[x]
        up = up_weights[x]
        right = right_weights[x]
        if up:
            for y in range(lo + 1, hi + 1):
                below = cur.get(y - 1)
                if below:
                    cur[y] = cur.get(y, _ZERO) + below * up
        nlo, nhi = region.columns[x + 1]
        nxt: dict[int, Fraction] = {}
        if right:
            for y, mass in cur.items():
                if nlo <= y <= nhi:
                    nxt[y] = mass * right
        if x + 1 == m:
            out = nxt
        cur = nxt
    if m == 0:
        out = dict(cur)
    return out


def monotone_crossing_distribution(
    region: Region,
    model: TransitionModel,
    start: LatticePoint,
    target: LatticePoint,
    column: int,
) -> dict[int, Fraction]:
    """Law of the height at which a conditioned up/right walk enters a column.

    The walk goes from start (left edge) to target (right edge) using only
    right and up moves, weighted per column by the model; it is conditioned
    on reaching the target.  Returns the exact distribution of the height of
    the first vertex in the chosen column, over every height shared by the
    column and its left neighbor.

    The model needs m+1 weight columns: vertical weights at the final column
    still shape the law.  The computation factorizes into two first-hit
    masses, the suffix side solved on the half-turn rotation of the right
    half so both halves run left to right.
    """
    start, target = LatticePoint(*start), LatticePoint(*target)
    m = region.m
    if model.width != m + 1:
        raise DimensionMismatch(
            f"crossing model needs {m + 1} weight columns (one per region column)"
        )
    if any(model.left) or any(model.down) or model.uses_diagonals:
        raise ValueError("crossing walks use only right and up moves")
    if not 1 <= column <= m - 1:
        raise ValueError(f"column must be strictly between 0 and {m}")
    if start.x != 0 or not contains(region, start):
        raise ValueError("start must lie on the left segment")
    if target.x != m or not contains(region, target):
        raise ValueError("target must lie on the right segment")

    left_region = Region(region.columns[: column + 1], region.step_set)
    p_left = _monotone_first_hit(
        left_region, model.right[:column], model.up[:column], start
    )

    rot_cols = tuple((-hi, -lo) for lo, hi in reversed(region.columns[column - 1 :]))
    rot_region = Region(rot_cols, region.step_set)
    m2 = rot_region.m  # = m - column + 1
    rot_right = tuple(model.right[m - 1 - xp] for xp in range(m2))
    rot_up = tuple(model.up[m - xp] for xp in range(m2))
    p_right = _monotone_first_hit(
        rot_region, rot_right, rot_up, LatticePoint(0, -target.y)
    )

    lo_c = max(region.lo(column), region.lo(column - 1))
    hi_c = min(region.hi(column), region.hi(column - 1))
    raw = {k: p_left.get(k, _ZERO) * p_right.get(-k, _ZERO) for k in range(lo_c, hi_c + 1)}
    total = sum(raw.values(), _ZERO)
    if total == 0:
        raise UnreachableB(f"no admissible walk from {start} to {target}")
    return {k: v / total for k, v in raw.items()}
