"""Exhaustive path enumeration and exact counting.

Enumeration is used by the injection verification harness; the counting DPs
double as independent oracles for the solver modules and feed the
log-concavity audits of the classic count families.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import EnumerationTooLarge
from .lattice import (
    STEP_VECTORS,
    LatticePath,
    LatticePoint,
    Region,
    contains,
)

# Work ceiling for exhaustive DFS enumeration, measured in visited prefixes.
ENUMERATION_BUDGET = 10_000_000

MODE_STEPS: dict[str, tuple[str, ...]] = {
    "monotone": ("R", "U"),
    "dyck": ("NE", "SE"),
    "schroder": ("NE", "SE", "EE"),
}


def _walk_counts(region: Region, frm: LatticePoint, length_bound: int) -> list[dict]:
    """counts[t][v] = number of t-step walks frm -> v staying in the region."""
    steps = [STEP_VECTORS[s] for s in region.step_set.steps]
    cur = {frm: 1}
    out = [cur]
    for _ in range(length_bound):
        nxt: dict[LatticePoint, int] = {}
        for (x, y), c in cur.items():
            for dx, dy in steps:
                p = LatticePoint(x + dx, y + dy)
                if contains(region, p):
                    nxt[p] = nxt.get(p, 0) + c
        cur = nxt
        out.append(cur)
    return out


def enumerate_free_paths(
    region: Region, frm: LatticePoint, to: LatticePoint, length_bound: int
) -> list[LatticePath]:
    """All paths frm -> to inside the region with at most length_bound steps.

    Paths may revisit vertices.  Enumeration follows the step set's declared
    step order, so the output is in lexicographic step order.  Raises
    EnumerationTooLarge when the DFS would visit more prefixes than the
    work budget allows.
    """
    frm = LatticePoint(*frm)
    to = LatticePoint(*to)
    if not (contains(region, frm) and contains(region, to)):
        raise ValueError("endpoints must lie in the region")
    counts = _walk_counts(region, frm, length_bound)
    total_prefixes = sum(sum(level.values()) for level in counts)
    if total_prefixes > ENUMERATION_BUDGET:
        raise EnumerationTooLarge(
            f"about {total_prefixes} path prefixes exceed budget {ENUMERATION_BUDGET}"
        )

    names = region.step_set.steps
    vecs = [STEP_VECTORS[s] for s in names]
    out: list[LatticePath] = []
    steps: list[str] = []

    def dfs(p: LatticePoint, remaining: int):
        if p == to:
            out.append(LatticePath(frm, tuple(steps)))
        if remaining <= 0:
            return
        for name, (dx, dy) in zip(names, vecs):
            q = LatticePoint(p.x + dx, p.y + dy)
            if contains(region, q):
                steps.append(name)
                dfs(q, remaining - 1)
                steps.pop()

    dfs(frm, length_bound)
    return out


def count_free_paths_by_length(
    region: Region, frm: LatticePoint, to: LatticePoint, length_bound: int
) -> dict[int, int]:
    """Number of frm -> to paths in the region, keyed by exact length."""
    frm = LatticePoint(*frm)
    to = LatticePoint(*to)
    counts = _walk_counts(region, frm, length_bound)
    return {t: level[to] for t, level in enumerate(counts) if to in level}


def _first_exit_dp(
    region: Region, model, start: LatticePoint, length_bound: int
) -> tuple[dict[int, Fraction], Fraction, Fraction]:
    """Time-stepped mass transport up to length_bound steps.

    Returns (exit mass by height, mass still alive, killed mass); the three
    parts always sum to 1.  Exit means first arrival at column m inside the
    right boundary segment; any move off the region kills the walk.
    """
    m = region.m
    start = LatticePoint(*start)
    if not contains(region, start):
        raise ValueError("start must lie in the region")
    lo_m, hi_m = region.columns[m]
    exit_mass: dict[int, Fraction] = {k: Fraction(0) for k in range(lo_m, hi_m + 1)}
    killed = Fraction(0)
    if start.x == m:
        exit_mass[start.y] = Fraction(1)
        return exit_mass, Fraction(0), killed

    n_states = sum(hi - lo + 1 for lo, hi in region.columns[:m])
    if n_states * length_bound > 100_000_000:
        raise EnumerationTooLarge("state count times step bound exceeds budget")

    moves = [
        [(dx, dy, p) for dx, dy, p in model.step_items(x)]
        for x in range(m)
    ]
    alive: dict[LatticePoint, Fraction] = {start: Fraction(1)}
    for _ in range(length_bound):
        if not alive:
            break
        nxt: dict[LatticePoint, Fraction] = {}
        for (x, y), mass in alive.items():
            for dx, dy, p in moves[x]:
                if not p:
                    continue
                tx, ty = x + dx, y + dy
                part = mass * p
                if tx == m and lo_m <= ty <= hi_m:
                    exit_mass[ty] += part
                elif contains(region, (tx, ty)) and tx < m:
                    q = LatticePoint(tx, ty)
                    nxt[q] = nxt.get(q, Fraction(0)) + part
                else:
                    killed += part
        alive = nxt
    remaining = sum(alive.values(), Fraction(0))
    return exit_mass, remaining, killed


def first_exit_mass_lower_bound(
    region: Region, model, start: LatticePoint, length_bound: int
) -> dict[int, Fraction]:
    """Exact mass of walks exiting at each height within length_bound steps.

    A monotone-in-bound lower bound on the true exit distribution: only
    trajectories of length <= length_bound contribute.
    """
    exit_mass, _, _ = _first_exit_dp(region, model, start, length_bound)
    return exit_mass


def _mode_steps(mode: str) -> list[tuple[str, tuple[int, int]]]:
    if mode not in MODE_STEPS:
        raise ValueError(f"mode must be one of {sorted(MODE_STEPS)}, got {mode!r}")
    return [(s, STEP_VECTORS[s]) for s in MODE_STEPS[mode]]


def _forward_table(
    region: Region, mode: str, frm: LatticePoint, last_col: int
) -> list[dict[int, int]]:
    """fwd[x][y] = number of mode-paths frm -> (x, y) inside the region."""
    steps = _mode_steps(mode)
    fwd: list[dict[int, int]] = [dict() for _ in range(last_col + 1)]
    if frm.x <= last_col and contains(region, frm):
        fwd[frm.x][frm.y] = 1
    for x in range(frm.x, last_col + 1):
        lo, hi = region.columns[x]
        col = fwd[x]
        # vertical accumulation within the column (monotone U steps only)
        if mode == "monotone":
            for y in range(lo + 1, hi + 1):
                if y - 1 in col:
                    col[y] = col.get(y, 0) + col[y - 1]
        for y, c in col.items():
            for _, (dx, dy) in steps:
                if dx == 0:
                    continue
                tx, ty = x + dx, y + dy
                if tx <= last_col and contains(region, (tx, ty)):
                    fwd[tx][ty] = fwd[tx].get(ty, 0) + c
    return fwd


def count_paths(region: Region, mode: str, frm: LatticePoint, to: LatticePoint) -> int:
    """Number of mode-paths frm -> to staying in the region."""
    frm, to = LatticePoint(*frm), LatticePoint(*to)
    if to.x < frm.x:
        return 0
    fwd = _forward_table(region, mode, frm, to.x)
    return fwd[to.x].get(to.y, 0)


def count_paths_through(
    region: Region, mode: str, frm: LatticePoint, to: LatticePoint, column: int
) -> dict[int, int]:
    """Counts of frm -> to mode-paths that contain the point (column, k).

    Keyed by every height k of the chosen column; heights no path passes get
    0.  Self-avoiding monotone paths contain each point at most once, so each
    count is a product of a forward and a backward table entry.
    """
    frm, to = LatticePoint(*frm), LatticePoint(*to)
    if not frm.x <= column <= to.x:
        raise ValueError("column must lie between the endpoints")
    fwd = _forward_table(region, mode, frm, column)
    # backward counts via the reflected region: x' = to.x - x, y' = -y turns
    # (column, k) -> B paths into forward paths of the same mode.
    mirror_cols = tuple(
        (-hi, -lo) for lo, hi in reversed(region.columns[: to.x + 1])
    )
    mirror = Region(mirror_cols, region.step_set)
    bwd_fwd = _forward_table(
        mirror, mode, LatticePoint(0, -to.y), to.x - column
    )
    bwd = bwd_fwd[to.x - column]
    lo, hi = region.columns[column]
    out: dict[int, int] = {}
    for k in range(lo, hi + 1):
        out[k] = fwd[column].get(k, 0) * bwd.get(-k, 0)
    return out


def delannoy(p: int, q: int) -> int:
    """Entry (p, q) of the central count table D(p, q) = D(p-1, q) + D(p, q-1) + D(p-1, q-1)."""
    if p < 0 or q < 0:
        raise ValueError("indices must be nonnegative")
    row = [1] * (q + 1)
    for _ in range(p):
        new = [1] * (q + 1)
        for j in range(1, q + 1):
            new[j] = new[j - 1] + row[j] + row[j - 1]
        row = new
    return row[q]


def ballot(n: int, k: int) -> int:
    """Number of n-step nonnegative up/down sequences with k up-steps.

    Defined for n/2 <= k <= n (so the walk can stay nonnegative); closed form
    (2k - n + 1) / (k + 1) * C(n, k), always an integer.
    """
    if not (0 <= k <= n and 2 * k >= n):
        raise ValueError(f"need n/2 <= k <= n, got n={n}, k={k}")
    num = (2 * k - n + 1) * comb(n, k)
    den = k + 1
    assert num % den == 0, "ballot closed form must be integral"
    return num // den


def binomial(n: int, k: int) -> int:
    return comb(n, k)
