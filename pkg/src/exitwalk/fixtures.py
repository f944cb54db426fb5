"""Seeded random fixtures: regions, models, and feasible crossing setups."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import RegionError
from .lattice import DYCK, LatticePoint, Region, StepSet
from .walker import TransitionModel


def random_region(
    rng: random.Random,
    max_width: int = 8,
    max_height: int = 8,
    min_width: int = 1,
) -> Region:
    """Random valid region with width <= max_width and <= max_height cells per column."""
    m = rng.randint(min_width, max_width)
    lo = rng.randint(-3, 3)
    hi = lo + rng.randint(0, max_height - 1)
    cols = [(lo, hi)]
    for _ in range(m):
        plo, phi = cols[-1]
        lo = rng.randint(plo - 3, phi)
        hi = rng.randint(max(lo, plo), lo + max_height - 1)
        cols.append((lo, hi))
    return Region(tuple(cols))


def random_model(
    rng: random.Random, width: int, max_total: int = 12, diagonals: bool = False
) -> TransitionModel:
    """Random exact model; each column's probabilities are w_i/W with W <= max_total.

    Individual moves may get probability zero; columns always sum to exactly 1.
    """
    nslots = 6 if diagonals else 4
    slots: list[list[Fraction]] = [[] for _ in range(6)]
    for _ in range(width):
        total = rng.randint(1, max_total)
        weights = [0] * nslots
        for _ in range(total):
            weights[rng.randrange(nslots)] += 1
        for s in range(6):
            w = weights[s] if s < nslots else 0
            slots[s].append(Fraction(w, total))
    return TransitionModel(*(tuple(col) for col in slots))


def random_alpha_start(rng: random.Random, region: Region) -> LatticePoint:
    lo, hi = region.columns[0]
    return LatticePoint(0, rng.randint(lo, hi))


def random_crossing_fixture(
    rng: random.Random, max_width: int = 8, max_height: int = 8
):
    """(region, model, start, target, column) with at least one admissible walk.

    The model has m+1 weight columns, only right/up mass, and a strictly
    positive right weight in every column so crossings can happen wherever
    geometry allows.
    """
    while True:
        region = random_region(rng, max_width, max_height, min_width=2)
        m = region.m
        start = random_alpha_start(rng, region)
        rights, ups = [], []
        for _ in range(m + 1):
            total = rng.randint(2, 12)
            w_right = rng.randint(1, total)
            rights.append(Fraction(w_right, total))
            ups.append(Fraction(total - w_right, total))
        zeros = (Fraction(0),) * (m + 1)
        model = TransitionModel(tuple(rights), zeros, tuple(ups), zeros)
        # admissible targets must be reachable with positive weight: a column
        # whose up weight is zero only passes walks at its entry heights
        frontier = {start.y}
        for x in range(m + 1):
            lo, hi = region.columns[x]
            entered = {y for y in frontier if lo <= y <= hi}
            if ups[x]:
                reached: set[int] = set()
                for y in entered:
                    reached.update(range(y, hi + 1))
            else:
                reached = entered
            if not reached:
                break
            frontier = reached
        else:
            target = LatticePoint(m, rng.choice(sorted(frontier)))
            column = rng.randint(1, m - 1)
            return region, model, start, target, column


def random_dyck_region(rng: random.Random, n: int, step_set: StepSet = DYCK) -> Region:
    """Random region between two height profiles of 2n +/-1 steps from 0 to 0.

    The upper profile is the pointwise max and the lower the pointwise min of
    two shuffled profiles, so both boundaries change height by exactly 1 per
    column; resampled until the column overlap invariant holds.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    while True:
        profiles = []
        for _ in range(2):
            steps = [1] * n + [-1] * n
            rng.shuffle(steps)
            heights = [0]
            for s in steps:
                heights.append(heights[-1] + s)
            profiles.append(heights)
        cols = tuple(
            (min(a, b), max(a, b)) for a, b in zip(profiles[0], profiles[1])
        )
        try:
            return Region(cols, step_set)
        except RegionError:
            continue
