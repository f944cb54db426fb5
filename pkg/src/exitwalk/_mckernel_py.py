"""Pure-Python trajectory kernel, bit-identical to the compiled one.

All 64-bit arithmetic is masked so the draws match the C unsigned wraparound
exactly; the compiled extension implements the same construction with native
uint64 operations.
"""

from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK
    z ^= z >> 31
    return z


def run_chunk(
    t0: int,
    t1: int,
    seed: int,
    start_x: int,
    start_y: int,
    m: int,
    lo,
    hi,
    cum,
    scale,
    limit,
    beta_lo: int,
    beta_size: int,
    max_steps: int,
):
    """Simulate trajectories t0 <= t < t1; returns (counts, kills, capped).

    Trajectory t draws from its own counter stream: state = mix(seed + t*GAMMA),
    draw i = mix(state + (i+1)*GAMMA).  A draw r is accepted when r <= limit[x]
    (limit holds the largest acceptable word, so no value overflows 64 bits)
    and maps to the first slot k with r % scale[x] < cum[x][k].
    """
    lo = [int(v) for v in lo]
    hi = [int(v) for v in hi]
    cum_rows = [[int(v) for v in row] for row in cum]
    scale = [int(v) for v in scale]
    limit = [int(v) for v in limit]
    dx = (1, -1, 0, 0, 1, -1)
    dy = (0, 0, 1, -1, 1, -1)
    counts = [0] * beta_size
    kills = 0
    capped = 0
    beta_hi = beta_lo + beta_size - 1
    for t in range(t0, t1):
        state = _mix((seed + t * GAMMA) & MASK)
        x, y = start_x, start_y
        draw = 0
        steps = 0
        while True:
            if steps >= max_steps:
                kills += 1
                capped += 1
                break
            while True:
                draw += 1
                r = _mix((state + draw * GAMMA) & MASK)
                if r <= limit[x]:
                    break
            u = r % scale[x]
            row = cum_rows[x]
            k = 0
            while u >= row[k]:
                k += 1
            x += dx[k]
            y += dy[k]
            steps += 1
            if x == m:
                if beta_lo <= y <= beta_hi:
                    counts[y - beta_lo] += 1
                else:
                    kills += 1
                break
            if x < 0 or y < lo[x] or y > hi[x]:
                kills += 1
                break
    return np.array(counts, dtype=np.int64), kills, capped
