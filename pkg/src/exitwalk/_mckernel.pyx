# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled trajectory kernel; draw-for-draw identical to _mckernel_py."""

from libc.stdint cimport int64_t, uint64_t

import numpy as np


cdef uint64_t GAMMA = 0x9E3779B97F4A7C15UL


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z ^= z >> 30
    z *= 0xBF58476D1CE4E5B9UL
    z ^= z >> 27
    z *= 0x94D049BB133111EBUL
    z ^= z >> 31
    return z


def run_chunk(
    uint64_t t0,
    uint64_t t1,
    uint64_t seed,
    int64_t start_x,
    int64_t start_y,
    int64_t m,
    int64_t[::1] lo,
    int64_t[::1] hi,
    uint64_t[:, ::1] cum,
    uint64_t[::1] scale,
    uint64_t[::1] limit,
    int64_t beta_lo,
    int64_t beta_size,
    int64_t max_steps,
):
    counts_arr = np.zeros(int(beta_size), dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    cdef int64_t kills = 0
    cdef int64_t capped = 0
    cdef int64_t beta_hi = beta_lo + beta_size - 1
    cdef int64_t dx[6]
    cdef int64_t dy[6]
    dx[0] = 1; dx[1] = -1; dx[2] = 0; dx[3] = 0; dx[4] = 1; dx[5] = -1
    dy[0] = 0; dy[1] = 0; dy[2] = 1; dy[3] = -1; dy[4] = 1; dy[5] = -1
    cdef uint64_t t, state, r, u, draw
    cdef int64_t x, y, steps
    cdef int k
    with nogil:
        for t in range(t0, t1):
            state = _mix(seed + t * GAMMA)
            x = start_x
            y = start_y
            draw = 0
            steps = 0
            while True:
                if steps >= max_steps:
                    kills += 1
                    capped += 1
                    break
                while True:
                    draw += 1
                    r = _mix(state + draw * GAMMA)
                    if r <= limit[x]:
                        break
                u = r % scale[x]
                k = 0
                while u >= cum[x, k]:
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
    return counts_arr, kills, int(capped)
