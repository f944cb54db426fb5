"""Monte Carlo simulation of killed walks with a reproducible counter RNG.

The backend is the compiled kernel when the extension built, otherwise the
pure-Python twin; both consume the same threshold tables and counter streams,
so results are bit-identical across backends and across any thread count
(each trajectory owns its own stream).  Set EXITWALK_MC_BACKEND=python to
force the fallback.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import DimensionMismatch
from .lattice import LatticePoint, Region, contains
from .walker import ExitDistribution, TransitionModel, _check_square_family

if os.environ.get("EXITWALK_MC_BACKEND", "").lower() == "python":
    from . import _mckernel_py as _kernel

    BACKEND = "python"
else:
    try:
        from . import _mckernel as _kernel  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _mckernel_py as _kernel

        BACKEND = "python"


@dataclass
class SimulationResult:
    counts: dict[int, int]
    kills: int
    capped: int
    trajectories: int
    seed: int
    max_steps: int
    backend: str

    def to_json(self) -> dict:
        return {
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "kills": self.kills,
            "capped": self.capped,
            "trajectories": self.trajectories,
            "seed": self.seed,
            "max_steps": self.max_steps,
            "backend": self.backend,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SimulationResult":
        return cls(
            counts={int(k): int(v) for k, v in data["counts"].items()},
            kills=int(data["kills"]),
            capped=int(data["capped"]),
            trajectories=int(data["trajectories"]),
            seed=int(data["seed"]),
            max_steps=int(data["max_steps"]),
            backend=str(data.get("backend", "")),
        )


def _threshold_tables(region: Region, model: TransitionModel):
    """Integer cutoff tables: per column, cumulative numerators over a common scale."""
    m = region.m
    lo = np.empty(m, dtype=np.int64)
    hi = np.empty(m, dtype=np.int64)
    cum = np.empty((m, 6), dtype=np.uint64)
    scale = np.empty(m, dtype=np.uint64)
    limit = np.empty(m, dtype=np.uint64)
    word = 1 << 64
    for x in range(m):
        lo[x], hi[x] = region.columns[x]
        probs = model.column_probs(x)
        denom = math.lcm(*(p.denominator for p in probs))
        if denom >= 1 << 62:
            raise ValueError(f"column {x} probabilities need scale {denom}, too fine")
        acc = 0
        for k, p in enumerate(probs):
            acc += int(p * denom)
            cum[x, k] = acc
        assert acc == denom
        scale[x] = denom
        limit[x] = (word // denom) * denom - 1
    return lo, hi, cum, scale, limit


def simulate(
    region: Region,
    model: TransitionModel,
    start: LatticePoint,
    trajectories: int,
    seed: int,
    max_steps: int = 1_000_000,
    threads: int | None = None,
) -> SimulationResult:
    """Run independent killed-walk trajectories and tally exit heights.

    Walks that exceed max_steps are counted as killed and reported in capped.
    The seed fully determines the result: trajectory t uses counter stream t
    regardless of chunking, so any thread count gives identical output.
    """
    start = LatticePoint(*start)
    m = region.m
    _check_square_family(region, model)
    if model.width != m:
        raise DimensionMismatch("model width must equal region width")
    if m < 1:
        raise ValueError("simulation needs at least one interior column")
    if start.x != 0 or not contains(region, start):
        raise ValueError(f"start {start} must lie on the left segment")
    if trajectories < 0:
        raise ValueError("trajectory count must be nonnegative")
    if threads is None:
        threads = int(os.environ.get("EXITWALK_THREADS", "1"))
    threads = max(1, min(threads, max(1, trajectories)))

    lo, hi, cum, scale, limit = _threshold_tables(region, model)
    beta_lo, beta_hi = region.columns[m]
    beta_size = beta_hi - beta_lo + 1

    def run(t0: int, t1: int):
        return _kernel.run_chunk(
            t0, t1, seed & ((1 << 64) - 1), start.x, start.y, m,
            lo, hi, cum, scale, limit, beta_lo, beta_size, max_steps,
        )

    bounds = [
        (trajectories * i // threads, trajectories * (i + 1) // threads)
        for i in range(threads)
    ]
    bounds = [(t0, t1) for t0, t1 in bounds if t1 > t0]
    if len(bounds) <= 1:
        results = [run(*b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
            results = list(pool.map(lambda b: run(*b), bounds))

    total = np.zeros(beta_size, dtype=np.int64)
    kills = 0
    capped = 0
    for counts, k, cap in results:
        total += counts
        kills += k
        capped += cap
    counts_dict = {beta_lo + i: int(v) for i, v in enumerate(total)}
    return SimulationResult(
        counts=counts_dict,
        kills=kills,
        capped=capped,
        trajectories=trajectories,
        seed=seed,
        max_steps=max_steps,
        backend=BACKEND,
    )


def compare_empirical(exact: ExitDistribution, sim: SimulationResult) -> dict:
    """Per-height z-scores and a chi-square of simulated counts against the exact law."""
    n = sim.trajectories
    if n <= 0:
        raise ValueError("empty simulation")
    z_scores: dict[int, float] = {}
    support_mismatch: list[int] = []
    heights = sorted(set(exact.probabilities) | set(sim.counts))
    chi = 0.0
    dof = -1  # one constraint: totals match
    for k in heights:
        p = float(exact.probabilities.get(k, 0))
        obs = sim.counts.get(k, 0)
        phat = obs / n
        if 0.0 < p < 1.0:
            z_scores[k] = (phat - p) / math.sqrt(p * (1.0 - p) / n)
        else:
            z_scores[k] = 0.0 if phat == p else math.inf
        if obs and p == 0.0:
            support_mismatch.append(k)
        expected = n * p
        if expected > 0:
            chi += (obs - expected) ** 2 / expected
            dof += 1
    kill_p = float(exact.kill_mass)
    kill_obs = sim.kills
    if 0.0 < kill_p < 1.0:
        kill_z = (kill_obs / n - kill_p) / math.sqrt(kill_p * (1.0 - kill_p) / n)
    else:
        kill_z = 0.0 if kill_obs / n == kill_p else math.inf
    if kill_obs and kill_p == 0.0:
        support_mismatch.append("kill")  # type: ignore[arg-type]
    expected = n * kill_p
    if expected > 0:
        chi += (kill_obs - expected) ** 2 / expected
        dof += 1
    flagged = sorted(k for k, z in z_scores.items() if abs(z) > 4.0)
    if abs(kill_z) > 4.0:
        flagged.append("kill")  # type: ignore[arg-type]
    return {
        "trajectories": n,
        "z_scores": z_scores,
        "kill_z": kill_z,
        "chi_square": chi,
        "dof": max(dof, 0),
        "flagged": flagged,
        "support_mismatch": support_mismatch,
    }
