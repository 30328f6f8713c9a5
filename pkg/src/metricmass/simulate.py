"""Monte Carlo campaigns: replicate, estimate, compare against the bounds.

Each replicate draws a fresh sample, evaluates the configured estimators
and, when the distribution admits an exact oracle, the true conditional
missing mass.  Aggregation reports empirical means, variances, biases and
tail frequencies next to the corresponding closed-form ceilings.

Replicate i uses the generator seeded by (root_seed, i), so campaigns are
bit-reproducible regardless of worker count; rows are always emitted in
replicate order.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bounds import tail_bound_G, tail_bound_Mhat, variance_bound_G, variance_bound_Mhat
from .distributions import (
    draw_sample,
    has_scalar_cdf,
    is_finite_support,
    spec_from_dict,
    spec_to_dict,
)
from .estimators import all_martingale_estimates, good_turing, martingale_upper_bound
from .oracles import conditional_missing_mass, expected_missing_mass
from .separation import h_exact


@dataclass(frozen=True)
class SimulationConfig:
    spec: object
    n: int
    r: float
    delta: float = 0.1
    replicates: int = 100
    seed: int = 0
    workers: int = 1
    m_list: tuple[int, ...] = ()
    t_list: tuple[float, ...] = (1.0, 3.0)
    compute_h: bool = False
    h_cap: int = 8

    def __post_init__(self):
        if self.n < 1 or self.replicates < 1:
            raise ValueError("n and replicates must be positive")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if any(not 1 <= m <= self.n for m in self.m_list):
            raise ValueError("every m must lie in [1, n]")

    def to_dict(self) -> dict:
        # The worker count is execution machinery, not part of the
        # experiment; leaving it out keeps outputs byte-identical across
        # worker counts.
        return {
            "spec": spec_to_dict(self.spec),
            "n": self.n,
            "r": self.r,
            "delta": self.delta,
            "replicates": self.replicates,
            "seed": self.seed,
            "m_list": list(self.m_list),
            "t_list": list(self.t_list),
            "compute_h": self.compute_h,
            "h_cap": self.h_cap,
        }


def _has_exact_oracle(spec) -> bool:
    return is_finite_support(spec) or has_scalar_cdf(spec)


@lru_cache(maxsize=8)
def _spec_from_json(payload: str):
    return spec_from_dict(json.loads(payload))


def _run_range(payload: str, start: int, stop: int) -> list[list]:
    cfg = json.loads(payload)
    spec = _spec_from_json(json.dumps(cfg["spec"], sort_keys=True))
    n, r = cfg["n"], cfg["r"]
    rows = []
    for i in range(start, stop):
        sample = draw_sample(spec, n, [cfg["seed"], i])
        g = good_turing(sample, r)
        t_all = all_martingale_estimates(sample, r)
        bound = martingale_upper_bound(sample, r, cfg["delta"])
        row = [i, g, float(t_all[-1]), bound.value]
        if cfg["oracle"]:
            row.append(conditional_missing_mass(spec, sample, r).value)
        else:
            row.append(None)
        if cfg["compute_h"]:
            row.append(h_exact(sample, r, cap=cfg["h_cap"]).value)
        else:
            row.append(None)
        row.extend(float(t_all[m - 1]) for m in cfg["m_list"])
        rows.append(row)
    return rows


def campaign_header(config: SimulationConfig) -> list[str]:
    return (["replicate", "good_turing", "martingale_full", "martingale_min_bound",
             "mhat_oracle", "h"]
            + [f"martingale_m{m}" for m in config.m_list])


def run_campaign(config: SimulationConfig) -> dict:
    """Execute the campaign; returns config echo, per-replicate rows and
    aggregate comparisons against the closed-form bounds."""
    payload = dict(config.to_dict())
    payload["oracle"] = _has_exact_oracle(config.spec)
    payload_json = json.dumps(payload, sort_keys=True)

    reps = config.replicates
    if config.workers <= 1:
        rows = _run_range(payload_json, 0, reps)
    else:
        chunk = max(1, math.ceil(reps / (config.workers * 4)))
        spans = [(s, min(s + chunk, reps)) for s in range(0, reps, chunk)]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(_run_range, [payload_json] * len(spans),
                                  [s for s, _ in spans], [e for _, e in spans]))
        rows = [row for part in parts for row in part]

    return {
        "config": config.to_dict(),
        "rows": rows,
        "aggregate": _aggregate(config, rows),
    }


def _freq(mask: np.ndarray) -> dict:
    p = float(mask.mean())
    return {"frequency": p,
            "sigma": float(math.sqrt(max(p * (1 - p), 1e-12) / len(mask)))}


def _aggregate(config: SimulationConfig, rows: list[list]) -> dict:
    n, r = config.n, config.r
    reps = len(rows)
    g = np.array([row[1] for row in rows], dtype=float)
    t_full = np.array([row[2] for row in rows], dtype=float)
    min_bound = np.array([row[3] for row in rows], dtype=float)
    agg: dict = {
        "replicates": reps,
        "good_turing": {"mean": float(g.mean()), "variance": float(g.var(ddof=1)) if reps > 1 else 0.0},
        "martingale_full": {"mean": float(t_full.mean())},
        "martingale_min_bound": {"mean": float(min_bound.mean())},
    }

    e_h = 1.0
    if config.compute_h:
        h = np.array([row[5] for row in rows], dtype=float)
        agg["h"] = {"mean": float(h.mean()), "max": int(h.max())}
        e_h = max(1.0, float(h.mean()))
    agg["e_h_used"] = e_h

    agg["variance_bounds"] = {
        "good_turing": variance_bound_G(e_h, n).to_dict(),
        "mhat": variance_bound_Mhat(e_h, n).to_dict(),
    }

    tail_rows = []
    for t in config.t_list:
        rep_g = tail_bound_G(e_h, n, t)
        entry = {"t": t,
                 "good_turing": dict(threshold=rep_g.value, probability=rep_g.probability,
                                     **_freq(np.abs(g - g.mean()) > rep_g.value))}
        tail_rows.append(entry)
    agg["tail_G"] = tail_rows

    if _has_exact_oracle(config.spec):
        mhat = np.array([row[4] for row in rows], dtype=float)
        agg["mhat"] = {"mean": float(mhat.mean()),
                       "variance": float(mhat.var(ddof=1)) if reps > 1 else 0.0}
        expected = expected_missing_mass(config.spec, n, r)
        if expected.method == "analytic":
            bias = g - expected.value
            agg["good_turing_bias"] = {
                "expected_mass": expected.value,
                "mean": float(bias.mean()),
                "sigma": float(bias.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0,
                "upper_limit": 1.0 / n,
            }
        mhat_tails = []
        for t in config.t_list:
            rep_m = tail_bound_Mhat(e_h, n, t)
            mhat_tails.append({"t": t,
                               "threshold": rep_m.value,
                               "probability": rep_m.probability,
                               **_freq(np.abs(mhat - mhat.mean()) > rep_m.value)})
        agg["tail_Mhat"] = mhat_tails

        seq_rows = []
        for mi, m in enumerate(config.m_list):
            t_m = np.array([row[6 + mi] for row in rows], dtype=float)
            entry = {"m": m,
                     "bias_mean": float((t_m - mhat).mean()),
                     "bias_limit": math.log(n / (n - m)) if m < n else None,
                     "tails": []}
            for t in config.t_list:
                entry["tails"].append({
                    "t": t,
                    "absolute": dict(bound=math.exp(-m * t * t / 2.0),
                                     **_freq(mhat - t_m > t)),
                    "relative": dict(bound=math.exp(-m * t / (4.0 * (math.e - 2.0))),
                                     **_freq(mhat - 2.0 * t_m > t)),
                })
            seq_rows.append(entry)
        if seq_rows:
            agg["martingale"] = seq_rows
    return agg
