"""Independent checks for the DP engine: path enumeration and seeded Monte Carlo.

Enumeration walks every outcome path depth-first, pruning at the first stop,
and multiplies per-step probabilities along each path.  Monte Carlo draws
replications in fixed blocks of :data:`BLOCK_SIZE`; block ``b`` always uses
the PCG64 stream seeded by ``SeedSequence(seed, spawn_key=(b,))``, so an
estimate does not depend on how blocks are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List

import numpy as np

from .designs import Design, FixedSample, overshoot_value, stops_after
from .errors import HorizonTooLarge
from .model import BernoulliPair, Hypothesis
from .oc import OperatingCharacteristics

MAX_ENUM_HORIZON = 20
BLOCK_SIZE = 1 << 16
#: Generator behind every Monte Carlo stream.  Changing it changes regressions.
BIT_GENERATOR = "PCG64"


def _decision_table(design: Design, model: BernoulliPair):
    # (stop, reject, hit, overshoot) per (i, k); the walk itself stays path-by-path
    target = not isinstance(design, FixedSample)
    table = {}
    for i in range(1, design.horizon + 1):
        for k in range(i + 1):
            stop = stops_after(design, model, i, k)
            if not stop:
                table[i, k] = (False, False, False, None)
                continue
            hit = target and bool(model.lr_at_least(i, k, design.c))
            table[i, k] = (
                True,
                bool(model.lr_at_least(i, k, design.cutoff)),
                hit,
                overshoot_value(model, i, k, design.c) if hit else None,
            )
    return table


def _enumerate_one(design: Design, model: BernoulliPair, p, exact: bool):
    one = Fraction(1) if exact else 1.0
    q = one - p
    table = _decision_table(design, model)
    reject: List = []
    hit: List = []
    n_parts: List = []
    total: List = []
    dist: Dict = {}
    stack = [(1, 1, p), (1, 0, q)]
    while stack:
        i, k, w = stack.pop()
        stop, rej, is_hit, key = table[i, k]
        if stop:
            total.append(w)
            n_parts.append(i * w)
            if rej:
                reject.append(w)
            if is_hit:
                hit.append(w)
                dist.setdefault(key, []).append(w)
            continue
        stack.append((i + 1, k + 1, w * p))
        stack.append((i + 1, k, w * q))
    add = (lambda xs: sum(xs, Fraction(0))) if exact else math.fsum
    pr_hit = add(hit)
    dist_out = {key: add(ws) / pr_hit for key, ws in sorted(dist.items())} if pr_hit else {}
    return add(reject), add(n_parts), pr_hit, dist_out, add(total)


def enumerate_oc(
    design: Design,
    model: BernoulliPair,
    hypothesis: Hypothesis = None,
    exact: bool = False,
) -> OperatingCharacteristics:
    """Exact OC by summing over every stopped path.

    Both hypotheses are always filled in; ``hypothesis`` is accepted for
    symmetry with :func:`mc_oc` and does not change the result.
    """
    if design.horizon > MAX_ENUM_HORIZON:
        raise HorizonTooLarge(
            f"enumeration supports horizons up to {MAX_ENUM_HORIZON}, got {design.horizon}"
        )
    conv = Fraction if exact else float
    runs = [_enumerate_one(design, model, conv(p), exact) for p in (model.p0, model.pa)]
    (r0, n0, h0, d0, t0), (ra, na, ha, da, ta) = runs
    return OperatingCharacteristics(
        pr_reject_h0=r0, pr_reject_ha=ra, expected_n_h0=n0, expected_n_ha=na,
        pr_hit_h0=h0, pr_hit_ha=ha, overshoot_dist_h0=d0, overshoot_dist_ha=da,
        total_mass_h0=t0, total_mass_ha=ta,
    )


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    reps: int
    seed: int


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _block_rejections(args) -> int:
    design, model, p, seed, block, size = args
    rng = block_rng(seed, block)
    h = design.horizon
    x = rng.random((size, h)) < p
    k = np.cumsum(x, axis=1)
    if isinstance(design, FixedSample):
        return int(np.count_nonzero(model.lr_at_least(h, k[:, -1], design.lr_f)))
    steps = np.arange(1, h + 1)
    hits = np.asarray(model.lr_at_least(steps[None, :], k, design.c), dtype=bool)
    hits[:, -1] = True
    stop = hits.argmax(axis=1)
    k_stop = k[np.arange(size), stop]
    return int(np.count_nonzero(model.lr_at_least(stop + 1, k_stop, design.lr_t)))


def mc_oc(
    design: Design,
    model: BernoulliPair,
    hypothesis: Hypothesis,
    reps: int,
    seed: int,
    max_workers: int = 1,
) -> McEstimate:
    """Monte Carlo estimate of the rejection probability under ``hypothesis``."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    p = float(model.prob(hypothesis))
    jobs = []
    for b, start in enumerate(range(0, reps, BLOCK_SIZE)):
        jobs.append((design, model, p, seed, b, min(BLOCK_SIZE, reps - start)))
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            counts = list(pool.map(_block_rejections, jobs))
    else:
        counts = [_block_rejections(j) for j in jobs]
    mean = sum(counts) / reps
    return McEstimate(mean, math.sqrt(mean * (1 - mean) / reps), reps, seed)
