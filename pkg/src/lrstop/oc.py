"""Exact operating characteristics by dynamic programming over (step, successes).

The likelihood ratio of an i.i.d. Bernoulli path depends only on the number of
outcomes ``i`` and successes ``k``, so the forward recursion over the ``(i, k)``
grid is exact: states whose LR reaches the boundary are absorbed with their
probability mass, and whatever survives to the cap is terminal.  Sums are
taken with :func:`math.fsum`.  Passing ``exact=True`` runs the same recursion
in rational arithmetic (requires Fraction inputs and a horizon of at most
:data:`EXACT_MAX_HORIZON`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Union

import numpy as np
from scipy.stats import binom

from .designs import Design, FixedSample, TargetLR, overshoot_value
from .errors import UnreachableBoundary
from .model import BernoulliPair, Hypothesis, Number

EXACT_MAX_HORIZON = 64

Prob = Union[float, Fraction]


@dataclass(frozen=True)
class OperatingCharacteristics:
    """Rejection probabilities, sample sizes and overshoot law of one design.

    Overshoot distributions are conditional on a boundary hit and are empty
    for fixed designs or unreachable boundaries.
    """

    pr_reject_h0: Prob
    pr_reject_ha: Prob
    expected_n_h0: Prob
    expected_n_ha: Prob
    pr_hit_h0: Prob = 0.0
    pr_hit_ha: Prob = 0.0
    overshoot_dist_h0: Dict = field(default_factory=dict)
    overshoot_dist_ha: Dict = field(default_factory=dict)
    total_mass_h0: Prob = 1.0
    total_mass_ha: Prob = 1.0

    def pr_reject(self, hypothesis: Hypothesis) -> Prob:
        return self.pr_reject_h0 if hypothesis is Hypothesis.H0 else self.pr_reject_ha

    def pr_hit(self, hypothesis: Hypothesis) -> Prob:
        return self.pr_hit_h0 if hypothesis is Hypothesis.H0 else self.pr_hit_ha

    def expected_n(self, hypothesis: Hypothesis) -> Prob:
        return self.expected_n_h0 if hypothesis is Hypothesis.H0 else self.expected_n_ha

    def overshoot_dist(self, hypothesis: Hypothesis) -> Dict:
        if hypothesis is Hypothesis.H0:
            return self.overshoot_dist_h0
        return self.overshoot_dist_ha

    @property
    def alpha(self) -> Prob:
        return self.pr_reject_h0

    @property
    def power(self) -> Prob:
        return self.pr_reject_ha


def _check_exact(model: BernoulliPair, horizon: int):
    if not model.exact:
        raise ValueError("exact mode needs rational p0 and pa (use fractions.Fraction)")
    if horizon > EXACT_MAX_HORIZON:
        raise ValueError(f"exact mode supports horizons up to {EXACT_MAX_HORIZON}")


def _exact_sum(xs: Iterable[Fraction]) -> Fraction:
    return sum(xs, Fraction(0))


def oc_fixed(
    model: BernoulliPair, n: int, cutoff: Number, exact: bool = False
) -> OperatingCharacteristics:
    """OC of observing exactly ``n`` outcomes and rejecting when LR >= ``cutoff``."""
    FixedSample(n, cutoff)
    ks = np.arange(n + 1)
    reject = np.asarray(model.lr_at_least(n, ks, cutoff), dtype=bool)
    if exact:
        _check_exact(model, n)
        out = []
        for p in (Fraction(model.p0), Fraction(model.pa)):
            out.append(
                _exact_sum(
                    math.comb(n, int(k)) * p**int(k) * (1 - p) ** (n - int(k))
                    for k in ks[reject]
                )
            )
        return OperatingCharacteristics(out[0], out[1], Fraction(n), Fraction(n),
                                        Fraction(0), Fraction(0),
                                        total_mass_h0=Fraction(1), total_mass_ha=Fraction(1))
    out = []
    for p in (float(model.p0), float(model.pa)):
        pmf = binom.pmf(ks, n, p)
        out.append(math.fsum(pmf[reject]))
    return OperatingCharacteristics(out[0], out[1], float(n), float(n))


def _target_one_float(model: BernoulliPair, c, m: int, lr_t, p: float):
    q = 1.0 - p
    mass = np.array([1.0])
    reject_parts: List[float] = []
    hit_parts: List[float] = []
    n_parts: List[float] = []
    total_parts: List[float] = []
    dist: Dict[float, List[float]] = {}
    for i in range(1, m + 1):
        new = np.zeros(i + 1)
        new[1:] += mass * p
        new[:-1] += mass * q
        ks = np.arange(i + 1)
        hit = np.asarray(model.lr_at_least(i, ks, c), dtype=bool)
        if hit.any():
            rej = np.asarray(model.lr_at_least(i, ks, lr_t), dtype=bool)
            for k in ks[hit]:
                w = new[k]
                if w == 0.0:
                    continue
                hit_parts.append(w)
                n_parts.append(i * w)
                total_parts.append(w)
                if rej[k]:
                    reject_parts.append(w)
                key = overshoot_value(model, i, int(k), c)
                dist.setdefault(key, []).append(w)
            new[hit] = 0.0
        mass = new
    ks = np.arange(m + 1)
    rej = np.asarray(model.lr_at_least(m, ks, lr_t), dtype=bool)
    reject_parts.extend(mass[rej])
    total_parts.extend(mass)
    n_parts.append(m * math.fsum(mass))
    pr_hit = math.fsum(hit_parts)
    dist_out = {}
    if pr_hit > 0:
        dist_out = {key: math.fsum(ws) / pr_hit for key, ws in sorted(dist.items())}
    return (math.fsum(reject_parts), math.fsum(n_parts), pr_hit, dist_out,
            math.fsum(total_parts))


def _target_exact(model: BernoulliPair, c, m: int, lr_t):
    # Surviving path counts do not depend on the hypothesis; only absorbed and
    # terminal states are weighted by their rational path probability.
    counts = [1]
    stopped = []  # (i, k, paths, hit)
    for i in range(1, m + 1):
        new = [0] * (i + 1)
        for k, w in enumerate(counts):
            if w:
                new[k + 1] += w
                new[k] += w
        for k in range(i + 1):
            if new[k] and model.lr_at_least(i, k, c):
                stopped.append((i, k, new[k], True))
                new[k] = 0
        counts = new
    stopped.extend((m, k, w, False) for k, w in enumerate(counts) if w)
    zero = Fraction(0)
    out = []
    for p in (Fraction(model.p0), Fraction(model.pa)):
        q = 1 - p
        reject = pr_hit = n_sum = total = zero
        dist: Dict[Fraction, Fraction] = {}
        for i, k, paths, hit in stopped:
            w = paths * p**k * q ** (i - k)
            total += w
            n_sum += i * w
            if model.lr_at_least(i, k, lr_t):
                reject += w
            if hit:
                pr_hit += w
                key = _exact_overshoot(model, i, k, c)
                dist[key] = dist.get(key, zero) + w
        dist_out = {key: v / pr_hit for key, v in sorted(dist.items())} if pr_hit else {}
        out.append((reject, n_sum, pr_hit, dist_out, total))
    return out


def _exact_overshoot(model: BernoulliPair, i: int, k: int, c) -> Fraction:
    p0, pa = Fraction(model.p0), Fraction(model.pa)
    lr = (pa / p0) ** k * ((1 - pa) / (1 - p0)) ** (i - k)
    return max(lr - Fraction(c), Fraction(0))


def oc_target(
    model: BernoulliPair, c: Number, m: int, lr_t: Number = None, exact: bool = False
) -> OperatingCharacteristics:
    """OC of the target-LR design with boundary ``c``, cap ``m``, cutoff ``lr_t``."""
    design = TargetLR(c, m, lr_t)
    lr_t = design.lr_t
    if exact:
        _check_exact(model, m)
        runs = _target_exact(model, c, m, lr_t)
    else:
        runs = [_target_one_float(model, c, m, lr_t, float(p))
                for p in (model.p0, model.pa)]
    (r0, n0, h0, d0, t0), (ra, na, ha, da, ta) = runs
    return OperatingCharacteristics(
        pr_reject_h0=r0, pr_reject_ha=ra, expected_n_h0=n0, expected_n_ha=na,
        pr_hit_h0=h0, pr_hit_ha=ha, overshoot_dist_h0=d0, overshoot_dist_ha=da,
        total_mass_h0=t0, total_mass_ha=ta,
    )


def operating_characteristics(
    design: Design, model: BernoulliPair, exact: bool = False
) -> OperatingCharacteristics:
    if isinstance(design, FixedSample):
        return oc_fixed(model, design.n, design.lr_f, exact=exact)
    return oc_target(model, design.c, design.m, design.lr_t, exact=exact)


def mean_overshoot(dist: Dict) -> Prob:
    if not dist:
        raise UnreachableBoundary("boundary is never hit, overshoot undefined")
    if all(isinstance(v, Fraction) for v in dist.values()):
        return _exact_sum(Fraction(k) * v for k, v in dist.items())
    return math.fsum(k * v for k, v in dist.items())


def expected_overshoot(
    model: BernoulliPair,
    c: Number,
    m: int,
    hypothesis: Hypothesis = Hypothesis.H0,
    exact: bool = False,
) -> Prob:
    """Mean of ``LR - c`` at the crossing, conditional on the boundary being hit."""
    oc = oc_target(model, c, m, c, exact=exact)
    if not oc.pr_hit(hypothesis):
        raise UnreachableBoundary(f"boundary {c} cannot be hit within {m} steps")
    return mean_overshoot(oc.overshoot_dist(hypothesis))


def epsilon_of(model: BernoulliPair, c: Number, m: int, exact: bool = False) -> Prob:
    """Shortfall of the target design's null rejection rate below ``1/c``."""
    oc = oc_target(model, c, m, c, exact=exact)
    inv = 1 / Fraction(c) if exact else 1.0 / c
    return inv - oc.pr_reject_h0


def delta_of(model: BernoulliPair, c: Number, m: int, exact: bool = False) -> Prob:
    """Probability under the alternative that the target design fails to reject."""
    oc = oc_target(model, c, m, c, exact=exact)
    return 1 - oc.pr_reject_ha


def zero_overshoot_boundaries(
    model: BernoulliPair, candidates: Iterable[Number], m: int
) -> List[Number]:
    """Candidates whose expected overshoot is zero under both hypotheses."""
    out = []
    for c in candidates:
        oc = oc_target(model, c, m, c)
        if oc.pr_hit_h0 == 0 and oc.pr_hit_ha == 0:
            continue
        if all(mean_overshoot(oc.overshoot_dist(h)) == 0 for h in Hypothesis if oc.pr_hit(h)):
            out.append(c)
    return out
