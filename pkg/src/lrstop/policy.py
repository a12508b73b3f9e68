"""The regulator's announced-policy problem.

A regulator announces rejection cutoffs ``lr_f`` (fixed-sample design of size
``n``) and ``lr_t`` (target-LR design capped at ``m``).  The scientist then
runs whichever design maximizes her probability of approval.  Expected
utility is maximized by the cutoff ``P * W`` under either design, and the
target design has to be penalized exactly when
``delta0 * P * W > delta_a``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from .designs import Design, FixedSample, TargetLR
from .errors import BoundaryUnreachable, DegenerateScenario
from .model import BernoulliPair, Beliefs, Number, UtilityTable
from .oc import OperatingCharacteristics, Prob, oc_fixed, oc_target

FIXED = "FixedSample"
TARGET = "TargetLR"


@dataclass(frozen=True)
class PolicyProblem:
    model: BernoulliPair
    beliefs: Beliefs
    utilities: UtilityTable
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        if self.m < self.n:
            raise ValueError(f"target cap m={self.m} must be at least n={self.n}")

    @property
    def pw(self) -> Number:
        return optimal_cutoff(self.beliefs, self.utilities)


@dataclass(frozen=True)
class Deltas:
    """Rejection-probability differences between the two designs at cutoff PW."""

    pw: Number
    delta0: Prob
    delta_a: Prob
    epsilon: Prob
    delta: Prob
    alpha: Prob
    beta: Prob
    oc_fixed: OperatingCharacteristics
    oc_target: OperatingCharacteristics

    @property
    def penalty_margin(self) -> Prob:
        """``delta0 * PW - delta_a``; positive means the penalty is required."""
        return self.delta0 * self.pw - self.delta_a

    @property
    def threshold(self) -> float:
        """``(1 - beta + delta) / (alpha + epsilon)``, +inf on a zero denominator."""
        num = 1 - self.beta + self.delta
        den = self.alpha + self.epsilon
        if den <= 0:
            return math.inf if num > 0 else math.nan
        return num / den


@dataclass(frozen=True)
class PolicyDecision:
    pw: Number
    delta0: Prob
    delta_a: Prob
    epsilon: Prob
    delta: Prob
    penalty_required: bool
    recommended_lr_f: Number
    recommended_lr_t: Number
    predicted_choice: str
    eu_fixed: Prob
    eu_target: Prob
    approval_probability: Prob
    lr_f_equivalent_interval: Tuple[float, float]


def optimal_cutoff(beliefs: Beliefs, utilities: UtilityTable) -> Number:
    """Rejection cutoff ``P * W`` that maximizes expected utility for any design."""
    return beliefs.prior_odds_null * utilities.gap_ratio


def expected_utility(
    oc: OperatingCharacteristics, beliefs: Beliefs, utilities: UtilityTable
) -> Prob:
    r0, ra = oc.pr_reject_h0, oc.pr_reject_ha
    return (
        r0 * beliefs.pr_h0 * utilities.u_type_i
        + (1 - r0) * beliefs.pr_h0 * utilities.u_correct_non_rej
        + ra * beliefs.pr_ha * utilities.u_correct_rej
        + (1 - ra) * beliefs.pr_ha * utilities.u_type_ii
    )


def _inverse(x: Number, exact: bool) -> Prob:
    return 1 / Fraction(x) if exact else 1.0 / x


def compute_deltas(problem: PolicyProblem, exact: bool = False) -> Deltas:
    """Compare the fixed design at cutoff PW with the target design at ``c = PW``.

    Raises BoundaryUnreachable if PW cannot be attained within ``m`` steps.
    """
    pw = problem.pw
    model = problem.model
    if not pw > 1:
        raise DegenerateScenario(f"optimal cutoff {pw} does not exceed 1; no target design")
    if not model.reachable(pw, problem.m):
        raise BoundaryUnreachable(
            f"likelihood ratio {float(pw):g} cannot be reached within m={problem.m} steps"
        )
    f = oc_fixed(model, problem.n, pw, exact=exact)
    t = oc_target(model, pw, problem.m, pw, exact=exact)
    return Deltas(
        pw=pw,
        delta0=t.pr_reject_h0 - f.pr_reject_h0,
        delta_a=t.pr_reject_ha - f.pr_reject_ha,
        epsilon=_inverse(pw, exact) - t.pr_reject_h0,
        delta=1 - t.pr_reject_ha,
        alpha=f.pr_reject_h0,
        beta=1 - f.pr_reject_ha,
        oc_fixed=f,
        oc_target=t,
    )


def approval_probability(oc: OperatingCharacteristics, q: Number) -> Prob:
    """Scientist's probability of approval when she believes Ha with probability q."""
    return q * oc.pr_reject_ha + (1 - q) * oc.pr_reject_h0


def scientist_best_response(
    lr_f: Number,
    lr_t: Number,
    problem: PolicyProblem,
    q: Number = 0.5,
    exact: bool = False,
) -> Tuple[Design, Prob]:
    """Design the scientist runs given the announced cutoffs, and its approval probability.

    The target design is run with ``c = lr_t``.  When ``lr_t <= lr_f`` it
    dominates the fixed design path by path and is always chosen; otherwise
    exact ties go to the fixed design.
    """
    if not 0 <= q <= 1:
        raise ValueError("scientist belief q must lie in [0, 1]")
    if lr_f < 1:
        raise ValueError("lr_f must be >= 1 or +inf")
    if not lr_t > 1:
        raise ValueError("lr_t doubles as the target boundary and must exceed 1")
    model = problem.model
    fixed = FixedSample(problem.n, lr_f)
    p_fixed = approval_probability(oc_fixed(model, problem.n, lr_f, exact=exact), q)
    target = TargetLR(lr_t, problem.m, lr_t)
    if math.isinf(lr_t):
        p_target = Fraction(0) if exact else 0.0
    else:
        p_target = approval_probability(
            oc_target(model, target.c, problem.m, lr_t, exact=exact), q
        )
    if lr_t <= lr_f or p_target > p_fixed:
        return target, p_target
    return fixed, p_fixed


def equivalent_cutoff_interval(model: BernoulliPair, n: int, pw: Number) -> Tuple[float, float]:
    """Half-open interval ``(lo, hi]`` of fixed-design cutoffs with the same rejection region as PW.

    ``lo`` is the largest attainable LR below PW (0 if none), ``hi`` the
    smallest attainable LR at or above PW (+inf if none).
    """
    ks = np.arange(n + 1)
    inside = np.asarray(model.lr_at_least(n, ks, pw), dtype=bool)
    lrs = np.array([float(model.lr_value(n, int(k))) for k in ks])
    lo = float(lrs[~inside].max()) if (~inside).any() else 0.0
    hi = float(lrs[inside].min()) if inside.any() else math.inf
    return lo, hi


def penalty_decision(
    problem: PolicyProblem, q: Number = 0.5, exact: bool = False
) -> PolicyDecision:
    d = compute_deltas(problem, exact=exact)
    required = bool(d.delta0 * d.pw > d.delta_a)
    if required:
        lr_f, lr_t = d.pw, math.inf
    else:
        lr_f, lr_t = d.pw, d.pw
    design, p_approve = scientist_best_response(lr_f, lr_t, problem, q, exact=exact)
    return PolicyDecision(
        pw=d.pw,
        delta0=d.delta0,
        delta_a=d.delta_a,
        epsilon=d.epsilon,
        delta=d.delta,
        penalty_required=required,
        recommended_lr_f=lr_f,
        recommended_lr_t=lr_t,
        predicted_choice=FIXED if isinstance(design, FixedSample) else TARGET,
        eu_fixed=expected_utility(d.oc_fixed, problem.beliefs, problem.utilities),
        eu_target=expected_utility(d.oc_target, problem.beliefs, problem.utilities),
        approval_probability=p_approve,
        lr_f_equivalent_interval=equivalent_cutoff_interval(problem.model, problem.n, d.pw),
    )


def problem_for_cutoff(
    model: BernoulliPair,
    pw: Number,
    n: int,
    m: int,
    utilities: Optional[UtilityTable] = None,
) -> PolicyProblem:
    """Problem whose prior is chosen so that ``P * W`` equals ``pw``."""
    if utilities is None:
        utilities = UtilityTable(0, 1, 1, 0)
    p = Fraction(pw) / Fraction(utilities.gap_ratio) if not isinstance(pw, float) else (
        pw / utilities.gap_ratio
    )
    return PolicyProblem(model, Beliefs.from_null(p / (1 + p)), utilities, n, m)


def evaluate_grid(
    fn: Callable, items: Iterable, max_workers: int = 1
) -> List:
    """Map ``fn`` over ``items`` preserving input order, optionally in processes."""
    items = list(items)
    if max_workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(fn, items))
