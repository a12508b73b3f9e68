"""Built-in verification suite: the acceptance checks behind ``lrstop verify``.

Every check returns a :class:`CheckResult` carrying what was observed and what
was expected, so failures can be read without rerunning anything.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from .designs import FixedSample, TargetLR, run_trajectory
from .errors import DegenerateScenario
from .model import (
    BernoulliPair,
    Beliefs,
    Hypothesis,
    UtilityTable,
    lr_of_sequence,
    lr_step_ratio,
    posterior_odds,
)
from .oc import epsilon_of, mean_overshoot, oc_fixed, oc_target
from .oracle import enumerate_oc, mc_oc
from .policy import (
    PolicyProblem,
    compute_deltas,
    expected_utility,
    penalty_decision,
    problem_for_cutoff,
)

LATTICE_MODEL = BernoulliPair(Fraction(3, 7), Fraction(6, 7))
GRID_PROBS = [Fraction(k, 10) for k in range(2, 9)]
GRID_C = [2, 4, 8, 16]
GRID_M = [10, 50, 200]
BOUNDARY_TOL = 1e-10

FAULTS = ("wrong-sign-delta-a",)


@dataclass
class CheckResult:
    name: str
    passed: bool
    observed: str
    expected: str
    seconds: float = 0.0
    budget: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        timing = f" [{self.seconds:.3f}s"
        timing += f" / budget {self.budget:g}s]" if self.budget else "]"
        return f"[{tag}] {self.name}: observed {self.observed}; expected {self.expected}{timing}"


def grid_models():
    for p0, pa in itertools.product(GRID_PROBS, GRID_PROBS):
        if p0 != pa:
            yield BernoulliPair(p0, pa)


def _timed(name: str, budget: Optional[float], fn: Callable[[], tuple]) -> CheckResult:
    t0 = time.perf_counter()
    passed, observed, expected, notes = fn()
    dt = time.perf_counter() - t0
    if budget is not None and dt > budget:
        passed = False
        notes = list(notes) + [f"runtime {dt:.3f}s exceeds budget {budget:g}s"]
    return CheckResult(name, passed, observed, expected, dt, budget, list(notes))


# -- individual checks -------------------------------------------------------


def check_step_ratios() -> CheckResult:
    def run():
        up = lr_step_ratio(1, LATTICE_MODEL)
        down = lr_step_ratio(0, LATTICE_MODEL)
        ok = up == 2 and down == Fraction(1, 4)
        return ok, f"success {up}, failure {down}", "success 2, failure 1/4", []

    return _timed("1 per-step likelihood ratios (3/7 vs 6/7)", 1e-3, run)


def check_overshoot_claims() -> CheckResult:
    def run():
        seen = {}
        ok = True
        for c in (6, 2, 4, 8, 16):
            oc = oc_target(LATTICE_MODEL, c, 50, c, exact=True)
            vals = {h.value: mean_overshoot(oc.overshoot_dist(h)) for h in Hypothesis}
            seen[c] = vals
            want = 2 if c == 6 else 0
            ok &= all(v == want for v in vals.values())
        obs = ", ".join(f"c={c}: {sorted(set(map(str, v.values())))}" for c, v in seen.items())
        return ok, obs, "c=6: 2; c in {2,4,8,16}: 0 (exact)", []

    return _timed("2 expected overshoot, m=50 (exact engine)", 0.1, run)


def check_universal_bound() -> CheckResult:
    def run():
        worst = -math.inf
        where = None
        for model in grid_models():
            for c in GRID_C:
                for m in GRID_M:
                    r0 = oc_target(model, c, m, c).pr_reject_h0
                    excess = r0 - 1.0 / c
                    if excess > worst:
                        worst, where = excess, (model.p0, model.pa, c, m)
        ok = worst <= 1e-12
        obs = f"max(Pr_t(R|H0) - 1/c) = {worst:.3e} at p0={where[0]}, pa={where[1]}, c={where[2]}, m={where[3]}"
        return ok, obs, "<= 1e-12", []

    return _timed("3 universal bound Pr_t(R|H0) <= 1/c", 30.0, run)


def _policy_grid():
    """(model, pw, n, m, problem) over the acceptance grid, realizing PW two ways."""
    alt_util = {pw: UtilityTable(0, pw, 1, 0) for pw in GRID_C}
    for model in grid_models():
        for m in GRID_M:
            n = m // 2
            for pw in GRID_C:
                yield problem_for_cutoff(model, pw, n, m)
                beliefs = Beliefs(Fraction(1, 2), Fraction(1, 2))
                yield PolicyProblem(model, beliefs, alt_util[pw], n, m)


def check_delta_identity() -> CheckResult:
    def run():
        worst = 0.0
        skipped = 0
        for model in grid_models():
            for m in GRID_M:
                for c in GRID_C:
                    try:
                        d = compute_deltas(problem_for_cutoff(model, c, m // 2, m))
                    except DegenerateScenario:
                        skipped += 1
                        continue
                    worst = max(worst, abs(d.delta_a - (d.beta - d.delta)))
        notes = [f"{skipped} grid points with PW unreachable within m skipped"]
        return worst <= 1e-12, f"max |delta_a - (beta - delta)| = {worst:.3e}", "<= 1e-12", notes

    return _timed("4 identity delta_a = beta - delta", 30.0, run)


def theorem_predicates(problem, fault: Optional[str] = None) -> Dict[str, object]:
    """The four penalty predicates computed along separate routes, plus margins."""
    model = problem.model
    pw = problem.pw
    beliefs, utilities = problem.beliefs, problem.utilities
    # route 1: expected utility of each design from fresh OC evaluations
    eu_f = expected_utility(oc_fixed(model, problem.n, pw), beliefs, utilities)
    eu_t = expected_utility(oc_target(model, pw, problem.m, pw), beliefs, utilities)
    # route 2: rejection-probability differences
    d = compute_deltas(problem)
    delta_a = -d.delta_a if fault == "wrong-sign-delta-a" else d.delta_a
    margin = d.delta0 * pw - delta_a
    # route 3: the policy engine's decision
    decision = penalty_decision(problem)
    # route 4: the threshold form
    lhs = pw * (d.alpha + d.epsilon)
    rhs = 1 - d.beta + d.delta
    return {
        "eu": bool(eu_f > eu_t),
        "margin": bool(margin > 0),
        "decision": decision.penalty_required,
        "threshold": bool(pw < d.threshold),
        "near_boundary": min(abs(eu_f - eu_t), abs(margin), abs(rhs - lhs)) <= BOUNDARY_TOL,
        "deltas": d,
    }


def check_theorem_equivalence(fault: Optional[str] = None) -> CheckResult:
    def run():
        total = agree = near = unreachable = required = 0
        bad = []
        for problem in _policy_grid():
            try:
                pred = theorem_predicates(problem, fault)
            except DegenerateScenario:
                unreachable += 1
                continue
            total += 1
            if pred["near_boundary"]:
                near += 1
                continue
            vals = [pred[k] for k in ("eu", "margin", "decision", "threshold")]
            if len(set(vals)) == 1:
                agree += 1
                required += vals[0]
            else:
                bad.append((float(problem.model.p0), float(problem.model.pa), problem.n, problem.m, float(problem.pw), vals))
        notes = [
            f"{unreachable} points excluded: PW unreachable within m",
            f"{near} points excluded: within {BOUNDARY_TOL:g} of a predicate boundary",
            f"penalty required at {required} of {agree} agreeing points",
        ]
        if bad:
            notes.append(f"first disagreements (p0, pa, n, m, PW, [eu, margin, decision, threshold]): {bad[:3]}")
        obs = f"{agree} of {total - near} decided points agree, {len(bad)} disagree"
        return not bad and agree > 0, obs, "all four predicates identical", notes

    name = "5 theorem four-way equivalence"
    if fault:
        name += f" (fault injected: {fault})"
    return _timed(name, 120.0, run)


def check_pw_bound() -> CheckResult:
    def run():
        worst = -math.inf
        checked = 0
        for model in grid_models():
            for m in GRID_M:
                for pw in GRID_C:
                    oc = oc_fixed(model, m // 2, pw)
                    alpha, power = oc.pr_reject_h0, oc.pr_reject_ha
                    if alpha <= 0:
                        continue
                    checked += 1
                    worst = max(worst, pw / (power / alpha) - 1)
        ok = worst <= 1e-10
        return ok, f"max PW/((1-beta)/alpha) - 1 = {worst:.3e} over {checked} points with alpha > 0", "<= 1e-10", []

    return _timed("6 PW <= (1-beta)/alpha", None, run)


def _all_sequences(n: int):
    return itertools.product((0, 1), repeat=n)


def check_pathwise_dominance() -> CheckResult:
    models = [LATTICE_MODEL, BernoulliPair(Fraction(1, 5), Fraction(1, 2)), BernoulliPair(0.6, 0.3)]
    pairs = [(2, 2), (2, 4), (4, 8), (3, 3.5)]

    def run():
        bad = 0
        paths = 0
        for model, (t, f) in itertools.product(models, pairs):
            for n in range(1, 13):
                fixed = FixedSample(n, f)
                target = TargetLR(t, n, t)
                for seq in _all_sequences(n):
                    paths += 1
                    if run_trajectory(seq, fixed, model).rejected and not run_trajectory(seq, target, model).rejected:
                        bad += 1
        return bad == 0, f"{bad} counterexamples over {paths} paths", "0 counterexamples", []

    return _timed("7 pathwise dominance (n = m <= 12)", 10.0, run)


def check_posterior_invariance(count: int = 1000, seed: int = 20240611) -> CheckResult:
    models = [LATTICE_MODEL, BernoulliPair(Fraction(1, 5), Fraction(3, 5)), BernoulliPair(0.35, 0.62),
              BernoulliPair(0.7, 0.4)]

    def run():
        rng = np.random.default_rng(seed)
        mismatches = 0
        for _ in range(count):
            model = models[rng.integers(len(models))]
            c = float(rng.choice([2, 3, 4, 6, 8, 10]))
            m = int(rng.integers(1, 40))
            target = TargetLR(c, m, c)
            truth = Hypothesis.H0 if rng.random() < 0.5 else Hypothesis.HA
            seq = tuple(int(x) for x in rng.random(m) < float(model.prob(truth)))
            stop = run_trajectory(seq, target, model).stop_index
            seq = seq[:stop]
            fixed = FixedSample(stop, c)
            prior = Beliefs.from_null(float(rng.uniform(0.05, 0.95)))
            via_fixed = posterior_odds(prior, run_trajectory(seq, fixed, model).final_log_lr)
            via_target = posterior_odds(prior, run_trajectory(seq, target, model).final_log_lr)
            direct = posterior_odds(prior, lr_of_sequence(seq, model))
            if not (via_fixed == via_target == direct):
                mismatches += 1
        return mismatches == 0, f"{mismatches} mismatches over {count} sequences", "0 mismatches (bitwise)", []

    return _timed("8 posterior invariance across designs", None, run)


def regression_scenarios():
    """Twenty (design, model) pairs with horizon <= 16 and non-degenerate rejection rates."""
    m1 = LATTICE_MODEL
    m2 = BernoulliPair(Fraction(1, 5), Fraction(1, 2))
    m3 = BernoulliPair(0.6, 0.3)
    m4 = BernoulliPair(0.45, 0.7)
    return [
        (TargetLR(2, 2), m1),
        (TargetLR(6, 16), m1),
        (TargetLR(8, 12), m1),
        (TargetLR(4, 16, 8), m1),
        (FixedSample(5, 2), m1),
        (FixedSample(16, 8), m1),
        (TargetLR(3, 10), m2),
        (TargetLR(10, 16), m2),
        (FixedSample(12, 3), m2),
        (FixedSample(16, 10), m2),
        (TargetLR(4, 8), m3),
        (TargetLR(16, 16), m3),
        (FixedSample(10, 4), m3),
        (FixedSample(15, 2), m3),
        (TargetLR(2, 6), m4),
        (TargetLR(5, 14, 3), m4),
        (FixedSample(8, 2), m4),
        (FixedSample(14, 5), m4),
        (TargetLR(3.5, 9), m1),
        (TargetLR(7, 13), m4),
    ]


def check_dp_vs_enumeration() -> CheckResult:
    def run():
        worst = 0.0
        cases = 0
        scenarios = list(regression_scenarios())
        for model in (LATTICE_MODEL, BernoulliPair(0.3, 0.55), BernoulliPair(Fraction(4, 5), Fraction(1, 2))):
            for h in (1, 4, 9, 16):
                for c in (2, 5, 8):
                    scenarios.append((TargetLR(c, h), model))
                    scenarios.append((FixedSample(h, c), model))
        for design, model in scenarios:
            dp = oc_target(model, design.c, design.m, design.lr_t) if isinstance(design, TargetLR) \
                else oc_fixed(model, design.n, design.lr_f)
            en = enumerate_oc(design, model)
            for attr in ("pr_reject_h0", "pr_reject_ha", "pr_hit_h0", "pr_hit_ha", "expected_n_h0", "expected_n_ha"):
                worst = max(worst, abs(getattr(dp, attr) - getattr(en, attr)))
            cases += 1
        return worst <= 1e-10, f"max |DP - enumeration| = {worst:.3e} over {cases} scenarios", "<= 1e-10", []

    return _timed("9a DP vs exhaustive enumeration (horizon <= 16)", None, run)


def check_dp_vs_mc(reps: int = 10**6, seed: int = 12345) -> CheckResult:
    def run():
        worst = 0.0
        fails = []
        for idx, (design, model) in enumerate(regression_scenarios()):
            dp = oc_target(model, design.c, design.m, design.lr_t) if isinstance(design, TargetLR) \
                else oc_fixed(model, design.n, design.lr_f)
            for h in Hypothesis:
                est = mc_oc(design, model, h, reps, seed + idx)
                z = abs(est.mean - float(dp.pr_reject(h)))
                z = z / est.stderr if est.stderr > 0 else (0.0 if z == 0 else math.inf)
                worst = max(worst, z)
                if z > 5:
                    fails.append((idx, h.value, est.mean, float(dp.pr_reject(h))))
        notes = [f"failures (scenario, hypothesis, mc, dp): {fails}"] if fails else []
        return not fails, f"max |MC - DP| / stderr = {worst:.2f} at reps={reps}", "<= 5 standard errors", notes

    return _timed("9b Monte Carlo vs DP (20 scenarios)", 60.0, run)


def check_epsilon_trend() -> CheckResult:
    def run():
        ms = list(range(10, 201, 10))
        eps = [epsilon_of(LATTICE_MODEL, 8, m) for m in ms]
        monotone = all(b <= a for a, b in zip(eps, eps[1:]))
        ok = monotone and eps[-1] < eps[0]
        obs = f"eps(10)={eps[0]:.3e}, eps(200)={eps[-1]:.3e}, non-increasing={monotone}"
        return ok, obs, "non-increasing with eps(200) < eps(10)", []

    return _timed("10 epsilon trend in m (c=8, 3/7 vs 6/7)", None, run)


def run_suite(reps: int = 10**6, seed: int = 12345, fault: Optional[str] = None) -> List[CheckResult]:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    return [
        check_step_ratios(),
        check_overshoot_claims(),
        check_universal_bound(),
        check_delta_identity(),
        check_theorem_equivalence(fault),
        check_pw_bound(),
        check_pathwise_dominance(),
        check_posterior_invariance(),
        check_dp_vs_enumeration(),
        check_dp_vs_mc(reps, seed),
        check_epsilon_trend(),
    ]
