"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 degenerate scenario (for example a cutoff that cannot be reached).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from . import config as cfgmod
from .config import ConfigError, ScenarioConfig
from .designs import FixedSample, TargetLR
from .errors import DegenerateScenario
from .model import Hypothesis
from .oc import EXACT_MAX_HORIZON, OperatingCharacteristics, mean_overshoot, oc_fixed, oc_target
from .oracle import mc_oc
from .policy import evaluate_grid, expected_utility, penalty_decision
from .verification import FAULTS, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_DEGENERATE = 0, 1, 2, 3

OC_COLUMNS = [
    "design", "n", "m", "c", "cutoff", "prReject0", "prRejectA", "prHit0", "prHitA",
    "delta", "epsilon", "expN0", "expNA", "expOvershoot0", "expOvershootA",
]

SWEEP_COLUMNS = [
    "p0", "pa", "prH0", "uTypeI", "uCorrectNonRej", "uCorrectRej", "uTypeII", "n", "m",
    "pw", "alpha", "power", "prHit0", "prHitA", "delta0", "deltaA", "epsilon", "delta",
    "expOvershoot0", "expOvershootA", "expN0", "expNA", "euFixed", "euTarget",
    "penaltyRequired", "predictedChoice",
]

SIMULATE_COLUMNS = ["design", "hypothesis", "reps", "seed", "mean", "stderr", "exact", "zscore"]


def fmt(value) -> str:
    """CSV formatting: 12 significant digits, ``inf`` for infinite cutoffs."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    x = float(value)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def _overshoot(oc: OperatingCharacteristics, h: Hypothesis):
    dist = oc.overshoot_dist(h)
    return mean_overshoot(dist) if dist else math.nan


def _use_exact(args, model, horizon: int) -> bool:
    if not getattr(args, "exact", False):
        return False
    if model.exact and horizon <= EXACT_MAX_HORIZON:
        return True
    print(f"note: exact engine unavailable (needs rational p0/pa and horizon <= "
          f"{EXACT_MAX_HORIZON}); using floating point", file=sys.stderr)
    return False


def _write_rows(rows: List[Dict], columns: List[str], path: Optional[str], stream=None):
    out = io.StringIO() if path else (stream or sys.stdout)
    writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: fmt(row.get(k)) for k in columns})
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(out.getvalue())


def _print_table(rows: List[Dict], columns: List[str]):
    cells = [[c for c in columns]] + [[fmt(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    for row in cells:
        print("  ".join(v.rjust(w) for v, w in zip(row, widths)))


# -- oc ---------------------------------------------------------------------


def oc_rows(cfg: ScenarioConfig, args=None) -> List[Dict]:
    model = cfg.model()
    rows = []
    if cfg.n is not None and cfg.lrF is not None:
        exact = _use_exact(args, model, cfg.n) if args else False
        oc = oc_fixed(model, cfg.n, cfg.lrF, exact=exact)
        rows.append({
            "design": "FixedSample", "n": cfg.n, "cutoff": cfg.lrF,
            "prReject0": oc.pr_reject_h0, "prRejectA": oc.pr_reject_ha,
            "expN0": oc.expected_n_h0, "expNA": oc.expected_n_ha,
        })
    if cfg.m is not None and cfg.targetC is not None:
        if not cfg.targetC > 1:
            raise ConfigError("targetC", "target boundary must exceed 1")
        lr_t = cfg.lrT if cfg.lrT is not None else cfg.targetC
        exact = _use_exact(args, model, cfg.m) if args else False
        oc = oc_target(model, cfg.targetC, cfg.m, lr_t, exact=exact)
        rows.append({
            "design": "TargetLR", "m": cfg.m, "c": cfg.targetC, "cutoff": lr_t,
            "prReject0": oc.pr_reject_h0, "prRejectA": oc.pr_reject_ha,
            "prHit0": oc.pr_hit_h0, "prHitA": oc.pr_hit_ha,
            "delta": 1 - oc.pr_reject_ha,
            "epsilon": 1 / Fraction(cfg.targetC) - oc.pr_reject_h0 if exact
            else 1 / float(cfg.targetC) - oc.pr_reject_h0,
            "expN0": oc.expected_n_h0, "expNA": oc.expected_n_ha,
            "expOvershoot0": _overshoot(oc, Hypothesis.H0),
            "expOvershootA": _overshoot(oc, Hypothesis.HA),
        })
    if not rows:
        raise ConfigError("n", "oc needs a fixed design (n, lrF) and/or a target design (m, targetC)")
    return rows


def cmd_oc(args, cfg: ScenarioConfig) -> int:
    rows = oc_rows(cfg, args)
    _print_table(rows, OC_COLUMNS)
    if args.csv:
        _write_rows(rows, OC_COLUMNS, args.csv)
    return EXIT_OK


# -- policy -----------------------------------------------------------------


def decision_dict(cfg: ScenarioConfig, exact: bool = False) -> Dict:
    problem = cfg.problem()
    d = penalty_decision(problem, cfg.scientistQ, exact=exact)
    lo, hi = d.lr_f_equivalent_interval
    return {
        "pw": d.pw,
        "delta0": d.delta0,
        "deltaA": d.delta_a,
        "epsilon": d.epsilon,
        "delta": d.delta,
        "penaltyMargin": d.delta0 * d.pw - d.delta_a,
        "penaltyRequired": d.penalty_required,
        "recommendedLRf": d.recommended_lr_f,
        "recommendedLRt": d.recommended_lr_t,
        "predictedChoice": d.predicted_choice,
        "approvalProbability": d.approval_probability,
        "euFixed": d.eu_fixed,
        "euTarget": d.eu_target,
        "lrFEquivalentInterval": [lo, hi],
    }


def _json_value(v):
    if isinstance(v, bool) or isinstance(v, str):
        return v
    if isinstance(v, list):
        return [_json_value(x) for x in v]
    x = float(v)
    return "inf" if math.isinf(x) else x


def cmd_policy(args, cfg: ScenarioConfig) -> int:
    exact = args.exact and _use_exact(args, cfg.model(), cfg.m or 0)
    try:
        out = decision_dict(cfg, exact=exact)
    except DegenerateScenario as exc:
        print(f"degenerate scenario: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    if args.json:
        print(json.dumps({k: _json_value(v) for k, v in out.items()}, indent=2))
        return EXIT_OK
    for key, v in out.items():
        shown = "(" + ", ".join(fmt(x) for x in v) + "]" if isinstance(v, list) else fmt(v)
        print(f"{key:>20}  {shown}")
    return EXIT_OK


# -- sweep ------------------------------------------------------------------


def sweep_row(point: ScenarioConfig) -> Dict:
    problem = point.problem()
    model = problem.model
    pw = problem.pw
    row = {k: point.get(k) for k in cfgmod.UTILITY_KEYS}
    row.update(p0=model.p0, pa=model.pa, prH0=problem.beliefs.pr_h0, n=problem.n, m=problem.m, pw=pw)
    f = oc_fixed(model, problem.n, pw)
    row.update(alpha=f.pr_reject_h0, power=f.pr_reject_ha)
    if pw > 1:
        t = oc_target(model, pw, problem.m, pw)
        row.update(
            prHit0=t.pr_hit_h0, prHitA=t.pr_hit_ha,
            delta0=t.pr_reject_h0 - f.pr_reject_h0, deltaA=t.pr_reject_ha - f.pr_reject_ha,
            epsilon=1.0 / pw - t.pr_reject_h0, delta=1 - t.pr_reject_ha,
            expOvershoot0=_overshoot(t, Hypothesis.H0), expOvershootA=_overshoot(t, Hypothesis.HA),
            expN0=t.expected_n_h0, expNA=t.expected_n_ha,
            euFixed=expected_utility(f, problem.beliefs, problem.utilities),
            euTarget=expected_utility(t, problem.beliefs, problem.utilities),
        )
    try:
        d = penalty_decision(problem, point.scientistQ)
    except DegenerateScenario:
        row.update(penaltyRequired="unreachable", predictedChoice="")
        return row
    row.update(penaltyRequired=d.penalty_required, predictedChoice=d.predicted_choice)
    return row


def sweep_rows(cfg: ScenarioConfig, workers: int = 1) -> List[Dict]:
    points = cfg.grid()
    for point in points:
        point.problem()  # surface config errors before any work starts
    return evaluate_grid(sweep_row, points, max_workers=workers)


def cmd_sweep(args, cfg: ScenarioConfig) -> int:
    rows = sweep_rows(cfg, args.workers)
    _write_rows(rows, SWEEP_COLUMNS, args.csv)
    if args.csv:
        print(f"wrote {len(rows)} rows to {args.csv}", file=sys.stderr)
    return EXIT_OK


# -- simulate ---------------------------------------------------------------


def simulate_rows(cfg: ScenarioConfig, reps: int, seed: int) -> List[Dict]:
    model = cfg.model()
    designs = []
    if cfg.n is not None and cfg.lrF is not None:
        designs.append(FixedSample(cfg.n, cfg.lrF))
    if cfg.m is not None and cfg.targetC is not None:
        designs.append(TargetLR(cfg.targetC, cfg.m, cfg.lrT))
    if not designs:
        raise ConfigError("n", "simulate needs a fixed design (n, lrF) and/or a target design (m, targetC)")
    rows = []
    for design in designs:
        if isinstance(design, FixedSample):
            exact_oc = oc_fixed(model, design.n, design.lr_f)
            label = f"FixedSample(n={design.n}, lrF={fmt(design.lr_f)})"
        else:
            exact_oc = oc_target(model, design.c, design.m, design.lr_t)
            label = f"TargetLR(c={fmt(design.c)}, m={design.m}, lrT={fmt(design.lr_t)})"
        for h in Hypothesis:
            est = mc_oc(design, model, h, reps, seed)
            ref = float(exact_oc.pr_reject(h))
            z = (est.mean - ref) / est.stderr if est.stderr > 0 else (0.0 if est.mean == ref else math.inf)
            rows.append({"design": label, "hypothesis": h.value, "reps": reps, "seed": str(seed),
                         "mean": est.mean, "stderr": est.stderr, "exact": ref, "zscore": z})
    return rows


def cmd_simulate(args, cfg: ScenarioConfig) -> int:
    rows = simulate_rows(cfg, args.reps, args.seed)
    _print_table(rows, SIMULATE_COLUMNS)
    if args.csv:
        _write_rows(rows, SIMULATE_COLUMNS, args.csv)
    return EXIT_OK


# -- verify -----------------------------------------------------------------


def cmd_verify(args, cfg: Optional[ScenarioConfig]) -> int:
    results = run_suite(reps=args.reps, seed=args.seed, fault=args.inject_fault)
    for r in results:
        print(r.line())
        for note in r.notes:
            print(f"    {note}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed: {'; '.join(failed)}")
        return EXIT_VERIFY
    print(f"all {len(results)} checks passed")
    return EXIT_OK


COMMANDS = {
    "oc": cmd_oc,
    "policy": cmd_policy,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrstop",
        description="Operating characteristics and regulator policy for fixed-sample "
        "and target-likelihood-ratio Bernoulli experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("oc", "operating characteristics of the configured design(s)"),
        ("policy", "resolve the regulator's cutoffs and the scientist's response"),
        ("sweep", "evaluate a grid of scenarios and emit CSV"),
        ("simulate", "Monte Carlo rejection rates next to the exact values"),
        ("verify", "run the built-in verification suite"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=name != "verify", help="scenario JSON file")
        p.add_argument("--csv", help="write CSV output to this path")
        p.add_argument("--seed", type=_u64, default=12345, help="64-bit Monte Carlo seed")
        p.add_argument("--reps", type=_positive, default=10**6, help="Monte Carlo replications")
        p.add_argument("--json", action="store_true", help="machine-readable policy output")
        p.add_argument("--exact", action="store_true", help="use rational arithmetic where available")
        if name == "sweep":
            p.add_argument("--workers", type=_positive, default=1, help="worker processes")
        if name == "verify":
            p.add_argument("--inject-fault", choices=FAULTS, help="deliberately break one check")
    return parser


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = cfgmod.load(args.config) if args.config else None
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateScenario as exc:
        print(f"degenerate scenario: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
