"""Acceptance criteria, one test each, at their stated tolerances and time budgets.

Every test prints a single ``[PASS]``/``[FAIL]`` line; the lines are also
collected and repeated in the pytest terminal summary (see conftest.py).
Run directly with ``python tests/test_acceptance.py`` for just the lines.
"""

import pytest

from lrstop import verification as v

ACCEPTANCE_LINES = []

CRITERIA = [
    ("1_step_ratios", v.check_step_ratios),
    ("2_overshoot_claims", v.check_overshoot_claims),
    ("3_universal_bound", v.check_universal_bound),
    ("4_delta_identity", v.check_delta_identity),
    ("5_theorem_equivalence", v.check_theorem_equivalence),
    ("6_pw_bound", v.check_pw_bound),
    ("7_pathwise_dominance", v.check_pathwise_dominance),
    ("8_posterior_invariance", v.check_posterior_invariance),
    ("9a_dp_vs_enumeration", v.check_dp_vs_enumeration),
    ("9b_dp_vs_monte_carlo", lambda: v.check_dp_vs_mc(reps=10**6, seed=12345)),
    ("10_epsilon_trend", v.check_epsilon_trend),
]


def _record(result, summary=True):
    line = result.line()
    if summary:
        ACCEPTANCE_LINES.append(line)
    print(line)
    for note in result.notes:
        print(f"    {note}")
    return result


@pytest.mark.parametrize("check", [c for _, c in CRITERIA], ids=[name for name, _ in CRITERIA])
def test_criterion(check):
    result = _record(check())
    assert result.passed, result.line()


def test_injected_fault_is_caught():
    # sanity check on the harness itself, kept out of the per-criterion summary
    result = _record(v.check_theorem_equivalence(fault="wrong-sign-delta-a"), summary=False)
    assert not result.passed


if __name__ == "__main__":
    for _, check in CRITERIA:
        print(check().line())
