"""The regulator's problem: should a target-LR experiment be penalized?

A regulator approves when the likelihood ratio reaches P*W, where P is the
prior odds of the null and W the relative cost of a false approval.  A
scientist may instead run a target design that stops as soon as the LR hits
the cutoff.  The target design rejects more often under both hypotheses; the
penalty (refusing target designs outright) is worth it exactly when
Delta0 * PW > DeltaA.
"""

from fractions import Fraction

from lrstop import BernoulliPair, Beliefs, PolicyProblem, UtilityTable, compute_deltas, penalty_decision
from lrstop.errors import BoundaryUnreachable
from lrstop.policy import problem_for_cutoff

model = BernoulliPair(Fraction(3, 7), Fraction(6, 7))

problem = PolicyProblem(model, Beliefs.from_null(Fraction(8, 9)), UtilityTable(0, 1, 1, 0), n=20, m=60)
dec = penalty_decision(problem)
d = compute_deltas(problem)
print(f"PW = {dec.pw}")
print(f"Delta0 = {float(dec.delta0):.5f}  DeltaA = {float(dec.delta_a):.5f}")
print(f"alpha = {d.alpha:.5f}  beta = {d.beta:.5f}  epsilon = {d.epsilon:.2e}  delta = {d.delta:.2e}")
print(f"threshold (1 - beta + delta) / (alpha + epsilon) = {d.threshold:.3f}")
print(f"penalty required: {dec.penalty_required}; announced cutoffs LRf={dec.recommended_lr_f}, "
      f"LRt={dec.recommended_lr_t}")
print(f"scientist runs {dec.predicted_choice}; EU fixed {float(dec.eu_fixed):.5f} vs target "
      f"{float(dec.eu_target):.5f}")
lo, hi = dec.lr_f_equivalent_interval
print(f"any fixed cutoff in ({lo:g}, {hi:g}] gives the same fixed design\n")

# Sweep PW and the fixed sample size.  With the sharp 3/7 vs 6/7 test the
# fixed design is already powerful and the target design only adds false
# approvals, so the penalty always pays.  With a weak test (1/5 vs 3/10) and a
# short fixed sample, the target design's extra power can be worth its cost.
for model in (model, BernoulliPair(Fraction(1, 5), Fraction(3, 10))):
    print(f"p0={model.p0}, pa={model.pa}")
    print("   PW    n   m  penalty")
    for pw in (2, 4, 8, 16):
        for n in (5, 10, 20):
            try:
                dec = penalty_decision(problem_for_cutoff(model, pw, n, n + 2))
                flag = "yes" if dec.penalty_required else "no"
            except BoundaryUnreachable:
                flag = "unreachable"
            print(f"{pw:>5} {n:>4} {n + 2:>3}  {flag}")
