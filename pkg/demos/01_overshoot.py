"""Why a target-LR design cannot beat 1/c, and when it comes close.

Model: success probability 3/7 under the null, 6/7 under the alternative.
A success multiplies the likelihood ratio by 2 and a failure by 1/4, so the
LR only ever takes values 2^j.  A boundary at a power of two is hit exactly;
any other boundary is overshot, which lowers the null rejection rate below 1/c.
"""

from fractions import Fraction

from lrstop import BernoulliPair, FixedSample, Hypothesis, TargetLR, oc_fixed, oc_target, run_trajectory
from lrstop.oc import expected_overshoot, zero_overshoot_boundaries

model = BernoulliPair(Fraction(3, 7), Fraction(6, 7))

# A single path, step by step.
path = [0, 1, 1, 1, 1, 1]
for c in (4, 6):
    tr = run_trajectory(path, TargetLR(c, 50), model)
    print(f"c={c}: stop at step {tr.stop_index}, LR={tr.final_lr:g}, overshoot={tr.overshoot:g}")

# Fixed design: n = 5, reject when LR >= 2, i.e. at least 4 successes.
fixed = oc_fixed(model, 5, 2, exact=True)
print(f"\nfixed n=5, cutoff 2: alpha={fixed.alpha} ({float(fixed.alpha):.6f}), "
      f"power={fixed.power} ({float(fixed.power):.6f})")

# Target design with cap m = 50 at several boundaries.
print("\n   c  Pr(R|H0)    1/c    epsilon   E[overshoot]")
for c in (2, 3, 4, 6, 8, 12, 16):
    oc = oc_target(model, c, 50, exact=True)
    eps = Fraction(1, c) - oc.pr_reject_h0
    over = expected_overshoot(model, c, 50, Hypothesis.H0, exact=True)
    print(f"{c:>4}  {float(oc.pr_reject_h0):.6f}  {1 / c:.4f}  {float(eps):.2e}   {over}")

print("\nboundaries in 2..100 with zero overshoot:", zero_overshoot_boundaries(model, range(2, 101), 50))

# The stop rule never inspects the future: swapping the tail of a path after
# the stop leaves the outcome unchanged.
design = TargetLR(8, 12)
a = [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]
b = a[:3] + [1] * 9
assert run_trajectory(a, design, model) == run_trajectory(b, design, model)
print("\nstop after 3 successes regardless of the unseen tail:", run_trajectory(a, design, model).stop_index)

# A fixed design with the same horizon never beats the target design's rejections.
print("fixed n=12 rejects at LR>=8 on", sum(
    run_trajectory([(s >> j) & 1 for j in range(12)], FixedSample(12, 8), model).rejected for s in range(4096)
), "of 4096 paths")
