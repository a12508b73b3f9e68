"""Three ways to the same rejection probability.

The forward DP is the production engine.  Exhaustive path enumeration (short
horizons) and seeded Monte Carlo (any horizon) are independent checks on it.
"""

from fractions import Fraction

from lrstop import BernoulliPair, Hypothesis, TargetLR, enumerate_oc, mc_oc, oc_target

model = BernoulliPair(Fraction(3, 7), Fraction(6, 7))

design = TargetLR(6, 16)
dp = oc_target(model, 6, 16, exact=True)
en = enumerate_oc(design, model, exact=True)
print("exact DP        Pr(R|H0) =", dp.pr_reject_h0)
print("enumeration     Pr(R|H0) =", en.pr_reject_h0)
assert dp.pr_reject_h0 == en.pr_reject_h0

design = TargetLR(8, 12)
exact = oc_target(model, 8, 12)
for h in Hypothesis:
    est = mc_oc(design, model, h, reps=500_000, seed=12345)
    z = (est.mean - exact.pr_reject(h)) / est.stderr
    print(f"{h.value}: DP {exact.pr_reject(h):.6f}  MC {est.mean:.6f} +- {est.stderr:.6f}  (z = {z:+.2f})")

# Same seed, same answer, whatever the number of worker processes.
a = mc_oc(design, model, Hypothesis.H0, 200_000, seed=1)
b = mc_oc(design, model, Hypothesis.H0, 200_000, seed=1, max_workers=2)
print("seeded runs identical across worker counts:", a == b)
