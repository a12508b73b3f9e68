"""Two simple Bernoulli hypotheses and likelihood-ratio arithmetic.

Likelihood ratios are always ratios of the alternative to the null,
``p(x | pa) / p(x | p0)``, and are carried on the natural-log scale.  When
both per-step ratios are integer powers of one rational base (for example
``3/7`` against ``6/7``, where a success doubles the ratio and a failure
quarters it) the model also exposes an exact integer-exponent lattice so that
boundary hits and overshoots can be decided without rounding.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Sequence, Union

import numpy as np

Number = Union[int, float, Fraction]

#: Absolute slack, in log space, under which a likelihood ratio counts as
#: having reached a cutoff.  Errs toward "reached".
LOG_TOL = 1e-9

SUCCESS = 1
FAILURE = 0


class Hypothesis(enum.Enum):
    H0 = "H0"
    HA = "Ha"


def _as_exact(x: Number) -> Optional[Fraction]:
    if isinstance(x, Rational):
        return Fraction(x)
    return None


def _ratio(a: Number, b: Number) -> Number:
    # keep rational inputs rational so exact engines stay available
    if isinstance(a, Rational) and isinstance(b, Rational):
        return Fraction(a) / Fraction(b)
    return a / b


def _is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


def _factor(n: int, limit: int = 10**12) -> Optional[dict]:
    if n > limit:
        return None
    out: dict = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _exponents(r: Fraction) -> Optional[dict]:
    num = _factor(r.numerator)
    den = _factor(r.denominator)
    if num is None or den is None:
        return None
    vec = dict(num)
    for p, e in den.items():
        vec[p] = vec.get(p, 0) - e
    return vec


@dataclass(frozen=True)
class Lattice:
    """Exact representation ``LR = base ** (up * k + down * (i - k))``."""

    base: Fraction
    up: int
    down: int

    def exponent(self, i, k):
        return self.up * k + self.down * (i - k)

    def min_exponent(self, cutoff) -> Optional[int]:
        """Smallest exponent ``j`` with ``base ** j >= cutoff``; None for +inf."""
        if _is_inf(cutoff):
            return None
        return _min_exponent(self.base, Fraction(cutoff))

    def value(self, j: int) -> Fraction:
        return self.base**j


@functools.lru_cache(maxsize=4096)
def _min_exponent(base: Fraction, c: Fraction) -> int:
    if c <= 0:
        return -(10**18)
    j = math.floor(math.log(c) / math.log(base))
    while base**j < c:
        j += 1
    while base ** (j - 1) >= c:
        j -= 1
    # cutoffs carried as floats (e.g. 8.000000000000002) still count as hit
    if base ** (j - 1) >= c * (1 - Fraction(1, 10**9)):
        j -= 1
    return j


def detect_lattice(p0: Fraction, pa: Fraction) -> Optional[Lattice]:
    """Find a common rational base for both per-step ratios, if one exists."""
    if p0 == pa:
        return None
    r_up = pa / p0
    r_down = (1 - pa) / (1 - p0)
    e_up = _exponents(r_up)
    e_down = _exponents(r_down)
    if e_up is None or e_down is None:
        return None
    g_up = math.gcd(*[abs(e) for e in e_up.values()])
    g_down = math.gcd(*[abs(e) for e in e_down.values()])
    dir_up = {p: e // g_up for p, e in e_up.items()}
    dir_down = {p: e // g_down for p, e in e_down.items()}
    if dir_up == dir_down:
        up, down = g_up, g_down
    elif dir_up == {p: -e for p, e in dir_down.items()}:
        up, down = g_up, -g_down
    else:
        return None
    base = Fraction(1)
    for p, e in dir_up.items():
        base *= Fraction(p) ** e
    if base < 1:
        base, up, down = 1 / base, -up, -down
    return Lattice(base, up, down)


@dataclass(frozen=True)
class BernoulliPair:
    """Null success probability ``p0`` against alternative ``pa``.

    Pass :class:`fractions.Fraction` values to enable the exact engines.
    """

    p0: Number
    pa: Number
    lattice: Optional[Lattice] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("p0", "pa"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {v}")
        e0, ea = _as_exact(self.p0), _as_exact(self.pa)
        lat = detect_lattice(e0, ea) if e0 is not None and ea is not None else None
        object.__setattr__(self, "lattice", lat)

    @property
    def exact(self) -> bool:
        return _as_exact(self.p0) is not None and _as_exact(self.pa) is not None

    @property
    def log_up(self) -> float:
        """Log-LR increment of one success."""
        return math.log(self.pa / self.p0)

    @property
    def log_down(self) -> float:
        """Log-LR increment of one failure."""
        return math.log((1 - self.pa) / (1 - self.p0))

    def prob(self, hypothesis: Hypothesis) -> Number:
        return self.p0 if hypothesis is Hypothesis.H0 else self.pa

    def log_lr(self, i, k):
        """Log likelihood ratio after ``k`` successes in ``i`` trials."""
        return k * self.log_up + (i - k) * self.log_down

    def lr_at_least(self, i, k, cutoff):
        """Whether ``LR(i, k) >= cutoff``; vectorised over ``k``."""
        if _is_inf(cutoff):
            return np.zeros(np.shape(k), dtype=bool) if np.ndim(k) else False
        if cutoff <= 0:
            return np.ones(np.shape(k), dtype=bool) if np.ndim(k) else True
        if self.lattice is not None:
            return self.lattice.exponent(i, k) >= self.lattice.min_exponent(cutoff)
        return self.log_lr(i, k) >= math.log(cutoff) - LOG_TOL

    def lr_value(self, i: int, k: int) -> Number:
        """Plain-scale likelihood ratio; exact when a lattice is available."""
        if self.lattice is not None:
            return self.lattice.value(self.lattice.exponent(i, k))
        return math.exp(self.log_lr(i, k))

    def reachable(self, cutoff, steps: int) -> bool:
        """Whether some path of at most ``steps`` observations attains ``cutoff``."""
        if steps < 1:
            return False
        # log-LR is linear in k and the favourable increment is positive, so the
        # extreme paths at the last step dominate every shorter path.
        return bool(self.lr_at_least(steps, steps, cutoff)) or bool(
            self.lr_at_least(steps, 0, cutoff)
        )


def counts(seq: Iterable) -> tuple:
    """Return ``(length, successes)`` of an outcome sequence."""
    seq = list(seq)
    k = sum(1 for x in seq if x)
    return len(seq), k


def lr_step(outcome, model: BernoulliPair) -> float:
    """Log-LR contributed by a single outcome."""
    return model.log_up if outcome else model.log_down


def lr_step_ratio(outcome, model: BernoulliPair) -> Number:
    """Plain-scale per-step ratio; a Fraction when the model is exact."""
    p0, pa = model.p0, model.pa
    if outcome:
        return Fraction(pa) / Fraction(p0) if model.exact else pa / p0
    if model.exact:
        return (1 - Fraction(pa)) / (1 - Fraction(p0))
    return (1 - pa) / (1 - p0)


def lr_of_sequence(seq: Sequence, model: BernoulliPair) -> float:
    """Log-LR of a whole sequence.  Depends on the sequence only via its counts."""
    i, k = counts(seq)
    return model.log_lr(i, k)


def lr_exponent(seq: Sequence, model: BernoulliPair) -> int:
    """Integer lattice exponent of a sequence's LR (exact models only)."""
    if model.lattice is None:
        raise ValueError("model has no exact integer-exponent lattice")
    i, k = counts(seq)
    return model.lattice.exponent(i, k)


@dataclass(frozen=True)
class Beliefs:
    """Prior probabilities of the null and the alternative."""

    pr_h0: Number
    pr_ha: Number

    def __post_init__(self):
        if not (0 < self.pr_h0 < 1 and 0 < self.pr_ha < 1):
            raise ValueError("prior probabilities must lie strictly in (0, 1)")
        if abs(self.pr_h0 + self.pr_ha - 1) > 1e-12:
            raise ValueError("prior probabilities must sum to 1")

    @classmethod
    def from_null(cls, pr_h0: Number) -> "Beliefs":
        return cls(pr_h0, 1 - pr_h0)

    @property
    def prior_odds_null(self) -> Number:
        """``P = Pr(H0) / Pr(Ha)``."""
        return _ratio(self.pr_h0, self.pr_ha)


@dataclass(frozen=True)
class UtilityTable:
    """Regulator utilities for the four (decision, truth) outcomes."""

    u_type_i: Number
    u_correct_non_rej: Number
    u_correct_rej: Number
    u_type_ii: Number

    def __post_init__(self):
        if not self.u_correct_non_rej > self.u_type_i:
            raise ValueError("u_correct_non_rej must exceed u_type_i")
        if not self.u_correct_rej > self.u_type_ii:
            raise ValueError("u_correct_rej must exceed u_type_ii")

    @property
    def gap_ratio(self) -> Number:
        """``W``: cost of a false approval relative to a missed approval."""
        return _ratio(
            self.u_correct_non_rej - self.u_type_i, self.u_correct_rej - self.u_type_ii
        )


def posterior_odds(prior: Beliefs, log_lr: float) -> float:
    """Posterior odds ``Pr(Ha | data) / Pr(H0 | data)``."""
    return (prior.pr_ha / prior.pr_h0) * math.exp(log_lr)
