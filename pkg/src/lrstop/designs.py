"""Fixed-sample and target-likelihood-ratio stopping rules.

Both rules are deterministic functions of the observed prefix, so each one
contributes a factor of 0 or 1 to the probability of a stopped sequence.
Boundary and rejection tests both use ``>=``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import InvalidStop, SequenceTooShort
from .model import BernoulliPair, Hypothesis, Number

#: Decimal places kept when binning overshoot values on the plain scale.
OVERSHOOT_DIGITS = 9


def _check_cutoff(name, value):
    if value != value or value < 0:
        raise ValueError(f"{name} must be >= 0 or +inf, got {value}")


@dataclass(frozen=True)
class FixedSample:
    """Observe exactly ``n`` outcomes; reject when the final LR >= ``lr_f``."""

    n: int
    lr_f: Number = math.inf

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        _check_cutoff("lr_f", self.lr_f)

    @property
    def horizon(self) -> int:
        return self.n

    @property
    def cutoff(self) -> Number:
        return self.lr_f


@dataclass(frozen=True)
class TargetLR:
    """Stop once LR >= ``c`` or ``m`` outcomes are in; reject when LR >= ``lr_t``.

    ``lr_t`` defaults to ``c``, the configuration a scientist maximizing her
    approval probability would choose.
    """

    c: Number
    m: int
    lr_t: Number = None

    def __post_init__(self):
        if not self.c > 1:
            raise ValueError(f"boundary c must exceed 1, got {self.c}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        if self.lr_t is None:
            object.__setattr__(self, "lr_t", self.c)
        _check_cutoff("lr_t", self.lr_t)

    @property
    def horizon(self) -> int:
        return self.m

    @property
    def cutoff(self) -> Number:
        return self.lr_t


Design = Union[FixedSample, TargetLR]


def stops_after(design: Design, model: BernoulliPair, i: int, k: int) -> bool:
    """Whether the design stops after ``k`` successes in ``i`` outcomes."""
    if isinstance(design, FixedSample):
        return i >= design.n
    return i >= design.m or bool(model.lr_at_least(i, k, design.c))


def overshoot_value(model: BernoulliPair, i: int, k: int, c: Number) -> float:
    """Plain-scale overshoot ``LR - c`` at a boundary hit, binned to 1e-9."""
    lr = model.lr_value(i, k)
    if isinstance(lr, Fraction):
        raw = float(lr - Fraction(c))
    else:
        raw = lr - c
    return round(max(raw, 0.0), OVERSHOOT_DIGITS) + 0.0


@dataclass(frozen=True)
class Trajectory:
    stop_index: int
    final_log_lr: float
    hit_boundary: bool
    overshoot: float
    rejected: bool

    @property
    def final_lr(self) -> float:
        return math.exp(self.final_log_lr)


def run_trajectory(seq: Sequence, design: Design, model: BernoulliPair) -> Trajectory:
    """Run a design over an outcome sequence; the unused tail is ignored."""
    k = 0
    for i, x in enumerate(seq, start=1):
        k += 1 if x else 0
        if stops_after(design, model, i, k):
            hit = isinstance(design, TargetLR) and bool(model.lr_at_least(i, k, design.c))
            return Trajectory(
                stop_index=i,
                final_log_lr=model.log_lr(i, k),
                hit_boundary=hit,
                overshoot=overshoot_value(model, i, k, design.c) if hit else 0.0,
                rejected=bool(model.lr_at_least(i, k, design.cutoff)),
            )
    raise SequenceTooShort(
        f"sequence of length {len(seq)} ends before the design stops"
    )


def stopped_sequence_probability(
    seq: Sequence, p: Number, continuation: Callable[[tuple], Number]
) -> Number:
    """Probability of observing exactly ``seq`` and then stopping.

    ``continuation(prefix)`` is the probability of taking another observation
    after ``prefix``; it may be strictly between 0 and 1 for randomized rules.
    """
    seq = tuple(seq)
    prob = continuation(())
    for i, x in enumerate(seq, start=1):
        prob *= p if x else 1 - p
        if i < len(seq):
            prob *= continuation(seq[:i])
    return prob * (1 - continuation(seq))


def design_continuation(design: Design, model: BernoulliPair) -> Callable[[tuple], int]:
    def cont(prefix: tuple) -> int:
        if not prefix:
            return 1
        i, k = len(prefix), sum(1 for x in prefix if x)
        return 0 if stops_after(design, model, i, k) else 1

    return cont


def sequence_probability(
    seq: Sequence, hypothesis: Hypothesis, design: Design, model: BernoulliPair
) -> Number:
    """Probability under ``hypothesis`` that ``design`` yields exactly ``seq``.

    Raises InvalidStop when the design would have stopped earlier or would
    continue past the end of ``seq``.
    """
    seq = tuple(seq)
    cont = design_continuation(design, model)
    for i in range(1, len(seq)):
        if cont(seq[:i]) == 0:
            raise InvalidStop(f"design stops after {i} outcomes, before the sequence ends")
    if not seq or cont(seq) == 1:
        raise InvalidStop("design continues past the end of the sequence")
    return stopped_sequence_probability(seq, model.prob(hypothesis), cont)
