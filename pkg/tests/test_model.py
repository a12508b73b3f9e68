import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrstop import (
    BernoulliPair,
    Beliefs,
    Hypothesis,
    InvalidStop,
    TargetLR,
    FixedSample,
    UtilityTable,
    lr_of_sequence,
    lr_step,
    lr_step_ratio,
    posterior_odds,
    sequence_probability,
)
from lrstop.designs import stopped_sequence_probability
from lrstop.model import detect_lattice, lr_exponent

MODEL = BernoulliPair(Fraction(3, 7), Fraction(6, 7))

bits = st.lists(st.integers(0, 1), min_size=0, max_size=40)


def test_step_ratios():
    assert lr_step_ratio(1, MODEL) == 2
    assert lr_step_ratio(0, MODEL) == Fraction(1, 4)
    assert lr_step(1, MODEL) == pytest.approx(math.log(2))
    assert lr_step(0, MODEL) == pytest.approx(math.log(0.25))


def test_sequence_examples():
    assert lr_of_sequence([1, 1, 0], MODEL) == pytest.approx(0.0, abs=1e-15)
    assert math.exp(lr_of_sequence([1, 1, 1], MODEL)) == pytest.approx(8.0)
    assert lr_of_sequence([], MODEL) == 0.0


def test_lattice_detected():
    lat = MODEL.lattice
    assert (lat.base, lat.up, lat.down) == (2, 1, -2)
    assert detect_lattice(Fraction(1, 3), Fraction(1, 2)) is None
    assert BernoulliPair(0.3, 0.6).lattice is None


def test_invalid_probabilities():
    with pytest.raises(ValueError):
        BernoulliPair(0, Fraction(1, 2))
    with pytest.raises(ValueError):
        BernoulliPair(Fraction(1, 2), 1)


@given(bits, bits)
def test_log_lr_additive(a, b):
    assert lr_of_sequence(a + b, MODEL) == pytest.approx(
        lr_of_sequence(a, MODEL) + lr_of_sequence(b, MODEL), abs=1e-9
    )


@given(bits)
def test_exponent_is_3k_minus_2i(seq):
    i, k = len(seq), sum(seq)
    assert lr_exponent(seq, MODEL) == 3 * k - 2 * i
    assert MODEL.lr_value(i, k) == Fraction(2) ** (3 * k - 2 * i)


@given(bits)
def test_lr_depends_only_on_counts(seq):
    assert lr_of_sequence(sorted(seq), MODEL) == lr_of_sequence(seq, MODEL)


def test_posterior_odds():
    prior = Beliefs.from_null(Fraction(8, 9))
    assert posterior_odds(prior, math.log(8)) == pytest.approx(1.0)
    assert posterior_odds(prior, 0.0) == pytest.approx(1 / 8)


def test_beliefs_and_utilities_validate():
    with pytest.raises(ValueError):
        Beliefs(0.5, 0.6)
    with pytest.raises(ValueError):
        UtilityTable(1, 1, 1, 0)
    assert Beliefs.from_null(Fraction(8, 9)).prior_odds_null == 8
    assert UtilityTable(-3, 1, 1, 0).gap_ratio == 4


def test_sequence_probability_examples():
    design = TargetLR(2, 5)
    assert sequence_probability([1], Hypothesis.H0, design, MODEL) == Fraction(3, 7)
    assert sequence_probability([1], Hypothesis.HA, design, MODEL) == Fraction(6, 7)
    # LR path 1/4, 1/2, 1, 2 -> first hit at step 4
    p = sequence_probability([0, 1, 1, 1], Hypothesis.H0, design, MODEL)
    assert p == Fraction(4, 7) * Fraction(3, 7) ** 3


def test_sequence_probability_invalid_stop():
    design = TargetLR(2, 5)
    with pytest.raises(InvalidStop):
        sequence_probability([1, 0], Hypothesis.H0, design, MODEL)
    with pytest.raises(InvalidStop):
        sequence_probability([0, 0], Hypothesis.H0, design, MODEL)


@pytest.mark.parametrize("design", [FixedSample(6), TargetLR(4, 8), TargetLR(2, 7)])
@pytest.mark.parametrize("h", list(Hypothesis))
def test_stopped_sequences_sum_to_one(design, h):
    total = Fraction(0)
    for length in range(1, design.horizon + 1):
        for seq in itertools.product((0, 1), repeat=length):
            try:
                total += sequence_probability(seq, h, design, MODEL)
            except InvalidStop:
                pass
    assert total == 1


def test_randomized_continuation_factorizes():
    # continue with probability 1/3 after each prefix, forced stop at length 4
    def cont(prefix):
        if not prefix:
            return 1
        return 0 if len(prefix) >= 4 else Fraction(1, 3)

    p = Fraction(3, 7)
    total = Fraction(0)
    for length in range(1, 5):
        for seq in itertools.product((0, 1), repeat=length):
            got = stopped_sequence_probability(seq, p, cont)
            k = sum(seq)
            stop = 1 if length == 4 else Fraction(2, 3)
            assert got == p**k * (1 - p) ** (length - k) * Fraction(1, 3) ** (length - 1) * stop
            total += got
    assert total == 1


@settings(max_examples=50)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=12))
def test_fixed_design_probability_is_likelihood(seq):
    design = FixedSample(len(seq))
    k = sum(seq)
    for h in Hypothesis:
        p = MODEL.prob(h)
        assert sequence_probability(seq, h, design, MODEL) == p**k * (1 - p) ** (len(seq) - k)
