import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lrstop import BernoulliPair, FixedSample, SequenceTooShort, TargetLR, run_trajectory

MODEL = BernoulliPair(Fraction(3, 7), Fraction(6, 7))


def test_target_stops_at_first_hit():
    tr = run_trajectory([1, 1, 1, 0, 0], TargetLR(8, 10), MODEL)
    assert tr.stop_index == 3
    assert tr.hit_boundary and tr.rejected
    assert tr.overshoot == 0.0
    assert tr.final_lr == pytest.approx(8.0)


def test_target_overshoot_at_non_lattice_boundary():
    # LR goes 2, 4, 8; c = 6 is first crossed at 8
    tr = run_trajectory([1, 1, 1], TargetLR(6, 10), MODEL)
    assert (tr.stop_index, tr.overshoot) == (3, 2.0)


def test_target_runs_to_cap():
    tr = run_trajectory([0] * 4, TargetLR(2, 4), MODEL)
    assert tr.stop_index == 4
    assert not tr.hit_boundary and not tr.rejected


def test_hit_exactly_at_cap_counts_as_hit():
    # exponents -2, -1, 0, 1, 2: LR 4 first reached at i = m = 5
    tr = run_trajectory([0, 1, 1, 1, 1], TargetLR(4, 5), MODEL)
    assert tr.stop_index == 5 and tr.hit_boundary and tr.overshoot == 0.0


def test_fixed_sample():
    tr = run_trajectory([1, 1, 0, 1, 1, 0, 0], FixedSample(5, 2), MODEL)
    # k=4, i=5: exponent 12 - 10 = 2
    assert tr.stop_index == 5
    assert tr.final_lr == pytest.approx(4.0)
    assert tr.rejected and not tr.hit_boundary
    assert not run_trajectory([0] * 5, FixedSample(5, 2), MODEL).rejected
    assert not run_trajectory([1] * 5, FixedSample(5), MODEL).rejected


def test_sequence_too_short():
    with pytest.raises(SequenceTooShort):
        run_trajectory([0, 0], TargetLR(2, 5), MODEL)
    with pytest.raises(SequenceTooShort):
        run_trajectory([1, 1], FixedSample(3), MODEL)


def test_design_validation():
    with pytest.raises(ValueError):
        TargetLR(1, 5)
    with pytest.raises(ValueError):
        FixedSample(0)
    assert TargetLR(4, 5).lr_t == 4


seqs = st.lists(st.integers(0, 1), min_size=12, max_size=12)


@given(seqs, seqs)
def test_stop_time_ignores_the_future(a, b):
    design = TargetLR(4, 12)
    tr = run_trajectory(a, design, MODEL)
    mutated = a[: tr.stop_index] + b[tr.stop_index :]
    assert run_trajectory(mutated, design, MODEL) == tr


@given(seqs)
def test_deterministic(a):
    design = TargetLR(6, 12)
    assert run_trajectory(a, design, MODEL) == run_trajectory(list(a), design, MODEL)


@pytest.mark.parametrize("t,f", [(2, 2), (2, 8), (4, 4), (1.5, 3)])
def test_pathwise_dominance(t, f):
    # whenever the fixed design rejects at cutoff f, the target design with
    # c = lr_t = t <= f rejects on the same path
    for model in (MODEL, BernoulliPair(Fraction(1, 5), Fraction(1, 2))):
        for n in range(1, 9):
            fixed, target = FixedSample(n, f), TargetLR(t, n, t)
            for seq in itertools.product((0, 1), repeat=n):
                if run_trajectory(seq, fixed, model).rejected:
                    assert run_trajectory(seq, target, model).rejected


def test_float_model_trajectory():
    model = BernoulliPair(0.3, 0.6)
    tr = run_trajectory([1, 1, 1, 1], TargetLR(10, 4), model)
    assert tr.stop_index == 4
    assert tr.final_log_lr == pytest.approx(4 * math.log(2))
    assert tr.hit_boundary and tr.overshoot == pytest.approx(6.0)
