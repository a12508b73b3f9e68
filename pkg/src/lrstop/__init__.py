"""Exact operating characteristics of fixed-sample and target-likelihood-ratio
Bernoulli experiments, and the regulator's announced-policy problem built on them."""

from .designs import FixedSample, TargetLR, Trajectory, run_trajectory, sequence_probability
from .errors import (
    BoundaryUnreachable,
    DegenerateScenario,
    HorizonTooLarge,
    InvalidStop,
    SequenceTooShort,
    UnreachableBoundary,
)
from .model import (
    BernoulliPair,
    Beliefs,
    Hypothesis,
    UtilityTable,
    lr_of_sequence,
    lr_step,
    lr_step_ratio,
    posterior_odds,
)
from .oc import (
    OperatingCharacteristics,
    delta_of,
    epsilon_of,
    expected_overshoot,
    oc_fixed,
    oc_target,
    operating_characteristics,
)
from .oracle import McEstimate, enumerate_oc, mc_oc
from .policy import (
    PolicyDecision,
    PolicyProblem,
    compute_deltas,
    expected_utility,
    optimal_cutoff,
    penalty_decision,
    scientist_best_response,
)

__version__ = "0.1.0"
