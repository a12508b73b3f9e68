"""Scenario configuration files.

A scenario is a JSON object.  Probabilities and cutoffs may be JSON numbers or
strings such as ``"3/7"``, ``"0.25"`` or ``"inf"``; non-integer values are
held as exact fractions (decimal literals are read as the decimal they spell)
so that the exact engines apply.  Recognised keys::

    p0, pa            success probability under H0 / Ha
    prH0              prior probability of H0
    utilities         {"uTypeI", "uCorrectNonRej", "uCorrectRej", "uTypeII"}
    n, m              fixed sample size / target-design cap
    targetC           target boundary; for policy and sweep it also fixes P*W
                      (the prior is then implied and prH0 must be absent)
    lrF, lrT          rejection cutoffs for the fixed / target design
    scientistQ        scientist's probability of Ha (default 0.5)
    sweep             {field: [values, ...]} for the sweep subcommand

Unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .model import BernoulliPair, Beliefs, UtilityTable
from .policy import PolicyProblem

DEFAULT_UTILITIES = {"uTypeI": 0, "uCorrectNonRej": 1, "uCorrectRej": 1, "uTypeII": 0}
UTILITY_KEYS = tuple(DEFAULT_UTILITIES)
SCALAR_KEYS = ("p0", "pa", "prH0", "n", "m", "targetC", "lrF", "lrT", "scientistQ")
SWEEPABLE = SCALAR_KEYS + UTILITY_KEYS
INT_KEYS = ("n", "m")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def parse_number(value, key: str = "value"):
    """Parse a JSON number or numeric string to int, Fraction or +inf."""
    if isinstance(value, bool):
        raise ConfigError(key, "expected a number, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return math.inf
        if not math.isfinite(value):
            raise ConfigError(key, f"not a finite number: {value}")
        value = repr(value)
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity"):
            return math.inf
        try:
            out = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(key, f"cannot parse {value!r} as a number") from None
        return int(out) if out.denominator == 1 else out
    raise ConfigError(key, f"expected a number, got {type(value).__name__}")


def format_number(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else str(value)
    return value


@dataclass(frozen=True)
class ScenarioConfig:
    p0: Optional[object] = None
    pa: Optional[object] = None
    prH0: Optional[object] = None
    utilities: Dict[str, object] = field(default_factory=lambda: dict(DEFAULT_UTILITIES))
    n: Optional[int] = None
    m: Optional[int] = None
    targetC: Optional[object] = None
    lrF: Optional[object] = None
    lrT: Optional[object] = None
    scientistQ: object = Fraction(1, 2)
    sweep: Dict[str, List[object]] = field(default_factory=dict)

    def get(self, key: str):
        if key in UTILITY_KEYS:
            return self.utilities[key]
        return getattr(self, key)

    def with_values(self, **values) -> "ScenarioConfig":
        utilities = dict(self.utilities)
        scalars = {}
        for key, v in values.items():
            if key in UTILITY_KEYS:
                utilities[key] = v
            else:
                scalars[key] = v
        return dataclasses.replace(self, utilities=utilities, **scalars)

    # -- typed views -------------------------------------------------------

    def require(self, *keys: str):
        for key in keys:
            if self.get(key) is None:
                raise ConfigError(key, "required field is missing")

    def model(self) -> BernoulliPair:
        self.require("p0", "pa")
        for key in ("p0", "pa"):
            v = self.get(key)
            if not 0 < v < 1:
                raise ConfigError(key, f"must lie strictly between 0 and 1, got {format_number(v)}")
        return BernoulliPair(self.p0, self.pa)

    def utility_table(self) -> UtilityTable:
        u = self.utilities
        try:
            return UtilityTable(u["uTypeI"], u["uCorrectNonRej"], u["uCorrectRej"], u["uTypeII"])
        except ValueError as exc:
            raise ConfigError("utilities", str(exc)) from None

    def beliefs(self) -> Beliefs:
        if self.targetC is not None and self.prH0 is not None:
            raise ConfigError("prH0", "give either prH0 or targetC (which implies the prior), not both")
        if self.targetC is not None:
            pw = self.targetC
            if math.isinf(pw) or not pw > 0:
                raise ConfigError("targetC", "must be a finite positive cutoff")
            p = Fraction(pw) / Fraction(self.utility_table().gap_ratio)
            return Beliefs.from_null(p / (1 + p))
        self.require("prH0")
        if not 0 < self.prH0 < 1:
            raise ConfigError("prH0", "must lie strictly between 0 and 1")
        return Beliefs.from_null(self.prH0)

    def problem(self) -> PolicyProblem:
        self.require("n", "m")
        model = self.model()
        beliefs = self.beliefs()
        utilities = self.utility_table()
        if self.m < self.n:
            raise ConfigError("m", f"must be at least n={self.n}")
        return PolicyProblem(model, beliefs, utilities, self.n, self.m)

    # -- grids -------------------------------------------------------------

    def grid(self) -> List["ScenarioConfig"]:
        """Cartesian product of the sweep ranges, in declared order (last key fastest)."""
        if not self.sweep:
            raise ConfigError("sweep", "at least one range is required")
        points = [{}]
        for key, values in self.sweep.items():
            if not values:
                raise ConfigError(f"sweep.{key}", "range is empty")
            points = [dict(p, **{key: v}) for p in points for v in values]
        return [dataclasses.replace(self.with_values(**p), sweep={}) for p in points]

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        out = {}
        for key in SCALAR_KEYS:
            v = getattr(self, key)
            if v is not None:
                out[key] = format_number(v)
        out["utilities"] = {k: format_number(v) for k, v in self.utilities.items()}
        if self.sweep:
            out["sweep"] = {k: [format_number(v) for v in vs] for k, vs in self.sweep.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _check_int(key, v):
    if isinstance(v, Fraction) or (isinstance(v, float)) or v < 1:
        raise ConfigError(key, f"must be a positive integer, got {format_number(v)}")
    return v


def _check_value(key: str, raw):
    v = parse_number(raw, key)
    if key in INT_KEYS:
        return _check_int(key, v)
    return v


def from_dict(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a JSON object")
    known = set(SCALAR_KEYS) | {"utilities", "sweep"}
    for key in data:
        if key not in known:
            raise ConfigError(key, "unknown field")
    kwargs = {}
    for key in SCALAR_KEYS:
        if key in data and data[key] is not None:
            kwargs[key] = _check_value(key, data[key])
    utilities = dict(DEFAULT_UTILITIES)
    if "utilities" in data:
        raw = data["utilities"]
        if not isinstance(raw, dict):
            raise ConfigError("utilities", "must be an object")
        for key, v in raw.items():
            if key not in UTILITY_KEYS:
                raise ConfigError(f"utilities.{key}", "unknown field")
            if isinstance(v, str) and v.strip().lower().endswith("inf"):
                raise ConfigError(f"utilities.{key}", "must be finite")
            utilities[key] = parse_number(v, f"utilities.{key}")
    kwargs["utilities"] = utilities
    sweep = {}
    if "sweep" in data:
        raw = data["sweep"]
        if not isinstance(raw, dict):
            raise ConfigError("sweep", "must be an object mapping fields to lists")
        for key, values in raw.items():
            if key not in SWEEPABLE:
                raise ConfigError(f"sweep.{key}", "field cannot be swept")
            if not isinstance(values, list):
                raise ConfigError(f"sweep.{key}", "must be a list")
            sweep[key] = [_check_value(key, v) for v in values]
    kwargs["sweep"] = sweep
    return ScenarioConfig(**kwargs)


def loads(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    return from_dict(data)


def load(path: str) -> ScenarioConfig:
    try:
        with open(path) as fh:
            return loads(fh.read())
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
