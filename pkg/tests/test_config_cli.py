import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lrstop import config
from lrstop.cli import SWEEP_COLUMNS, main
from lrstop.config import ConfigError

GOLDEN = Path(__file__).parent / "golden"


def write(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


fractions = st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=1000)


@given(fractions, fractions, st.integers(1, 50), st.integers(1, 50), fractions)
def test_config_round_trip(p0, pa, n, extra, prh0):
    cfg = config.from_dict({"p0": str(p0), "pa": str(pa), "n": n, "m": n + extra, "prH0": str(prh0),
                            "lrF": "inf", "sweep": {"n": [1, 2]}})
    again = config.loads(cfg.to_json())
    assert again == cfg
    assert again.p0 == p0 and again.lrF == math.inf


def test_decimal_literals_are_exact():
    cfg = config.from_dict({"p0": 0.3, "pa": "0.6"})
    assert cfg.p0 == Fraction(3, 10) and cfg.pa == Fraction(3, 5)


@pytest.mark.parametrize(
    "data,key",
    [
        ({"p0": "3/7", "pa": "6/7", "bogus": 1}, "bogus"),
        ({"p0": "3/7", "pa": "6/7", "utilities": {"uFoo": 1}}, "utilities.uFoo"),
        ({"p0": "3/7", "pa": "6/7", "n": 2.5}, "n"),
        ({"p0": "x", "pa": "6/7"}, "p0"),
        ({"p0": "3/7", "sweep": {"n": []}}, None),
    ],
)
def test_config_rejects_bad_input(data, key):
    if key is None:
        with pytest.raises(ConfigError):
            config.from_dict(data).grid()
        return
    with pytest.raises(ConfigError) as err:
        config.from_dict(data)
    assert err.value.key == key


def test_target_c_and_prior_are_exclusive():
    cfg = config.from_dict({"p0": "3/7", "pa": "6/7", "prH0": "1/2", "targetC": 4, "n": 5, "m": 10})
    with pytest.raises(ConfigError):
        cfg.problem()


def test_missing_field_exit_2(tmp_path, capsys):
    path = write(tmp_path, {"p0": "3/7", "n": 5, "lrF": 2})
    code, _, err = run(["oc", "--config", path], capsys)
    assert code == 2
    assert "pa" in err


def test_bad_json_exit_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, _ = run(["oc", "--config", str(path)], capsys)
    assert code == 2


def test_oc_command(tmp_path, capsys):
    path = write(tmp_path, {"p0": "3/7", "pa": "6/7", "n": 5, "lrF": 2, "m": 50, "targetC": 6})
    out_path = tmp_path / "oc.csv"
    code, out, _ = run(["oc", "--config", path, "--exact", "--csv", str(out_path)], capsys)
    assert code == 0
    assert "TargetLR" in out
    rows = read_csv(out_path.read_text())
    fixed, target = rows
    assert float(fixed["prReject0"]) == pytest.approx(1863 / 16807, abs=1e-11)
    assert float(fixed["prRejectA"]) == pytest.approx(14256 / 16807, abs=1e-11)
    assert float(target["expOvershoot0"]) == 2
    assert float(target["epsilon"]) == pytest.approx(1 / 6 - float(target["prReject0"]), abs=1e-11)


def test_oc_csv_file(tmp_path, capsys):
    path = write(tmp_path, {"p0": "3/7", "pa": "6/7", "n": 5, "lrF": 2})
    out_path = tmp_path / "oc.csv"
    code, _, _ = run(["oc", "--config", path, "--csv", str(out_path)], capsys)
    assert code == 0
    assert len(read_csv(out_path.read_text())) == 1


def test_policy_command(tmp_path, capsys):
    path = write(tmp_path, {"p0": "3/7", "pa": "6/7", "prH0": "8/9", "n": 20, "m": 60})
    code, out, _ = run(["policy", "--config", path, "--json"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["pw"] == 8
    assert report["penaltyRequired"] is True
    assert report["predictedChoice"] == "FixedSample"
    assert report["recommendedLRt"] == "inf"
    assert report["euFixed"] > report["euTarget"]


def test_policy_unreachable_exit_3(tmp_path, capsys):
    path = write(tmp_path, {"p0": "3/7", "pa": "6/7", "targetC": 16, "n": 3, "m": 3})
    code, _, err = run(["policy", "--config", path], capsys)
    assert code == 3
    assert "reach" in err


def test_sweep_golden(capsys):
    code, out, _ = run(["sweep", "--config", str(GOLDEN / "sweep_target_c.json")], capsys)
    assert code == 0
    got = read_csv(out)
    want = read_csv((GOLDEN / "sweep_target_c.csv").read_text())
    assert out.splitlines()[0].split(",") == SWEEP_COLUMNS
    assert [r["expOvershoot0"] for r in got] == ["0", "0", "2", "0"]
    assert len(got) == len(want)
    for g, w in zip(got, want):
        for col in SWEEP_COLUMNS:
            try:
                assert float(g[col]) == pytest.approx(float(w[col]), rel=1e-9, abs=1e-12), col
            except ValueError:
                assert g[col] == w[col], col


def test_sweep_epsilon_non_increasing_in_m(tmp_path, capsys):
    path = write(tmp_path, {"p0": "3/7", "pa": "6/7", "targetC": 8, "n": 10,
                            "sweep": {"m": [10, 20, 50, 100, 200]}})
    code, out, _ = run(["sweep", "--config", path, "--workers", "2"], capsys)
    assert code == 0
    eps = [float(r["epsilon"]) for r in read_csv(out)]
    assert all(a >= b for a, b in zip(eps, eps[1:]))
    assert eps[-1] < eps[0]


def test_sweep_marks_unreachable(tmp_path, capsys):
    path = write(tmp_path, {"p0": "3/7", "pa": "6/7", "targetC": 16, "n": 3,
                            "sweep": {"m": [3, 4]}})
    code, out, _ = run(["sweep", "--config", path], capsys)
    assert code == 0
    rows = read_csv(out)
    assert rows[0]["penaltyRequired"] == "unreachable"
    assert rows[1]["penaltyRequired"] in ("true", "false")


def test_sweep_empty_range_exit_2(tmp_path, capsys):
    path = write(tmp_path, {"p0": "3/7", "pa": "6/7", "targetC": 4, "n": 5, "sweep": {"m": []}})
    code, _, err = run(["sweep", "--config", path], capsys)
    assert code == 2
    assert "sweep.m" in err


def test_simulate_command(tmp_path, capsys):
    path = write(tmp_path, {"p0": "3/7", "pa": "6/7", "n": 5, "lrF": 2, "m": 30, "targetC": 4})
    code, out, _ = run(["simulate", "--config", path, "--reps", "1000", "--seed", "7"], capsys)
    assert code == 0
    code2, out2, _ = run(["simulate", "--config", path, "--reps", "1000", "--seed", "7"], capsys)
    assert out == out2


def test_verify_with_injected_fault(capsys):
    code, out, _ = run(["verify", "--reps", "1000", "--inject-fault", "wrong-sign-delta-a"], capsys)
    assert code == 1
    lines = out.splitlines()
    assert any(line.startswith("[FAIL]") and "equivalence" in line for line in lines)
    # everything other than the sabotaged check still passes at reps = 1000
    fails = [line for line in lines if line.startswith("[FAIL]")]
    assert len(fails) == 1
    assert "1 check(s) failed" in lines[-1]
