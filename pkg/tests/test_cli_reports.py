from __future__ import annotations

import json
import math

import pytest
from hypothesis import given, strategies as st

from pittlab import __version__, cli
from pittlab.config import RunConfig, deep_merge, profile_from_dict, weight_from_dict
from pittlab.errors import InvalidConfigError, NumericalFailure
from pittlab.geometry import make_space
from pittlab.profiles import Bump, Cutoff, Indicator, One, PolyExpSpatial, PowerSpectral, Product, Tabulated
from pittlab.reports import csv_text, dumps, envelope, format_number, loads, write_atomic

H3 = ["--m1", "2", "--m2", "0"]
LOCAL = ["check", "local", *H3, "--p", "4/3", "--q", "2", "--sigma", "0.75"]


def run(argv, capsys):
    code = cli.run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_phi_example(capsys):
    code, out, _ = run(["phi", *H3, "--lambda", "1", "--t", "1"], capsys)
    assert code == 0
    value = float(out.split("=")[1])
    assert value == pytest.approx(0.71602, abs=5e-6)


def test_cfun_normalization(capsys):
    code, out, _ = run(["cfun", *H3, "--lambda-im", "-1"], capsys)
    assert code == 0 and out.splitlines()[0] == "c = 1"


def test_region_example(capsys):
    code, out, _ = run(["check", "region", *H3, "--p", "1.3333", "--q", "2", "--q0", "2", "--sigma", "0.75",
                        "--kappa", "0", "--delta", "0"], capsys)
    assert code == 0 and "sufficient = true" in out


def test_space_info(capsys):
    code, out, _ = run(["space", "info", "--m1", "4", "--m2", "3"], capsys)
    assert code == 0 and "n = 8" in out and "rho = 5" in out


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["phi", *H3],
    ["check", "local", *H3, "--p", "0.5", "--q", "2"],
    ["check", "local", *H3, "--p", "2", "--q", "2", "--u", "{not json"],
    ["check", "local", *H3, "--p", "2", "--q", "2", "--u", '{"kind": "mystery"}'],
    ["check", "local", *H3, "--q", "2"],
    ["space", "info", "--m1=-1", "--m2", "0"],
])
def test_invalid_input_exits_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2


def test_field_level_messages(capsys):
    code, _, err = run(["check", "local", *H3, "--p", "2", "--q", "2", "--v", '{"kind": "polyexp", "kappa": 1}'],
                       capsys)
    assert code == 2 and "weights.v" in err and "delta" in err


def test_strict_flag(capsys):
    argv = ["check", "local", *H3, "--p", "4/3", "--q", "5"]
    code, out, _ = run(argv, capsys)
    assert code == 0 and "verdict = divergent" in out
    code, _, _ = run([*argv, "--strict"], capsys)
    assert code == 1


def test_numerical_failure_exits_3(monkeypatch, capsys):
    def boom(cfg, args):
        raise NumericalFailure("quadrature did not converge")

    monkeypatch.setitem(cli.COMMANDS, "phi", boom)
    code, _, err = run(["phi", "--t", "1"], capsys)
    assert code == 3 and "numerical failure" in err


def test_json_report_is_deterministic_and_complete(tmp_path, capsys):
    a = tmp_path / "a.json"
    assert run([*LOCAL, "--output", str(a)], capsys)[0] == 0
    first = a.read_bytes()
    assert run([*LOCAL, "--output", str(a)], capsys)[0] == 0
    assert a.read_bytes() == first
    data = loads(a.read_text())
    assert data["tool"] == "pittlab" and data["version"] == __version__
    cfg = data["config"]
    assert cfg["space"] == {"m1": 2, "m2": 0}
    assert cfg["exponents"]["q"] == 2.0 and cfg["weights"]["u"] == {"kind": "power", "sigma": 0.75}
    assert data["result"]["verdict"] == "finite"
    assert list(tmp_path.iterdir()) == [a]


def test_csv_report(tmp_path, capsys):
    path = tmp_path / "local.csv"
    assert run([*LOCAL, "--output", str(path)], capsys)[0] == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "s,factor1,factor2,product"
    assert len(lines) == 1 + 161
    assert all(len(line.split(",")) == 4 for line in lines[1:])


def test_config_file_overrides_flags(tmp_path, capsys):
    conf = tmp_path / "run.json"
    conf.write_text(json.dumps({"exponents": {"q": "5"}, "output": {"path": str(tmp_path / "r.json")}}))
    code, out, _ = run([*LOCAL, "--config", str(conf)], capsys)
    assert code == 0 and "verdict = divergent" in out
    data = loads((tmp_path / "r.json").read_text())
    assert data["config"]["exponents"]["q"] == 5.0
    assert data["config"]["exponents"]["p"] == pytest.approx(4 / 3)


def test_bad_config_file(tmp_path, capsys):
    conf = tmp_path / "bad.json"
    conf.write_text("[1, 2")
    assert run([*LOCAL, "--config", str(conf)], capsys)[0] == 2
    assert run([*LOCAL, "--config", str(tmp_path / "missing.json")], capsys)[0] == 2


def test_transform_and_rearrange_commands(tmp_path, capsys):
    code, out, _ = run(["transform", *H3, "--lambdas", "0,1"], capsys)
    assert code == 0 and len(out.splitlines()) == 2
    path = tmp_path / "r.csv"
    code, _, _ = run(["rearrange", *H3, "--weight", '{"kind": "power", "sigma": 1}', "--output", str(path)], capsys)
    assert code == 0 and path.read_text().startswith("t,value\n")


def test_verify_and_sweep_commands(capsys):
    code, out, _ = run(["verify", "pitt", *H3, "--p", "4/3", "--q", "4", "--profile",
                        '{"kind": "indicator", "radius": 1}'], capsys)
    assert code == 0 and "verdict = bounded" in out
    code, out, _ = run(["verify", "paley", "--m1", "1", "--m2", "0", "--p", "1.5", "--u",
                        '{"kind": "cutoff", "radius": 1, "inner": {"kind": "one"}}'], capsys)
    assert code == 2
    code, out, _ = run(["witness", *H3, "--p", "1.5", "--q", "2", "--sigma", "1.5", "--s-sequence", "0.5,1",
                        "--strict"], capsys)
    assert code == 1 and "verdict = unbounded" in out


# ---------------------------------------------------------------- reports and config


def test_format_number():
    assert format_number(0.1) == "0.10000000000000001"
    assert format_number(2.0) == "2.0"
    assert format_number(math.inf) == '"inf"' and format_number(-math.inf) == '"-inf"'
    assert format_number(math.nan) == '"nan"'


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(x):
    assert loads(dumps({"x": x}))["x"] == x


def test_dumps_sorted_and_stable():
    text = dumps({"b": [1, 2.5], "a": {"z": None, "y": True}, "c": complex(1, -2)})
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert loads(text)["c"] == {"re": 1.0, "im": -2.0}
    assert dumps(envelope("k", {"x": 1}, {"y": math.inf})) == dumps(envelope("k", {"x": 1}, {"y": math.inf}))
    assert loads(dumps({"y": math.inf}))["y"] == "inf"


def test_csv_text():
    assert csv_text(("a", "b"), [(1.5, None), ("x", math.inf)]) == "a,b\n1.5,\nx,inf\n"


def test_write_atomic(tmp_path):
    path = tmp_path / "sub" / "out.txt"
    write_atomic(path, "one")
    write_atomic(path, "two")
    assert path.read_text() == "two"
    assert [p.name for p in path.parent.iterdir()] == ["out.txt"]


def test_descriptor_round_trips():
    space = make_space(2, 1)
    weights = [One(), PowerSpectral(0.5), PolyExpSpatial(1.0, 0.25), Tabulated((0.0, 1.0), (2.0, 1.0)),
               Cutoff(One(), 2.0), Product((PowerSpectral(0.5), Cutoff(One(), 1.0)))]
    for w in weights:
        assert weight_from_dict(w.as_dict()) == w
        assert weight_from_dict(json.dumps(w.as_dict())) == w
    for f in (Indicator(1.0), Bump(space, 1.0, 0.5, 1.0)):
        assert profile_from_dict(space, f.as_dict()) == f


def test_run_config_validation():
    with pytest.raises(InvalidConfigError, match="exponents.q"):
        RunConfig.from_dict({"exponents": {"p": 2, "q": "x"}})
    with pytest.raises(InvalidConfigError, match="grids.t_max"):
        RunConfig.from_dict({"grids": {"t_max": 50}})
    with pytest.raises(InvalidConfigError, match="output.format"):
        RunConfig.from_dict({"output": {"format": "xml"}})
    with pytest.raises(InvalidConfigError, match="grids.s_grid"):
        RunConfig.from_dict({"grids": {"s_grid": [3, 2, 1]}})
    cfg = RunConfig.from_dict({"exponents": {"p": "4/3", "q": "inf"}})
    assert cfg.q == math.inf and cfg.p == pytest.approx(4 / 3)


def test_deep_merge():
    assert deep_merge({"a": {"x": 1, "y": 2}, "b": 1}, {"a": {"y": 3}}) == {"a": {"x": 1, "y": 3}, "b": 1}
