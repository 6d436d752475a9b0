import csv
import io
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings, strategies as st

from ionotto import cli
from ionotto.config import ConfigError, RunConfig, parse_config, render_config
from ionotto.linalg import NotHermitianError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines())


def test_cycle_defaults_j0():
    code, out, _ = run("cycle", "--j", "0")
    assert code == 0
    d = kv(out)
    assert float(d["eta"]) == pytest.approx(0.5, abs=1e-9)
    assert d["regime"] == "engine"
    assert "eta_prime" not in d


def test_cycle_e2_refrigerator():
    code, out, _ = run("cycle", "--j", "5", "--measure", "e2")
    assert code == 0
    d = kv(out)
    assert d["regime"] == "refrigerator" and float(d["cop"]) > 0


def test_cycle_cost_flag():
    d = kv(run("cycle", "--j", "3", "--cost")[1])
    assert float(d["eta_prime"]) < float(d["eta"])


@pytest.mark.parametrize("argv,key", [
    (("cycle", "--j", "1", "--b-l", "10"), "b_l"),
    (("cycle", "--j", "1", "--b-l", "12"), "b_l"),
    (("cycle",), "j"),
    (("cycle", "--j", "-1"), "j"),
    (("sweep", "--j-min", "3", "--j-max", "1"), "j_max"),
    (("sweep", "--j-steps", "0"), "j_steps"),
    (("sweep", "--k", "abc"), "k"),
    (("adiabatic", "--tau", "0"), "tau"),
])
def test_config_errors(argv, key):
    code, out, err = run(*argv)
    assert code == 2
    assert key in err and out == ""


def test_unknown_measure_is_usage_error():
    assert run("cycle", "--j", "1", "--measure", "e9")[0] == 2


def test_sweep_shape_and_determinism():
    code, out, _ = run("sweep", "--measure", "e1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.splitlines()[0] == ",".join(cli.SWEEP_HEADER)
    assert len(rows) == 101
    assert all(r["regime"] == "engine" for r in rows)
    etas = [float(r["eta"]) for r in rows]
    assert all(b >= a for a, b in zip(etas, etas[1:]))
    for r in rows:
        assert float(r["w_net"]) == pytest.approx(float(r["q_h"]) + float(r["q_l"]), abs=1e-9)
        assert r["cop"] == "" and r["eta_prime"] == ""
    assert run("sweep", "--measure", "e1")[1] == out


def test_sweep_e4_refrigerator():
    rows = list(csv.DictReader(io.StringIO(run("sweep", "--measure", "e4")[1])))
    assert all(r["regime"] == "refrigerator" for r in rows if float(r["j"]) > 0)


def test_single_step_sweep_equals_cycle():
    _, sweep, _ = run("sweep", "--j-min", "2.5", "--j-max", "2.5", "--j-steps", "1", "--measure", "e3")
    row = next(csv.DictReader(io.StringIO(sweep)))
    d = kv(run("cycle", "--j", "2.5", "--measure", "e3")[1])
    for key in ("j", "q_h", "q_l", "w_net", "cop", "regime", "outcome_prob"):
        assert row[key] == d[key]


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# fig. 2 but colder\nkbt_h = 2.0\nmeasure = e2\nj = 4  # trailing\n")
    d1 = kv(run("cycle", "--config", str(cfg))[1])
    assert d1["regime"] == "refrigerator"
    d2 = kv(run("cycle", "--config", str(cfg), "--measure", "e1")[1])
    assert d2["regime"] == "engine"
    assert run("cycle", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_config_file_bad_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("b_h 10\n")
    code, _, err = run("cycle", "--config", str(cfg), "--j", "1")
    assert code == 2 and "line 1" in err


def test_adiabatic_rows():
    code, out, _ = run("adiabatic", "--j", "5", "--tau", "10,1000", "--steps", "2000")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["tau"]) for r in rows] == [10, 1000]
    assert float(rows[1]["leakage"]) <= 1e-3
    assert all(float(r["unitarity_defect"]) <= 1e-8 for r in rows)
    assert float(rows[1]["leakage"]) < float(rows[0]["leakage"])


def test_adiabatic_sudden_quench():
    # the quench needs a sizeable ion-phonon coupling to mix levels noticeably
    code, out, _ = run("adiabatic", "--j", "5", "--k", "1", "--b-l", "3", "--tau", "1e-9",
                       "--steps", "1")
    assert code == 0
    assert float(next(csv.DictReader(io.StringIO(out)))["leakage"]) > 1e-3


def test_numerical_contract_exit_code(monkeypatch):
    def broken(*a, **k):
        raise NotHermitianError(1.0)
    monkeypatch.setattr(cli, "run_otto_cycle", broken)
    code, _, err = run("cycle", "--j", "1")
    assert code == 3 and "Hermitian" in err


def _sweep_file(tmp_path, measure="e1", name="s.csv"):
    path = tmp_path / name
    assert run("sweep", "--measure", measure, "--j-steps", "21", "--cost", "--out", str(path))[0] == 0
    return path


@pytest.mark.parametrize("measure", ["e1", "e3"])
def test_plot_valid_svg(tmp_path, measure):
    src = _sweep_file(tmp_path, measure)
    svg = tmp_path / "s.svg"
    assert run("plot", str(src), "--out", str(svg))[0] == 0
    root = ET.parse(svg).getroot()
    assert root.tag.endswith("svg")
    panels = [g for g in root if g.tag.endswith("g")]
    assert len(panels) == 2
    again = tmp_path / "again.svg"
    run("plot", str(_sweep_file(tmp_path, measure, "t.csv")), "--out", str(again))
    assert again.read_bytes() == svg.read_bytes()


def test_plot_empty_body(tmp_path):
    src = tmp_path / "empty.csv"
    src.write_text(",".join(cli.SWEEP_HEADER) + "\n")
    code, _, err = run("plot", str(src), "--out", str(tmp_path / "x.svg"))
    assert code == 2 and "no data" in err


@pytest.mark.parametrize("body", ["", "a,b\n1,2\n", ",".join(cli.SWEEP_HEADER) + "\n1,2\n",
                                  ",".join(cli.SWEEP_HEADER) + "\nx,1,1,1,,,,engine,1\n"])
def test_plot_malformed(tmp_path, body):
    src = tmp_path / "bad.csv"
    src.write_text(body)
    assert run("plot", str(src), "--out", str(tmp_path / "x.svg"))[0] == 2


floats = st.floats(0.01, 50, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(b_h=floats, b_l=floats, k=st.floats(0, 1), measure=st.sampled_from(["e1", "e2", "e3", "e4"]),
       j=st.none() | floats, cost=st.booleans(), cost_kbt=st.none() | floats,
       tau=st.lists(floats, min_size=1, max_size=4).map(tuple),
       steps=st.integers(1, 10**6), seed=st.none() | st.integers(0, 2**31))
def test_config_round_trip(b_h, b_l, k, measure, j, cost, cost_kbt, tau, steps, seed):
    cfg = RunConfig(b_h=b_h, b_l=b_l, k=k, measure=measure, j=j, cost=cost,
                    cost_kbt=cost_kbt, tau=tau, steps=steps, seed=seed)
    assert parse_config(render_config(cfg)) == cfg


def test_default_config_values():
    cfg = RunConfig()
    assert (cfg.b_h, cfg.b_l, cfg.k, cfg.omega, cfg.kbt_h) == (10, 5, 0.1, 1, 3.5)
    assert (cfg.j_min, cfg.j_max, cfg.j_steps) == (0, 10, 101)
    assert cfg.j_grid()[3] == 0.3
    with pytest.raises(ConfigError):
        parse_config("bogus = 1\n")
