import csv
import json
import math

import pytest

from simmabv import cli
from simmabv.criteria import MixedModel

STABLE_SIMA = {"components": [{"levy": {"family": "stable", "c1": 1, "c2": 1, "alpha": 1.5},
                               "kernel": {"family": "fractional", "alpha": 0.25}}]}
FRAC_TEMPERED = {"components": [{"levy": {"family": "tempered_stable", "d1": 1, "d2": 1, "beta": 1.2,
                                          "l1": 1, "l2": 1},
                                 "kernel": {"family": "fractional", "alpha": 0.25}}]}


def write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(argv, tmp_path):
    out = tmp_path / "report.json"
    code = cli.run_command([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_parse_minimal_config_fills_defaults():
    cfg = cli.parse_config(json.dumps(STABLE_SIMA))
    assert isinstance(cfg.model, MixedModel)
    assert cfg.plan.n_max == 12 and cfg.plan.replicas == 1000
    comp = cfg.resolved["components"][0]
    assert comp["weight"] == 1.0 and comp["kernel0"] == "same" and comp["sigma2"] == 0.0
    assert cfg.resolved["plan"]["seed"] == 0


def test_parse_rejects_deterministic_noise():
    doc = {"components": [{"sigma2": 0, "kernel": {"family": "fractional", "alpha": 0.25}}]}
    with pytest.raises(cli.ConfigError, match="purely stochastic"):
        cli.parse_config(json.dumps(doc))


def test_parse_rejects_unknown_fields():
    doc = {**STABLE_SIMA, "plan": {"nmax": 3}}
    with pytest.raises(cli.ConfigError, match="nmax"):
        cli.parse_config(json.dumps(doc))
    doc = {"components": [{**STABLE_SIMA["components"][0], "extra": 1}]}
    with pytest.raises(cli.ConfigError):
        cli.parse_config(json.dumps(doc))


def test_parse_reports_constraint_violations():
    doc = {**STABLE_SIMA, "plan": {"n_max": 40}}
    with pytest.raises(cli.ConfigError, match="plan/n_max"):
        cli.parse_config(json.dumps(doc))
    with pytest.raises(cli.ConfigError, match="alpha"):
        cli.parse_config(json.dumps({"components": [{"levy": {"family": "stable", "c1": 1, "c2": 1, "alpha": 2.5},
                                                     "kernel": {"family": "smooth_bump"}}]}))
    with pytest.raises(cli.ConfigError):
        cli.parse_config("not json")


def test_parse_accepts_inf_strings():
    doc = {"components": [{"levy": {"family": "tabulated", "r": [0.1, 1, 10], "g": [30, 1, 0.03],
                                    "tail_exponent": -1.5},
                           "kernel": {"family": "smooth_bump"}}],
           "plan": {"left_extent": 4, "window": ["-inf", 2]}}
    resolved = cli.resolve(doc)
    assert cli._numbers(resolved)["plan"]["window"][0] == -math.inf


def test_parse_two_component_superposition():
    comp = FRAC_TEMPERED["components"][0]
    doc = {"components": [{**comp, "kernel": {"family": "fractional", "alpha": 0.2}},
                          {**comp, "kernel": {"family": "fractional", "alpha": 0.4}}]}
    cfg = cli.parse_config(json.dumps(doc))
    assert len(cfg.model.kernels) == 2
    assert [p.f.alpha for p in cfg.model.kernels] == [0.2, 0.4]


def test_check_finite_variation(tmp_path):
    code, rep = run(["check", "--config", write(tmp_path, FRAC_TEMPERED)], tmp_path)
    assert code == cli.EXIT_OK
    assert rep["verdict"]["status"] == "FiniteVariation" and rep["verdict"]["theorem"] == "Sufficiency"
    assert rep["config"]["components"][0]["kernel"]["alpha"] == 0.25 and rep["seed"] == 0


def test_check_indeterminate_exit_code(tmp_path):
    doc = {"components": [{"levy": {"family": "atoms", "atoms": [[1, 1], [-1, 1]]},
                           "kernel": {"family": "indicator", "a": 0, "b": 1}}]}
    code, rep = run(["check", "--config", write(tmp_path, doc)], tmp_path)
    assert code == cli.EXIT_INDETERMINATE
    assert rep["verdict"]["status"] == "Indeterminate"


def test_errors_exit_one(tmp_path):
    assert cli.run_command(["check", "--config", str(tmp_path / "missing.json")]) == cli.EXIT_ERROR
    assert cli.run_command(["check"]) == cli.EXIT_ERROR


def test_bound_reports_formula(tmp_path):
    doc = {"components": [{"sigma2": 1.0, "kernel": {"family": "smooth_bump"}}]}
    code, rep = run(["bound", "--config", write(tmp_path, doc)], tmp_path)
    assert code == cli.EXIT_OK
    assert rep["C_f"] == pytest.approx(256 / 105) and rep["D_f"] == 0.0
    assert rep["bound"] == pytest.approx(math.sqrt(2 / math.pi) * math.sqrt(256 / 105))


def test_simulate_report_reproduces_from_embedded_config(tmp_path):
    doc = {**STABLE_SIMA, "plan": {"n_max": 6, "series_terms": 2000}}
    csv_path = tmp_path / "levels.csv"
    code, rep = run(["simulate", "--config", write(tmp_path, doc), "--seed", "9", "-R", "2",
                     "--csv", str(csv_path)], tmp_path)
    assert code == cli.EXIT_OK and rep["seed"] == 9
    rows = list(csv.DictReader(csv_path.open()))
    assert len(rows) == 2 * 7 and float(rows[6]["V_n"]) == rep["levels"][0][6]
    again = tmp_path / "again"
    again.mkdir()
    code, rep2 = run(["simulate", "--config", write(again, rep["config"]), "-R", "2"], again)
    assert rep2 == rep


def test_mbv_and_sandwich(tmp_path):
    doc = {"components": [{"levy": {"family": "stable", "c1": 1, "c2": 1, "alpha": 1.5},
                           "kernel": {"family": "indicator", "a": 0, "b": 1}}],
           "plan": {"n_max": 3}}
    path = write(tmp_path, doc)
    code, rep = run(["mbv", "--config", path, "-R", "200", "--level", "2"], tmp_path)
    assert code == cli.EXIT_OK and rep["level"] == 2 and rep["se"] > 0
    code, rep = run(["sandwich", "--config", path, "-R", "300", "--level", "3"], tmp_path)
    assert [r["n"] for r in rep["rows"]] == [0, 1, 2, 3]
    assert rep["rows"][0]["I_n"] == pytest.approx(16.0)
    assert code == (cli.EXIT_OK if rep["all_inside"] else cli.EXIT_ERROR)


def test_table_matches_canonical_verdicts(tmp_path):
    code, rep = run(["table"], tmp_path)
    assert code == cli.EXIT_OK and rep["all_match"]
    assert len(rep["rows"]) == 6


def test_identities_pass(tmp_path):
    code, rep = run(["identities"], tmp_path)
    assert code == cli.EXIT_OK and rep["all_ok"]
    code, rep = run(["identities", "--tol", "1e-30"], tmp_path)
    assert code == cli.EXIT_ERROR


def test_zeroone_weierstrass_small_run(tmp_path):
    code, rep = run(["zeroone", "--weierstrass", "-R", "200"], tmp_path)
    assert code == cli.EXIT_OK
    assert rep["classification"]["local_law"] == "NotCovered"
    exp = rep["experiment"]
    assert exp["replicas"] == 200 and exp["zero_atom_max_variation"] == 0.0
    assert abs(exp["fraction_empty_window"] - math.exp(-2)) < 4 * max(exp["se_empty_window"], 0.02)
    assert rep["config"]["components"][0]["kernel"]["family"] == "weierstrass_bump"
