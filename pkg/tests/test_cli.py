import copy
import json
from importlib import resources

import pytest

from invol2 import suite
from invol2.cli import main
from invol2.errors import ParseError
from invol2.scenario import dumps, load_scenario, parse_scenario, recheck, run_scenario, witness_hash

SCENARIOS = resources.files("invol2") / "scenarios"


def _bundled(name):
    return str(SCENARIOS / name)


@pytest.fixture(scope="module")
def deg8_cert():
    return run_scenario(load_scenario(_bundled("lemma3_deg8.json")), timings=False)


def test_degree8_pair_scenario(deg8_cert):
    assert deg8_cert["all_match"]
    (entry,) = [r for r in deg8_cert["results"] if r["action"] == "lemma3"]
    assert entry["verdict"] == "yes"
    assert entry["witnesses"]["S1"] != entry["witnesses"]["S2"]


def test_count_scenario_via_cli(tmp_path, capsys):
    out = tmp_path / "cert.json"
    assert main(["run", _bundled("count_deg8.json"), "--out", str(out)]) == 0
    cert = json.loads(out.read_text(encoding="utf-8"))
    (entry,) = [r for r in cert["results"] if r["action"] == "count"]
    assert entry["verdict"] == "yes" and entry["witnesses"]["x"]
    assert main(["run", "--recheck", str(out)]) == 0
    assert "witnesses re-verified" in capsys.readouterr().out


def test_certificate_is_deterministic(deg8_cert):
    again = run_scenario(load_scenario(_bundled("lemma3_deg8.json")), timings=False)
    assert dumps(again) == dumps(deg8_cert)


def test_seed_changes_random_actions():
    sc = load_scenario(_bundled("iso_deg4.json"))
    a = run_scenario(sc, seed=1, timings=False)
    b = run_scenario(sc, seed=2, timings=False)
    pos = [r for r in a["results"] if r["action"] == "pos"][0]
    pos2 = [r for r in b["results"] if r["action"] == "pos"][0]
    assert pos["hash"] != pos2["hash"]


def test_recheck_passes(deg8_cert):
    assert all(r["ok"] for r in recheck(deg8_cert))


def test_recheck_detects_tampering(deg8_cert):
    cert = copy.deepcopy(deg8_cert)
    (entry,) = [r for r in cert["results"] if r["action"] == "met"]
    entry["witnesses"]["z"] = {"1⊗1⊗e11": "1"}
    reports = {r["index"]: r for r in recheck(cert)}
    assert reports[entry["index"]]["reason"] == "hash mismatch"
    entry["hash"] = witness_hash(entry["witnesses"])
    reports = {r["index"]: r for r in recheck(cert)}
    assert not reports[entry["index"]]["ok"]


def test_malformed_json_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["run", str(bad)]) == 2


def test_unknown_action_rejected():
    with pytest.raises(ParseError):
        parse_scenario({"field": {"vars": ["a"]}, "factors": [{"type": "m2t"}],
                        "actions": [{"action": "frobnicate"}]})


def test_clashing_variable_rejected():
    with pytest.raises(ParseError):
        parse_scenario({"field": {"vars": ["v1"]}, "factors": [{"type": "m2t"}]})


def test_mismatch_exit_code(tmp_path):
    sc = {"field": {"vars": ["a", "b"]},
          "factors": [{"type": "quat", "alpha": "a", "beta": "b"}],
          "actions": [{"action": "represents", "alpha": "a", "expect": "yes"}]}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(sc), encoding="utf-8")
    assert main(["run", str(path), "--out", str(tmp_path / "c.json")]) == 1


def test_degree_overflow_exit_code(tmp_path):
    sc = {"field": {"vars": ["a", "b"], "degree_budget": 2},
          "factors": [{"type": "quat", "alpha": "a^3", "beta": "b"}],
          "actions": [{"action": "build"}]}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(sc), encoding="utf-8")
    assert main(["run", str(path)]) == 3


def test_small_commands(capsys):
    assert main(["i-invariant", "x", "x"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["pfister", "x", "y"]) == 0
    assert json.loads(capsys.readouterr().out)["entries"] == ["1", "x", "y", "x*y"]
    assert main(["represents", "b + d", "--factor", "a,b", "--factor", "c,d"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["represented"] and len(out["witness"]) == 2


def test_verify_suite_json(monkeypatch, capsys):
    monkeypatch.setattr(suite, "CRITERIA", [(1, "stub", lambda inst, scale: (True, "ok"), None)])
    assert main(["verify-paper", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["all_passed"] and data["criteria"][0]["title"] == "stub"


def test_all_bundled_scenarios_parse():
    names = sorted(p.name for p in SCENARIOS.iterdir() if p.name.endswith(".json"))
    assert {"lemma3_deg8.json", "count_deg8.json"} <= set(names)
    for name in names:
        load_scenario(_bundled(name))
