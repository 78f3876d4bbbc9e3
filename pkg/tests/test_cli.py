import json

import pytest

from dyerlashof.cli import main
from dyerlashof.config import ConfigError, load_context, load_presentation, presentation_from_dict
from dyerlashof.scenarios import SCENARIOS, ScenarioSpec, run_scenario, run_spec


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_eval_examples(capsys):
    assert run(capsys, "eval", "Q^2 xi1", "--context", "p2-dual")[:2] == (0, "xi2 + xi1^3")
    assert run(capsys, "eval", "Q^3 1")[:2] == (0, "0")
    assert run(capsys, "eval", "b Q^1 tau0", "--context", "p3-dual", "--basis", "conjugate")[:2] == (0, "2 zeta1")
    assert run(capsys, "eval", "Q^2 xi1", "--context", "p2-dual", "--side", "right")[:2] == (0, "xi2")


def test_eval_errors(capsys):
    code, _, err = run(capsys, "eval", "Q^2 xi1 +")
    assert code == 2 and "position 9" in err
    code, _, err = run(capsys, "eval", "Q^2 tau0", "--context", "p3-dual")
    assert code == 1 and "Q^2 tau0" in err


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "Q^2 xi1", "--json")
    assert json.loads(out)["value"] == "xi2 + xi1^3"


def test_presentation_config(tmp_path, capsys):
    cfg = tmp_path / "x.yaml"
    cfg.write_text(
        "prime: 2\nbound: 3\n"
        "generators: [{name: xi1, degree: 1}, {name: xi2, degree: 3}]\n"
        'relations: ["xi1^4", "xi2^2", "xi1 * xi2", "xi1^3 + xi2"]\n'
        'q_values: ["Q^2 xi1 = xi1^3"]\n'
    )
    X = load_presentation(cfg)
    assert X.poincare_series() == [1, 1, 1, 1]
    assert run(capsys, "eval", "Q^2 xi1", "--context", str(cfg))[:2] == (0, "xi1^3")
    assert run(capsys, "eval", "Q^2 xi1 + xi2", "--context", str(cfg))[:2] == (0, "0")


def test_dual_config_with_entry(tmp_path):
    cfg = tmp_path / "d.json"
    cfg.write_text(json.dumps({
        "prime": 3, "bound": 18, "dual_steenrod": True,
        "table": [{"side": "left", "entry": "Q^1 xi1 = 0", "provenance": "instability"}],
    }))
    sd = load_context(str(cfg))
    assert sd.table("left")[(((0, 1),), "xi1")].provenance == "instability"
    bad = tmp_path / "bad.yaml"
    bad.write_text("prime: 3\ndual_steenrod: true\ntable: [{side: left, entry: 'Q^1 xi1 = 0'}]\n")
    with pytest.raises(ConfigError):
        load_context(str(bad))


def test_config_errors():
    with pytest.raises(ConfigError):
        presentation_from_dict({"prime": 4, "bound": 2})
    with pytest.raises(ConfigError):
        presentation_from_dict({"prime": 2, "bound": 2, "generators": [{"name": "x"}]})


def test_run_examples(capsys):
    code, out, _ = run(capsys, "run", "classify-table", "--p", "2", "--n-max", "6")
    assert code == 0 and "p=2 n=2: COLLAPSE" in out
    code, out, _ = run(capsys, "run", "empty", "--json", "--no-time")
    doc = json.loads(out)
    assert code == 0 and doc["report"]["passed"] and doc["schema_version"] == 1


def test_run_unknown(capsys):
    code, _, err = run(capsys, "run", "nope")
    assert code == 2 and "unknown scenario" in err


def test_exit_code_on_failure():
    from dyerlashof.scenarios import Assertion

    spec = ScenarioSpec("failing", None, None, (lambda state: [Assertion("one", 1, 2, "TRIVIAL")],))
    rep = run_spec(spec)
    assert not rep.passed
    crash = ScenarioSpec("crash", None, None, (lambda state: 1 / 0,))
    rep = run_spec(crash)
    assert not rep.passed and "ZeroDivisionError" in rep.error


def test_report_determinism():
    a = run_scenario("example-fp-p2").to_json(with_time=False)
    b = run_scenario("example-fp-p2").to_json(with_time=False)
    assert a == b
    assert "wall_time" not in json.dumps(json.loads(a)["report"])


def test_all_scenarios_pass_in_parallel(capsys):
    code, out, _ = run(capsys, "run", "--all", "--parallel")
    assert code == 0
    assert out.count(": PASS") == len(SCENARIOS)


def test_every_assertion_has_provenance():
    for name in SCENARIOS:
        for a in run_scenario(name).assertions:
            assert a.provenance in ("PAPER", "TRIVIAL", "DERIVED")


def test_classify_and_free(capsys):
    code, out, _ = run(capsys, "classify", "--p", "5", "--n-max", "8", "--json")
    rows = json.loads(out)["5"]
    assert rows[8]["collapse"]["verdict"] == "COLLAPSE"
    code, out, _ = run(capsys, "free", "zeta1@4", "taubar1@5", "--p", "3", "--bound", "16", "--json")
    data = json.loads(out)
    assert data["generators"][2] == {"word": "b Q^3 zeta1", "degree": 15, "parity": "odd"}
