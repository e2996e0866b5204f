import csv
import json

import pytest

from scatterlab.cli import main

REFERENCE = {"p": 2, "h": 1, "n": 3, "m": 3, "I": 1, "J": 2,
             "alphas": [[1, 0, 0], [1, 0, 0], [0, 1, 0]]}
ALL_ONES = dict(REFERENCE, alphas=[[1, 0, 0]] * 3)
IN_RANGE = {"p": 2, "h": 1, "n": 6, "m": 3, "I": 1, "J": 2,
            "alphas": [[1, 0, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]]}
SWEEP = {"p": 2, "h": 1, "n": 3, "m": 3, "I": 1, "J": 2}


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_check_reports_reference(capsys, write):
    code, out = run(capsys, "check", "--config", write({"spec": REFERENCE}))
    assert code == 0
    obj = json.loads(out)
    assert obj["command"] == "check" and obj["modulus"] == [1, 1, 0, 1]
    assert obj["result"]["checks"]["scattered"]["verdict"] == "guaranteed"
    assert obj["result"]["q_bound"]["Q"] == "245"


def test_verify_exit_codes(capsys, write):
    ok = {"spec": REFERENCE, "properties": ["scattered", {"name": "evasive", "h": 1, "r": 1}]}
    assert run(capsys, "verify", "--config", write(ok))[0] == 0
    bad = {"spec": ALL_ONES, "properties": ["scattered"]}
    code, out = run(capsys, "verify", "--config", write(bad))
    assert code == 1
    assert json.loads(out)["result"][0]["witness"]["fiber_size"] == 3


def test_budget_exceeded_exit_code(capsys, write):
    cfg = write({"spec": REFERENCE, "properties": ["scattered"]})
    assert run(capsys, "verify", "--config", cfg, "--budget", "100")[0] == 3


@pytest.mark.parametrize("cfg", [
    "{not json",
    {"spec": dict(REFERENCE, alphas=None)},
    {"spec": {k: v for k, v in REFERENCE.items() if k != "alphas"}},
    {"spec": dict(REFERENCE, J=5)},
    {"spec": REFERENCE, "properties": ["bogus"]},
    {"spec": REFERENCE, "properties": [{"name": "evasive", "h": 2}]},
    {"spec": REFERENCE, "mode": "quantum"},
    [1, 2, 3],
])
def test_bad_configs_exit_2(capsys, write, cfg):
    assert run(capsys, "verify", "--config", write(cfg))[0] == 2


def test_missing_config_file_exits_2(capsys, tmp_path):
    assert run(capsys, "check", "--config", str(tmp_path / "absent.json"))[0] == 2


def test_equiv_commands(capsys, write):
    code, out = run(capsys, "equiv", "--config", write({"a": IN_RANGE, "b": IN_RANGE}))
    assert code == 0 and json.loads(out)["result"]["verdict"] == "equivalent"
    other = dict(IN_RANGE, J=3)
    code, out = run(capsys, "equiv", "--config", write({"a": IN_RANGE, "b": other}))
    assert code == 0 and json.loads(out)["result"]["verdict"] == "inequivalent-by-index"


def test_equiv_outside_range_exits_4(capsys, write):
    assert run(capsys, "equiv", "--config", write({"a": REFERENCE, "b": REFERENCE}))[0] == 4
    code, out = run(capsys, "equiv", "--config",
                    write({"a": REFERENCE, "b": REFERENCE, "strict": False}))
    assert code == 0 and json.loads(out)["result"]["in_theorem_range"] is False


def test_equiv_needs_both_specs(capsys, write):
    assert run(capsys, "equiv", "--config", write({"spec": REFERENCE}))[0] == 2


def test_output_is_deterministic_across_workers(capsys, write, tmp_path):
    cfg = write({"spec": REFERENCE, "properties": ["scattered", {"name": "evasive", "h": 2, "r": 3}]})
    outs = []
    for w in ("1", "3"):
        path = tmp_path / f"out{w}.json"
        assert run(capsys, "verify", "--config", cfg, "--workers", w, "--out", str(path))[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_sampled_verify_depends_only_on_seed(capsys, write):
    cfg = write({"spec": REFERENCE, "mode": "sampled",
                 "properties": [{"name": "evasive", "h": 3, "r": 5}]})
    a = run(capsys, "verify", "--config", cfg, "--seed", "4", "--budget", "200")[1]
    b = run(capsys, "verify", "--config", cfg, "--seed", "4", "--budget", "200")[1]
    assert a == b and json.loads(a)["seed"] == 4


# -- sweeps ---------------------------------------------------------------------------------------------


def _lines(path):
    return path.read_text().splitlines()


def test_random_sweep_writes_count_records(capsys, write, tmp_path):
    out = tmp_path / "rand.jsonl"
    cfg = write({"sweep": dict(SWEEP, mode="random", count=100)})
    assert run(capsys, "sweep", "--config", cfg, "--out", str(out), "--seed", "5")[0] == 0
    lines = _lines(out)
    assert len(lines) == 101
    assert json.loads(lines[0])["type"] == "header"
    assert [json.loads(x)["position"] for x in lines[1:]] == list(range(100))


def test_exhaustive_sweep_summary(capsys, write, tmp_path):
    out = tmp_path / "all.jsonl"
    cfg = write({"sweep": dict(SWEEP, spot_check_rate=0.2)})
    assert run(capsys, "sweep", "--config", cfg, "--out", str(out))[0] == 0
    assert len(_lines(out)) == 344
    with open(tmp_path / "all.summary.csv") as fh:
        summary = {row["metric"]: row["value"] for row in csv.DictReader(fh)}
    assert summary["records"] == "343"
    assert summary["scattered_and_all_delta"] == "294"
    assert int(summary["scattered_and_all_delta"]) >= int(summary["Q_bound"]) == 245
    assert summary["soundness_violations"] == "0"
    assert int(summary["spot_checks"]) > 0


def test_sweep_resume_has_no_duplicates(capsys, write, tmp_path):
    out = tmp_path / "resume.jsonl"
    cfg = write({"sweep": dict(SWEEP, mode="random", count=60)})
    assert run(capsys, "sweep", "--config", cfg, "--out", str(out))[0] == 0
    full = out.read_bytes()
    lines = full.splitlines(keepends=True)
    # simulate an interrupt: keep 20 records and a torn partial line
    out.write_bytes(b"".join(lines[:21]) + lines[21][:10])
    assert run(capsys, "sweep", "--config", cfg, "--out", str(out))[0] == 0
    assert out.read_bytes() == full


def test_sweep_refuses_foreign_file(capsys, write, tmp_path):
    out = tmp_path / "s.jsonl"
    a = write({"sweep": dict(SWEEP, mode="random", count=5)}, "a.json")
    b = write({"sweep": dict(SWEEP, mode="random", count=6)}, "b.json")
    assert run(capsys, "sweep", "--config", a, "--out", str(out))[0] == 0
    assert run(capsys, "sweep", "--config", b, "--out", str(out))[0] == 2


def test_sweep_missing_key(capsys, write, tmp_path):
    cfg = write({"sweep": {k: v for k, v in SWEEP.items() if k != "m"}})
    assert run(capsys, "sweep", "--config", cfg, "--out", str(tmp_path / "x.jsonl"))[0] == 2
