import csv
import io
import json
from dataclasses import replace
from pathlib import Path

import pytest

from evencycle.errors import PreconditionError
from lab.report import SCHEMA, emit_report, format_csv, format_json, load_report
from lab.sweep import (
    COLUMNS,
    NOT_APPLICABLE,
    ORACLE_SKIPPED,
    ExperimentSpec,
    ReportRow,
    expand_instances,
    fit_exponent,
    load_spec,
    run_sweep,
    summarize,
)

SWEEPS = Path(__file__).resolve().parent.parent / "sweeps"


def _spec(**overrides):
    d = {
        "generator": "mixed",
        "params": {"n": {"range": [8, 16]}, "k": 2},
        "k": 2,
        "algorithm": "c2k",
        "seeds": {"start": 0, "count": 20},
    }
    d.update(overrides)
    return ExperimentSpec.from_dict(d)


def _row(**fields):
    base = dict(instance_id="x-00000", seed=0, family="random", n=10, m=9, k=2, algorithm="c2k", verdict="accept", oracle="accept")
    base.update(fields)
    return ReportRow(**base)


@pytest.mark.parametrize(
    "overrides",
    [
        {"k": 1},
        {"seeds": []},
        {"algorithm": "magic"},
        {"generator": "nope"},
        {"algorithm": "c4", "k": 3},
        {"colour": "blue"},
    ],
)
def test_spec_validation(overrides):
    with pytest.raises(PreconditionError):
        _spec(**overrides)


def test_load_spec_errors(tmp_path):
    with pytest.raises(PreconditionError):
        load_spec(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    with pytest.raises(PreconditionError):
        load_spec(bad)
    bad.write_text('{"k": 2}')
    with pytest.raises(PreconditionError):
        load_spec(bad)


@pytest.mark.parametrize("path", sorted(SWEEPS.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_sweeps_parse(path):
    spec = load_spec(path)
    assert expand_instances(spec)


def test_expand_instances():
    spec = _spec(params={"n": {"values": [8, 12]}, "twok": 4, "extra_edges": {"range": [0, 5]}}, generator="planted", seeds=[3, 4, 5])
    insts = expand_instances(spec)
    assert [i.instance_id for i in insts] == [f"planted-{i:05d}" for i in range(6)]
    assert [i.params["n"] for i in insts] == [8, 8, 8, 12, 12, 12]
    assert [i.seed for i in insts] == [3, 4, 5, 3, 4, 5]
    assert all(0 <= i.params["extra_edges"] <= 5 and i.params["twok"] == 4 for i in insts)
    assert insts == expand_instances(spec)


@pytest.mark.parametrize("algorithm", ["c2k", "c4", "bruteforce"])
def test_small_sweep_matches_the_oracle(algorithm):
    rows = run_sweep(_spec(algorithm=algorithm))
    assert len(rows) == 20
    assert not any(r.mismatch or r.fault for r in rows)
    assert all(r.verdict == r.oracle for r in rows)
    s = summarize(rows)
    assert s["mismatches"] == 0 and s["faults"] == 0 and s["threshold_unsound"] == 0


def test_witnesses_are_recorded():
    rows = run_sweep(_spec(generator="planted", params={"n": 12, "twok": 4, "extra_edges": 3}, seeds=[0, 1]))
    assert all(r.verdict == "reject" and len(r.witness) == 4 for r in rows)
    assert rows[0].light_rounds > 0


def test_density_sweep():
    rows = run_sweep(_spec(generator="dense", params={"k": 2}, algorithm="density_extract", seeds=[0, 1]))
    assert all(r.verdict == "reject" and r.oracle == "reject" and not r.mismatch for r in rows)


def test_density_sweep_without_violation():
    rows = run_sweep(_spec(generator="tree", params={"n": 10}, algorithm="density_extract", seeds=[0]))
    assert rows[0].verdict == NOT_APPLICABLE and not rows[0].mismatch


def test_oracle_skipped_above_the_limit():
    rows = run_sweep(_spec(oracle_max_n=5, seeds=[0, 1]))
    assert all(r.oracle == ORACLE_SKIPPED and not r.mismatch for r in rows)
    assert summarize(rows)["oracle_skipped"] == 2


def test_faults_are_recorded_per_row():
    rows = run_sweep(_spec(params={"n": 8, "k": 2}, max_rounds=3, seeds=[0]))
    assert rows[0].fault is not None and rows[0].fault.startswith("VerdictTimeout")
    assert rows[0].verdict == NOT_APPLICABLE


def test_process_pool_keeps_instance_order():
    spec = _spec(seeds={"start": 0, "count": 10})
    serial = [replace(r, wall_time=0.0) for r in run_sweep(spec, workers=1)]
    pooled = [replace(r, wall_time=0.0) for r in run_sweep(spec, workers=2)]
    assert serial == pooled


def test_fit_exponent():
    rows = [_row(n=n, rounds_used=int(10 * n**0.5)) for n in (64, 256, 1024, 4096)]
    assert fit_exponent(rows) == pytest.approx(0.5, abs=0.01)
    assert fit_exponent(rows[:1]) is None
    assert fit_exponent([_row(n=64, rounds_used=5, fault="x"), rows[0]]) is None


def test_summary_counts_unsound_thresholds():
    rows = [_row(threshold_fired=True, verdict="reject", oracle="accept", mismatch=True), _row()]
    s = summarize(rows)
    assert s["threshold_fired"] == 1
    assert s["threshold_unsound"] == 1
    assert s["mismatches"] == 1


# ------------------ Reports ------------------
def test_empty_csv_is_header_only():
    assert format_csv([]) == ",".join(COLUMNS) + "\n"


def test_csv_cells():
    text = format_csv([_row(witness=(0, 2, 1, 3), threshold_fired=True)])
    header, row = list(csv.reader(io.StringIO(text)))
    assert tuple(header) == COLUMNS
    cells = dict(zip(header, row))
    assert cells["witness"] == "0 2 1 3"
    assert cells["threshold_fired"] == "true"
    assert cells["fault"] == ""


def test_json_report_reloads(tmp_path):
    rows = [_row(witness=(0, 2, 1, 3), verdict="reject", oracle="reject"), _row(instance_id="x-00001")]
    path = tmp_path / "report.json"
    emit_report(rows, path, "json", summarize(rows))
    data = json.loads(path.read_text())
    assert data["schema"] == SCHEMA
    assert data["columns"] == list(COLUMNS)
    loaded, summary = load_report(path)
    assert loaded == rows
    assert summary["instances"] == 2


def test_report_errors(tmp_path):
    with pytest.raises(ValueError):
        emit_report([], tmp_path / "r.txt", "xml")
    with pytest.raises(OSError):
        emit_report([], tmp_path / "missing" / "r.csv")
    other = tmp_path / "other.json"
    other.write_text(format_json([]).replace(SCHEMA, "something/2"))
    with pytest.raises(ValueError):
        load_report(other)


def test_report_to_stdout(capsys):
    emit_report([_row()], "-")
    assert capsys.readouterr().out.startswith("instance_id,seed,family")


# ------------------ Acceptance sweeps ------------------
@pytest.mark.slow
@pytest.mark.parametrize("name", ["k2_oracle", "k2_oracle_c4", "k3_oracle", "polarity", "density_k2", "density_k3"])
def test_acceptance_sweep(name):
    rows = run_sweep(load_spec(SWEEPS / f"{name}.json"))
    s = summarize(rows)
    assert s["mismatches"] == 0
    assert s["faults"] == 0
    assert s["threshold_unsound"] == 0
    if name == "polarity":
        assert s["threshold_fired"] == 0 and s["rejects"] == 0


@pytest.mark.slow
def test_algorithms_agree_for_four_cycles():
    c2k = run_sweep(load_spec(SWEEPS / "k2_oracle.json"))
    c4 = run_sweep(load_spec(SWEEPS / "k2_oracle_c4.json"))
    assert [r.verdict for r in c2k] == [r.verdict for r in c4]


@pytest.mark.slow
@pytest.mark.parametrize(("name", "limit"), [("scaling_k2", 0.6), ("scaling_k3", 0.77)])
def test_round_scaling(name, limit):
    rows = run_sweep(load_spec(SWEEPS / f"{name}.json"))
    assert not any(r.fault for r in rows)
    assert fit_exponent(rows) <= limit
