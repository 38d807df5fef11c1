"""Command line interface: formats, exit codes, sweep handling, resume."""

import json

import pytest

from selmergraph import cli
from selmergraph.cli import (
    CSV_HEADER,
    EXIT_DEPTH,
    EXIT_INVALID,
    EXIT_MISMATCH,
    EXIT_OK,
    SweepSpec,
    dump_json,
    generate_instances,
    parse_sweep,
    report_to_dict,
)
from selmergraph.local import mutated
from selmergraph.model import validate_params
from selmergraph.selmer import verify_instance

GOOD = ["--eps", "1", "--p", "3", "--q", "5", "--d", "7"]


# -- sweep specification ------------------------------------------------------


def test_parse_sweep():
    spec = parse_sweep("p_max=13,m_set=1-6,d_prime_max=7,n_max=1,eps_set=both")
    assert spec == SweepSpec(p_max=13, m_set=(1, 2, 3, 4, 5, 6),
                             d_prime_max=7, n_max=1, eps_set=(1, -1))
    assert parse_sweep("m_set=2").m_set == (2,)
    assert parse_sweep("eps_set=+1").eps_set == (1,)
    with pytest.raises(ValueError):
        parse_sweep("p_max=13,bogus=1")
    with pytest.raises(ValueError):
        parse_sweep("p_max=abc")


def test_generate_instances_tiny_sweep():
    keys = [p.key for p in generate_instances(parse_sweep("p_max=3,m_set=1,d_prime_max=7,n_max=1"))]
    assert keys == ["+1:3:5:1", "-1:3:5:1", "+1:3:5:7", "-1:3:5:7"]


def test_generate_instances_defaults_deduplicate():
    keys = [p.key for p in generate_instances(SweepSpec(p_max=7, m_set=(1, 2),
                                                        d_prime_max=13, n_max=2))]
    assert len(keys) == len(set(keys))
    assert all(k.count(":") == 3 for k in keys)


# -- serialization ------------------------------------------------------------


def test_report_json_roundtrip_is_byte_stable():
    report = verify_instance(validate_params(1, 3, 5, 77))
    blob = dump_json(report_to_dict(report))
    assert blob == dump_json(json.loads(blob))
    data = json.loads(blob)
    assert data["schema"] == "selmergraph-instance-v1"
    assert data["key"] == "+1:3:5:77"
    assert data["checks"]["mismatches"] == 0
    assert data["checks"]["containment_ok"] is True
    assert "rank_upper_bound" in data["derived"]


def test_compute_json_format(capsys):
    assert cli.main(["compute", *GOOD, "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["schema"] == "selmergraph-compute-v1"
    assert data["agree"] is True
    assert data["results"]["descent"]["E"]["classes"] \
        == data["results"]["graph"]["E"]["classes"]
    assert data["results"]["graph"]["E"]["case"] == "G(+D).case1"
    assert data["results"]["theorem"]["Eprime"] == 2 ** data["results"]["descent"]["Eprime"]["dim"]


def test_compute_csv_format(capsys):
    assert cli.main(["compute", *GOOD, "--format", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1] == "method,family,mask,representative"
    assert any(line.startswith("descent,E,") for line in lines)
    assert any(line.startswith("graph,Eprime,") for line in lines)


def test_compute_text_format(capsys):
    assert cli.main(["compute", *GOOD]) == EXIT_OK
    out = capsys.readouterr().out
    assert "+1:3:5:7" in out or "instance" in out


def test_compute_dump_graph(tmp_path, capsys):
    target = tmp_path / "graphs.txt"
    assert cli.main(["compute", *GOOD, "--dump-graph", str(target)]) == EXIT_OK
    capsys.readouterr()
    text = target.read_text()
    assert "# family: E\n" in text and "# family: Eprime\n" in text
    assert "->" in text
    assert "# case: G(+D).case1" in text


# -- exit codes ---------------------------------------------------------------


def test_verify_good_instance(capsys):
    assert cli.main(["verify", *GOOD]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("ok   +1:3:5:7")
    assert "verified 1 instance(s): 0 failed" in out


def test_invalid_params_exit(capsys):
    assert cli.main(["compute", "--eps", "1", "--p", "4", "--q", "5", "--d", "7"]) == EXIT_INVALID
    assert cli.main(["verify", "--sweep", "bogus=3"]) == EXIT_INVALID
    assert cli.main(["compute"]) == EXIT_INVALID
    capsys.readouterr()


def test_depth_exhaustion_exit(capsys):
    assert cli.main(["verify", *GOOD, "--oracle-depth", "0"]) == EXIT_DEPTH
    capsys.readouterr()


def test_mutated_table_caught(capsys):
    with mutated("2.1(C)(1).m1:mod4", 3):
        code = cli.main(["verify", *GOOD])
    out = capsys.readouterr().out
    assert code == EXIT_MISMATCH
    assert "FAIL +1:3:5:7" in out
    assert cli.main(["verify", *GOOD]) == EXIT_OK   # back to normal
    capsys.readouterr()


def test_verify_reports_graph_gaps(capsys):
    args = ["--eps", "-1", "--p", "3", "--q", "19", "--d", "5"]
    assert cli.main(["verify", *args]) == EXIT_OK
    out = capsys.readouterr().out
    assert "graph-gap:Eprime" in out
    assert "1 outside the graph case lists" in out


# -- survey -------------------------------------------------------------------


def test_survey_and_resume(tmp_path, capsys):
    out_path = tmp_path / "survey.jsonl"
    sweep = "p_max=3,m_set=1,d_prime_max=7,n_max=1"
    assert cli.main(["survey", "--sweep", sweep, "--out", str(out_path)]) == EXIT_OK
    first = capsys.readouterr().out
    assert "survey wrote 4 new record(s)" in first
    blob = out_path.read_bytes()
    records = [json.loads(line) for line in blob.splitlines()]
    assert [r["key"] for r in records] == ["+1:3:5:1", "-1:3:5:1", "+1:3:5:7", "-1:3:5:7"]
    assert all(r["checks"]["mismatches"] == 0 for r in records)

    assert cli.main(["survey", "--sweep", sweep, "--out", str(out_path),
                     "--resume"]) == EXIT_OK
    second = capsys.readouterr().out
    assert "wrote 0 new record(s)" in second
    assert "4 skipped as done" in second
    assert out_path.read_bytes() == blob


def test_survey_spec_file(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({"p_max": 3, "m_set": [1], "d_prime_max": 7,
                                     "n_max": 0, "eps_set": [1]}))
    out_path = tmp_path / "s.jsonl"
    assert cli.main(["survey", "--spec", str(spec_path), "--out", str(out_path)]) == EXIT_OK
    capsys.readouterr()
    records = [json.loads(line) for line in out_path.read_text().splitlines()]
    assert [r["key"] for r in records] == ["+1:3:5:1"]


def test_verify_jobs_matches_serial(tmp_path, capsys):
    sweep = "p_max=3,m_set=1-2,d_prime_max=11,n_max=1"
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert cli.main(["survey", "--sweep", sweep, "--out", str(a)]) == EXIT_OK
    assert cli.main(["survey", "--sweep", sweep, "--out", str(b), "--jobs", "2"]) == EXIT_OK
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
