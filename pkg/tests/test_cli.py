import json

import pytest

from conftest import complete_multipartite, cycle
from k4bb.cli import main, parse_eps, run
from k4bb.graph import read_graph, write_graph
from fractions import Fraction


@pytest.fixture
def k222_file(tmp_path):
    p = tmp_path / "k222.txt"
    write_graph(p, complete_multipartite(2, 2, 2))
    return str(p)


@pytest.fixture
def c5_file(tmp_path):
    p = tmp_path / "c5.txt"
    write_graph(p, cycle(5))
    return str(p)


def test_oracle_bb(k222_file):
    code, report = run(["oracle", "bb", k222_file])
    assert code == 0
    assert report.results["optimum"] == 4


def test_oracle_sweep():
    code, report = run(["oracle", "sweep", "5"])
    assert code == 0 and report.results["violations"] == 0


def test_nice_check_reports_verdict(c5_file):
    code, report = run(["nice", "check", c5_file])
    assert code == 0
    assert report.results["verdict"] is False


def test_partition_commands(k222_file):
    for argv in (["partition", "auto", k222_file],
                 ["partition", "tripartite", k222_file, "--parts", "0,1|2,3|4,5"],
                 ["partition", "two-ind", k222_file, "--i1", "0,1", "--i2", "2,3"],
                 ["partition", "local", k222_file, "--seed", "3"]):
        code, report = run(argv)
        assert code == 0, (argv, report.lines)


def test_flags_eval(c5_file):
    code, report = run(["flags", "eval", c5_file])
    assert code == 0
    assert report.results["value"] == Fraction(44, 225)


def test_flags_cut(k222_file):
    code, report = run(["flags", "cut", k222_file, "--root-edge", "0,2"])
    assert code == 0
    assert all(c["dominated"] for c in report.results["cuts"])


def test_flags_manifest_round_trips():
    from k4bb.flags import EXPRESSIONS, parse_manifest

    code, report = run(["flags", "manifest"])
    assert code == 0
    assert parse_manifest(report.results["manifest"])[0] == EXPRESSIONS


def test_missing_file_exit_2(tmp_path):
    assert run(["oracle", "bb", str(tmp_path / "absent.txt")])[0] == 2


def test_malformed_graph_exit_2(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("2 1\n0 0\n")
    assert run(["oracle", "bb", str(p)])[0] == 2


def test_precondition_exit_1(c5_file):
    code, report = run(["flags", "cut", c5_file, "--root-edge", "0,2"])
    assert code == 1
    assert report.results["kind"] == "precondition"


def test_usage_exit_64(capsys):
    assert main(["bogus"]) == 64
    assert main([]) == 64
    assert main(["flags", "cut"]) == 64


def test_gen_writes_file(tmp_path):
    out = tmp_path / "g.txt"
    assert main(["gen", "complete-tripartite", "2", "2", "2", "-o", str(out)]) == 0
    g = read_graph(out)
    assert (g.n, g.edge_count) == (6, 12)


def test_gen_rejects_bad_family_params():
    assert run(["gen", "turan", "3", "4"])[0] == 1
    assert run(["gen", "turan", "x"])[0] == 64


def test_json_stable_apart_from_timing(k222_file, capsys):
    outs = []
    for _ in range(2):
        assert main(["partition", "auto", k222_file, "--json", "--seed", "5"]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["input_digest"].startswith("sha256:")
        body.pop("timing")
        outs.append(body)
    assert outs[0] == outs[1]
    assert set(outs[0]) == {"command", "input_digest", "results", "version", "backend"}


def test_rationals_in_json(c5_file, capsys):
    main(["flags", "eval", c5_file, "--json"])
    body = json.loads(capsys.readouterr().out)
    assert body["results"]["value"]["num"] == 44 and body["results"]["value"]["den"] == 225


def test_verify_suite():
    code, report = run(["verify", "flags"])
    assert code == 0 and report.results["passed"]
    assert run(["verify", "nonsense"])[0] == 64


def test_parse_eps():
    assert parse_eps("1/10000") == parse_eps("1e-4") == Fraction(1, 10000)
