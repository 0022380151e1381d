import json

import pytest

from ekrmatch.cli import main, proofcheck, run_grid
from ekrmatch.family import MatchingParams, parse_vertex_name, valid_params
from ekrmatch.report import CSV_COLUMNS, GridReport, ProofCheckReport


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--p", "1", "--s", "1")
    assert code == 0 and "max=6" in out and "star=6" in out
    code, _, err = run(capsys, "verify", "--n", "1", "--p", "0", "--s", "0")
    assert code == 2 and "2p+s" in err
    code, out, _ = run(capsys, "verify", "--n", "3", "--p", "2", "--s", "1", "--format", "json")
    res = json.loads(out)["results"][0]
    assert code == 0 and res["regime"] == "degenerate" and res["max_intersecting"] == 6


def test_exit_codes(capsys):
    assert run(capsys, "verify", "--n", "4", "--p", "1", "--s", "2", "--cap", "10")[0] == 3
    assert run(capsys, "verify", "--n", "4", "--p", "3", "--s", "2")[0] == 2  # p+s > n
    assert run(capsys, "verify", "--n", "x", "--p", "1", "--s", "1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "grid")[0] == 2
    assert run(capsys, "grid", "--max-n", "0")[0] == 2
    assert run(capsys, "grid", "--max-n", "9")[0] == 2
    # skipped rows only fail the run under --strict
    assert run(capsys, "grid", "--max-n", "3", "--cap", "10")[0] == 0
    assert run(capsys, "grid", "--max-n", "3", "--cap", "10", "--strict")[0] == 3
    assert run(capsys, "enumerate", "--n", "4", "--p", "1", "--s", "2", "--cap", "10")[0] == 3


def test_grid_csv_example(capsys):
    code, out, _ = run(capsys, "grid", "--max-n", "2", "--format", "csv")
    assert code == 0 and "\r" not in out
    lines = out.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert [tuple(map(int, l.split(",")[:3])) for l in lines[1:]] == [
        (1, 0, 1), (1, 1, 0), (2, 0, 1), (2, 0, 2), (2, 1, 0), (2, 1, 1), (2, 2, 0),
    ]
    code, out, _ = run(capsys, "grid", "--max-n", "2", "--format", "csv", "--ekr-range-only")
    assert {tuple(map(int, l.split(",")[:3])) for l in out.splitlines()[1:]} == {
        (2, 1, 0), (2, 0, 1), (2, 0, 2), (1, 0, 1),
    }


@pytest.mark.parametrize("max_n", [1, 2, 3, 4])
def test_grid_completeness(max_n):
    report = run_grid(max_n)
    want = {
        (n, p, s)
        for n in range(1, max_n + 1)
        for p in range(n + 1)
        for s in range(n + 1)
        if 1 <= 2 * p + s and p + s <= n
    }
    got = [(r.n, r.p, r.s) for r in report.rows]
    assert got == sorted(want)
    assert report.failures == 0 and report.skipped == 0


def test_grid_report_round_trips(tmp_path, capsys):
    report = run_grid(3, cap=10)
    assert report.skipped and all(r.skipped == "family-cap" for r in report.rows if r.max_intersecting is None)
    assert GridReport.from_json(report.to_json()) == report
    assert GridReport.rows_from_csv(report.to_csv()) == report.rows
    path = tmp_path / "grid.json"
    assert main(["grid", "--max-n", "3", "--cap", "10", "--format", "json", "-o", str(path)]) == 0
    data = json.loads(path.read_text())
    assert set(data) == {"params", "results", "summary"}
    assert data["summary"]["skipped"] == report.skipped

    def no_floats(x):
        if isinstance(x, dict):
            return all(no_floats(v) for v in x.values())
        if isinstance(x, list):
            return all(no_floats(v) for v in x)
        return not isinstance(x, float)

    assert no_floats(data)


def test_grid_parallel_matches_serial():
    serial = run_grid(3)
    parallel = run_grid(3, jobs=2)
    strip = lambda rep: [(r.n, r.p, r.s, r.max_intersecting, r.holds) for r in rep.rows]
    assert strip(serial) == strip(parallel)


@pytest.mark.parametrize("n,p,s", [(4, 1, 2), (5, 1, 1), (2, 0, 1), (3, 2, 1), (4, 2, 0)])
def test_proofcheck_passes(n, p, s, capsys):
    code, out, _ = run(capsys, "proofcheck", "--n", str(n), "--p", str(p), "--s", str(s), "--format", "json")
    assert code == 0
    rep = ProofCheckReport.from_json(out)
    names = [c.name for c in rep.checks]
    assert names == [
        "quasi_sizes", "intersection_pattern", "quasi_extremal_bound", "pullback_membership",
        "f_independence", "counting_identity", "double_count", "inequality_chain",
    ]
    assert rep.passed


def test_proofcheck_details():
    rep = proofcheck(MatchingParams(4, 1, 2))
    f_check = next(c for c in rep.checks if c.name == "f_independence")
    assert f_check.detail["f"] == 8 and not f_check.detail["sampled"]
    rep = proofcheck(MatchingParams(5, 1, 1))
    assert next(c for c in rep.checks if c.name == "f_independence").detail["sampled"]
    rep = proofcheck(MatchingParams(5, 1, 1), map_cap=4)
    assert [c.status for c in rep.checks][3:] == ["skipped"] * 5
    assert ProofCheckReport.from_json(rep.to_json()) == rep


def test_proofcheck_strict_cap(capsys):
    assert run(capsys, "proofcheck", "--n", "5", "--p", "1", "--s", "1", "--map-cap", "4")[0] == 0
    assert run(capsys, "proofcheck", "--n", "5", "--p", "1", "--s", "1", "--map-cap", "4", "--strict")[0] == 3


def witness_sets(out):
    return [set(line.strip("[]").split()) for line in out.splitlines()]


def test_witness_examples(capsys):
    code, out, _ = run(capsys, "witness", "--n", "2", "--p", "1", "--s", "0")
    assert code == 0 and witness_sets(out) == [{"a1", "b1"}]

    code, out, _ = run(capsys, "witness", "--n", "4", "--p", "2", "--s", "0")
    sets = witness_sets(out)
    assert code == 0 and len(sets) == 3
    common = set.intersection(*sets)
    assert any({f"a{i}", f"b{i}"} <= common for i in range(1, 5))

    code, out, _ = run(capsys, "witness", "--n", "3", "--p", "0", "--s", "3", "--format", "json")
    members = json.loads(out)["results"]
    assert code == 0 and len(members) == 4 and set.intersection(*map(set, members))


@pytest.mark.parametrize("params", list(valid_params(3)), ids=str)
def test_witness_names_round_trip(params, capsys):
    code, out, _ = run(capsys, "witness", "--n", str(params.n), "--p", str(params.p), "--s", str(params.s))
    assert code == 0
    for names in witness_sets(out):
        bits = [parse_vertex_name(x) for x in names]
        assert len(set(bits)) == len(bits) == 2 * params.p + params.s
        assert all(0 <= b < 2 * params.n for b in bits)


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "2", "--p", "1", "--s", "0")
    assert code == 0 and witness_sets(out) == [{"a1", "b1"}, {"a2", "b2"}]
    code, out, _ = run(capsys, "enumerate", "--n", "3", "--p", "1", "--s", "1", "--format", "json")
    assert json.loads(out)["summary"]["family_size"] == 12
