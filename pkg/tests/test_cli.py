import json

import pytest
from click.testing import CliRunner

from hilsup.algebra import make_chain
from hilsup.cli import main, parse_range
from hilsup.io import load_algebra


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, **kw):
        return runner.invoke(main, [str(a) for a in args], **kw)

    return invoke


def test_chain_stdout(run):
    res = run("chain", 1)
    assert res.exit_code == 0
    assert json.loads(res.output)["imp"] == [[1, 1], [0, 1]]


def test_chain_file_round_trip(run, tmp_path):
    out = tmp_path / "j3.json"
    assert run("chain", 2, "--out", out).exit_code == 0
    assert load_algebra(out).same_tables(make_chain(2))


def test_chain_zero_is_usage_error(run):
    assert run("chain", 0).exit_code == 2


@pytest.mark.parametrize("n,r,size", [(1, 2, 6), (1, 1, 2), (2, 2, 16)])
def test_free_summary(run, n, r, size):
    res = run("free", "--n", n, "--r", r)
    assert res.exit_code == 0
    assert res.output.splitlines()[0] == f"size={size}"
    assert "agree=yes" in res.output


def test_free_writes_sidecar(run, tmp_path):
    out = tmp_path / "f.json"
    res = run("free", "--n", 1, "--r", 2, "--out", out)
    assert res.exit_code == 0
    assert (tmp_path / "f.header.json").exists()
    assert load_algebra(out).size == 6


def test_free_json(run):
    doc = json.loads(run("--format", "json", "free", "--n", 1, "--r", 2).output)
    assert doc["size"] == 6 and doc["alpha"] == {"1": {"1": 2}, "2": {"1": 1}}


def test_size_guard_flag_and_env(run, monkeypatch):
    res = run("--size-guard", 3, "free", "--n", 1, "--r", 2)
    assert res.exit_code == 2 and "size guard 3" in res.output
    monkeypatch.setenv("HILSUP_SIZE_GUARD", "3")
    assert run("free", "--n", 1, "--r", 2).exit_code == 2


def test_desk_guard(run):
    assert run("free", "--n", 5, "--r", 2).exit_code == 2


def test_verify_all_passes(run):
    res = run("verify", "--n", 1, "--r", 2, "--suite", "all")
    assert res.exit_code == 0, res.output
    assert "FAIL" not in res.output


def test_verify_counting_notes(run):
    res = run("verify", "--n", 1, "--r", 2, "--suite", "counting")
    assert res.exit_code == 0
    assert any(line.startswith("n=1 r=2 NOTE") and "sum to r gives 3" in line for line in res.output.splitlines())


def test_verify_bad_n(run):
    assert run("verify", "--n", 0, "--r", 1).exit_code == 2


def test_verify_failure_exit(run, monkeypatch):
    import hilsup.verify as v

    def broken(F):
        s = v._Suite("axioms")
        s.check("forced", lambda: (0, 1))
        return s.results

    monkeypatch.setitem(v.RUNNERS, "axioms", broken)
    res = run("verify", "--n", 1, "--r", 1, "--suite", "axioms")
    assert res.exit_code == 1 and "witness=[0, 1]" in res.output


def test_counts_rows(run):
    res = run("--format", "json", "counts", "--n", 1, "--r", 2)
    (rep,) = json.loads(res.output)
    rows = {(x["k"], x["p"]): x for x in rep["rows"]}
    assert (rows[1, 1]["alpha"], rows[1, 1]["eta_oracle"]) == (2, 2)
    assert (rows[2, 1]["alpha"], rows[2, 1]["eta_oracle"], rows[2, 1]["eta_literal"]) == (1, 1, 3)
    assert rows[2, 1]["flag"]


def test_bound_lines(run):
    assert "bound=2 exact=2 holds=yes" in run("bound", "--n", 1, "--r", 1).output
    assert "bound=6 exact=6 holds=yes" in run("bound", "--n", 1, "--r", 2).output


@pytest.mark.parametrize("fmt", ["json", "csv", "text"])
def test_output_is_deterministic(run, fmt):
    a = run("--format", fmt, "verify", "--n", 1, "--r", 2).output
    b = run("--format", fmt, "verify", "--n", 1, "--r", 2).output
    assert a == b


def test_dedsys_sources(run, tmp_path):
    res = run("dedsys", "--chain", 2)
    assert res.exit_code == 0 and "deductive_systems=3" in res.output
    path = tmp_path / "a.json"
    run("chain", 2, "--out", path)
    assert run("dedsys", path).output == res.output
    assert run("dedsys").exit_code == 2
    assert run("dedsys", "--n", 1).exit_code == 2
    assert "deductive_systems=" in run("dedsys", "--n", 1, "--r", 2).output


def test_parse_range():
    assert parse_range("1-3") == [1, 2, 3]
    assert parse_range("2,1") == [1, 2]
    assert parse_range("1-2,4") == [1, 2, 4]
    for bad in ("0", "3-1", "x", ""):
        with pytest.raises(Exception):
            parse_range(bad)
