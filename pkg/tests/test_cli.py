import json

import pytest

from fgdt import cli
from fgdt import design as dsg
from fgdt import group as grp


def run(capsys, *args):
    code = cli.main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- parsing


@pytest.mark.parametrize("text,qs", [("9", (9,)), ("7..16", (7, 8, 9, 11, 13, 16)), ("14..15", ())])
def test_parse_q(text, qs):
    assert cli.parse_q(text)[0] == qs


@pytest.mark.parametrize("text", ["6", "x", "9..7", "1"])
def test_parse_q_usage_errors(text):
    with pytest.raises(cli.UsageError):
        cli.parse_q(text)


def test_cache_env_overrides_flag(monkeypatch, tmp_path):
    monkeypatch.setenv("FGDT_CACHE", str(tmp_path / "env"))
    cfg = cli.build_config(["verify", "--q", "9", "--cache", str(tmp_path / "flag")])
    assert cfg.cache == str(tmp_path / "env")
    monkeypatch.delenv("FGDT_CACHE")
    assert cli.build_config(["verify", "--q", "9", "--cache", "c"]).cache == "c"


# ---------------------------------------------------------------- verify


def test_verify_non_prime_power_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "--q", "6")
    assert code == 2 and "not a prime power" in err


def test_verify_single_claim(capsys):
    code, out, _ = run(capsys, "verify", "--q", "9", "--claim", "Syl")
    reports = json.loads(out)
    assert code == 0 and len(reports) == 1 and reports[0]["claim"] == "Syl"


def test_verify_claim_invalid_for_q_is_usage_error(capsys):
    assert run(capsys, "verify", "--q", "8", "--claim", "Syl")[0] == 2
    assert run(capsys, "verify", "--q", "9", "--claim", "nope")[0] == 2


def test_verify_failure_exits_one(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, err = run(capsys, "verify", "--q", "9", "--claim", "BF", "--out", str(out))
    assert code == 1 and "fail=1" in err
    assert json.loads(out.read_text())[0]["status"] == "fail"


def test_verify_skip_only_exits_zero(capsys):
    code, out, _ = run(capsys, "verify", "--q", "13", "--claim", "Syl", "--format", "text")
    assert code == 0 and out.startswith("Syl") and "skipped" in out


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--q", "5..7", "--claim", "Elle", "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("claim,q,status")
    assert len(out.splitlines()) == 3


def test_verify_output_is_deterministic_across_jobs(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--q", "5..13", "--claim", "Elle,census,Syl,LSR1"]
    assert run(capsys, *args, "--out", str(a), "--jobs", "1")[0] == 0
    assert run(capsys, *args, "--out", str(b), "--jobs", "3")[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_bad_flag_is_usage_error(capsys):
    assert run(capsys, "verify", "--nope")[0] == 2
    assert run(capsys, "verify", "--jobs", "0")[0] == 2
    assert run(capsys)[0] == 2


# ---------------------------------------------------------------- design


def test_design_table1_line5(capsys, tmp_path):
    path = tmp_path / "t5.blocks"
    code, out, _ = run(capsys, "design", "--table1", "5", "--out", str(path))
    assert code == 0 and "certified: true" in out
    D, lam = dsg.read_blocks(path)
    assert (D.v, D.b, lam) == (11, 11, 2)
    assert dsg.certify_design(D, 2).k == 5
    assert (tmp_path / "t5.blocks.labels.json").exists()


def test_design_wbs8(capsys, tmp_path):
    path = tmp_path / "w8.blocks"
    code, out, _ = run(capsys, "design", "--wbs", "8", "--out", str(path), "--format", "json")
    summary = json.loads(out)
    assert code == 0 and summary["lambda"] == 1 and summary["v"] == 28
    D, lam = dsg.read_blocks(path)
    assert lam == 1 and dsg.certify_design(D, 1).as_tuple() == (28, 63, 9, 4)


def test_design_to_stdout(capsys):
    code, out, err = run(capsys, "design", "--table1", "1")
    assert code == 0 and out.splitlines()[0] == "6 10 3 2" and "flag_transitive: true" in err


def test_design_line6_reports_printed_k(capsys, tmp_path):
    code, out, _ = run(capsys, "design", "--table1", "6", "--out", str(tmp_path / "t6"), "--format", "json")
    s = json.loads(out)
    assert code == 0 and s["k"] == 3 and s["printed_k"] == 7


@pytest.mark.parametrize("args", [["--table1", "10"], ["--table1", "0"], ["--wbs", "7"], ["--wbs", "4"], ["--wbs", "8", "--k", "3"], []])
def test_design_usage_errors(capsys, args):
    assert run(capsys, "design", *args)[0] == 2


def test_design_search_failure_exits_one(capsys):
    # no PSL(2,5)-invariant 2-(6,4,2) design exists with a flag-transitive orbit structure
    code, _, err = run(capsys, "design", "--table1", "1", "--k", "4")
    assert code == 1 and "table1 line 1" in err


# ---------------------------------------------------------------- search


def test_search_type1_q16(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--type", "I", "--q", "16", "--out", str(tmp_path / "s"))
    s = json.loads(out)
    assert code == 0 and s["designs"] == 0 and s["points"] == 120 and s["k"] == 8
    assert json.loads((tmp_path / "s" / "summary.json").read_text()) == s


def test_search_type2_q9(capsys):
    code, out, _ = run(capsys, "search", "--type", "II", "--q", "9")
    assert code == 0 and json.loads(out)["designs"] == 0


def test_search_q5_internal_is_usage_error(capsys):
    code, _, err = run(capsys, "search", "--q", "5", "--k", "3", "--lambda", "2", "--points", "internal")
    assert code == 2 and "q > 5" in err


def test_search_streams_found_designs(capsys, tmp_path):
    # a 2-(21,6,4) design on the internal points of PG(2,7) exists in the searched family
    out_dir = tmp_path / "found"
    code, out, _ = run(capsys, "search", "--q", "7", "--points", "internal", "--k", "6", "--lambda", "4", "--out", str(out_dir))
    s = json.loads(out)
    assert code == 0 and s["designs"] == 1
    assert s["files"] == ["design-000.blocks"]
    for name in s["files"]:
        D, lam = dsg.read_blocks(out_dir / name)
        assert dsg.is_design(D, lam)


@pytest.mark.parametrize(
    "args",
    [
        ["--q", "9"],
        ["--q", "8", "--type", "I"],
        ["--q", "9", "--type", "I"],
        ["--q", "9", "--type", "I", "--points", "internal"],
        ["--q", "7..9", "--type", "II"],
        ["--q", "9", "--type", "II", "--k", "1"],
        ["--q", "9", "--type", "II", "--lambda", "0"],
    ],
)
def test_search_usage_errors(capsys, args):
    assert run(capsys, "search", *args)[0] == 2


def test_search_resource_cap(capsys):
    code, _, err = run(capsys, "search", "--type", "I", "--q", "64")
    assert code == 3 and "resource cap" in err


def test_search_cap_from_engine(capsys, monkeypatch):
    def capped(*a, **k):
        raise dsg.SearchCapExceeded("more than 1 candidates")

    monkeypatch.setattr(cli.ver, "type2_search", capped)
    assert run(capsys, "search", "--type", "II", "--q", "7")[0] == 3


def test_cache_dir_is_populated(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FGDT_CACHE", str(tmp_path))
    grp._memo.clear()
    try:
        assert run(capsys, "design", "--table1", "1")[0] == 0
        assert any(p.name.startswith("group-") for p in tmp_path.iterdir())
    finally:
        grp.set_cache_dir(None)
        grp._memo.clear()


def test_desk_range_fails_only_on_known_findings(capsys, tmp_path):
    """The 7..16 sweep exits 1; the failures are exactly the claims that do not hold as stated."""
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "--q", "7..16", "--out", str(out), "--jobs", "2")
    fails = {(r["claim"], r["q"]) for r in json.loads(out.read_text()) if r["status"] == "fail"}
    assert code == 1
    assert fails == {("BF", 9), ("conicsol", 7), ("conicsol", 11), ("q1mod4", 7), ("q1mod4", 11)}
