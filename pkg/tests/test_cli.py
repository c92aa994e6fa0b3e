import csv
import io
import json

import pytest

from fgc.cache import CACHE_VERSION, atomic_write_json, clear, list_entries, read_json
from fgc.cli import RunConfig, main, read_config_file
from fgc.errors import ParseError


@pytest.fixture
def run(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("FGC_CACHE", str(tmp_path / "cache"))

    def _run(*argv):
        code = main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    return _run


def test_count_j(run):
    assert run("count-j", "--a", "2", "--q", "3", "--n", "2", "--k", "1")[:2] == (0, "12\n")
    assert run("count-j", "--a", "2", "--q", "3", "--n", "2")[1] == "14\n"
    code, out, _ = run("--format", "json", "count-j", "--a", "4", "--q", "3", "--n", "2", "--all")
    rep = json.loads(out)
    assert rep["total"] == "20" and rep["per_det"][1]["empty_coset"]


def test_dim_and_verify_table(run):
    assert run("dim", "--sig", "0;2,3,7", "--n", "42")[:2] == (0, "1805\n")
    code, out, _ = run("dim", "--sig", "0;2,4,6", "--n", "12", "--oracle")
    assert code == 0 and json.loads(out)["agrees"]
    code, out, _ = run("verify", "table", "--a-max", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert [l.split("\t")[0] for l in lines] == ["a=2", "a=3"]
    assert all(l.endswith("ok") for l in lines)


def test_global_options_after_subcommand(run):
    code, out, _ = run("verify", "table", "--a-max", "2", "--format", "json")
    assert code == 0 and json.loads(out)["pass"]


def test_compare_csv(run):
    code, out, _ = run("--trunc", "60", "--precision", "20", "compare", "--a", "2", "--q", "5", "--k", "0",
                       "--n-min", "8", "--n-max", "12", "--step", "4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["n"] for r in rows] == ["8", "12"]
    assert "/" in rows[0]["predicted_exponent"]
    assert abs(float(rows[1]["ratio_minus_one"])) < 1e-3


def test_other_subcommands(run):
    assert run("count-J", "--periods", "2,2", "--q", "3", "--n", "2")[1] == "148\n"
    assert json.loads(run("orbits", "--a", "4", "--q", "3")[1])["lengths"] == [2, 1, 1]
    assert json.loads(run("alpha", "--shape", "3,1")[1])["alpha"] == "2/3"
    code, out, _ = run("hurwitz", "--sig", "0;2,2,2", "--group", "sym", "--m", "3", "--brute-force")
    data = json.loads(out)
    assert code == 0 and data["total_hom_count"] == "10" and data["agrees"]
    code, out, _ = run("--precision", "20", "--trunc", "80", "predict", "--a", "2", "--q", "5", "--n", "6")
    assert code == 0 and "mantissa" in json.loads(out)
    code, out, _ = run("--precision", "20", "--trunc", "80", "hom-predict", "--sig", "1;2", "--q", "5", "--n", "1")
    assert code == 0 and json.loads(out)["exact_linear_term"] == "16"
    code, out, _ = run("verify", "positive-genus")
    assert code == 0 and json.loads(out)["pass"]


def test_hurwitz_from_table_file(run, tmp_path):
    from fgc.characters import compute_character_table
    from fgc.groups import symmetric_group

    path = tmp_path / "s3.json"
    compute_character_table(symmetric_group(3)).save(path)
    code, out, _ = run("hurwitz", "--sig", "1;2", "--table", str(path))
    assert code == 0 and json.loads(out)["total_hom_count"] == "18"


def test_exit_codes(run):
    assert run("bogus")[0] == 2
    assert run("count-j", "--a", "2")[0] == 2
    code, _, err = run("count-j", "--a", "2", "--q", "6", "--n", "2")
    assert code == 1 and "NotPrimePower" in err
    assert run("dim", "--sig", "oops", "--n", "3")[0] == 2
    assert run("--precision", "5", "dim", "--sig", "0;2,3,7", "--n", "3")[0] == 2


def test_selftest_and_cache(run, tmp_path):
    code, out, _ = run("--format", "json", "selftest", "quick")
    assert code == 0 and json.loads(out)["pass"]
    code, out, _ = run("cache", "list")
    assert any(name.startswith("cert_a") for name in json.loads(out)["entries"])
    code, out, _ = run("cache", "clear")
    assert json.loads(out)["removed"] >= 1
    assert json.loads(run("cache", "list")[1])["entries"] == []


def test_config_file(tmp_path, run):
    cfg = tmp_path / "fgc.conf"
    cfg.write_text("# defaults\nprecision = 25\ntrunc=90\n")
    assert read_config_file(cfg) == {"precision": "25", "trunc": "90"}
    assert run("--config", str(cfg), "count-j", "--a", "2", "--q", "3", "--n", "2", "--k", "0")[1] == "2\n"
    cfg.write_text("colour = blue\n")
    assert run("--config", str(cfg), "count-j", "--a", "2", "--q", "3", "--n", "2")[0] == 2
    cfg.write_text("no equals sign\n")
    with pytest.raises(ParseError):
        read_config_file(cfg)


def test_run_config_validation(tmp_path):
    with pytest.raises(ParseError):
        RunConfig(tmp_path, precision=5)
    with pytest.raises(ParseError):
        RunConfig(tmp_path, jobs=0)
    with pytest.raises(ParseError):
        RunConfig(tmp_path, format="xml")


def test_cache_helpers(tmp_path):
    p = tmp_path / "x.json"
    atomic_write_json(p, {"cache_version": CACHE_VERSION, "v": "123456789012345678901234567890"})
    assert int(read_json(p)["v"]) == 123456789012345678901234567890
    atomic_write_json(p, {"cache_version": CACHE_VERSION + 1})
    assert read_json(p) is None
    p.write_text("{")
    assert read_json(p) is None
    assert read_json(tmp_path / "missing.json") is None
    assert list_entries(tmp_path) == [p] and clear(tmp_path) == 1
    assert not list(tmp_path.glob("*.tmp"))
