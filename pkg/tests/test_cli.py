import subprocess
import sys

import pytest

from msrsearch.cli import main
from msrsearch.codefile import CodeDocument, format_report, load, parse_report, serialize
from msrsearch.conditions import verify
from msrsearch.galois import make_field
from msrsearch.linalg import FieldMatrix, vstack
from msrsearch.model import CodeParameters
from msrsearch.search import SearchConfig, run_search

from conftest import FIXTURES, worked_seed

APPENDIX_FILES = ["appendix_gf3_systematic.msr", "appendix_gf7_systematic.msr"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def report_of(text):
    return parse_report(text.split("code:")[0])


@pytest.mark.parametrize("name", APPENDIX_FILES + ["seed_gf3_5_3.msr", "worked_4_2_gf3.msr"])
def test_verify_fixture_ok(capsys, name):
    code, out, _ = run(capsys, "verify", FIXTURES / name)
    assert code == 0
    assert "FAIL" not in out and out.startswith("independence OK")


def test_verify_perturbed_fixture_fails(capsys, tmp_path):
    doc = load(FIXTURES / "appendix_gf3_systematic.msr")[0]
    a4 = [list(r) for r in doc.matrices["A4"].rows]
    a4[0][0] = (a4[0][0] + 1) % 3
    doc.matrices["A4"] = FieldMatrix.from_rows(doc.field, a4)
    path = tmp_path / "perturbed.msr"
    path.write_text(serialize(doc))
    code, out, _ = run(capsys, "verify", path)
    assert code == 1
    # the witness names a node subset containing 4, or a node whose repair broke
    fails = [l for l in out.splitlines() if "FAIL" in l]
    assert fails
    assert all(l.startswith("recovery node") or "4" in l.split()[-1].split(",") for l in fails)


def test_verify_general_position(capsys):
    code, out, _ = run(capsys, "verify", "--general-position", FIXTURES / "seed_gf17_5_3_general_position.msr")
    assert code == 0 and out.rstrip().endswith("general-position OK")
    code, out, _ = run(capsys, "verify", "--general-position", FIXTURES / "appendix_gf3_systematic.msr")
    # general position is reported but only independence and repair set the exit code
    assert code == 0 and "general-position FAIL" in out
    assert "recovery node 5 OK" in out


def test_verify_parse_error_reports_line(capsys, tmp_path):
    text = (FIXTURES / "worked_4_2_gf3.msr").read_text().replace("params 4 2", "params 4 two")
    path = tmp_path / "bad.msr"
    path.write_text(text)
    code, _, err = run(capsys, "verify", path)
    assert code == 2 and "line 4:" in err


def test_verify_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "verify", tmp_path / "nope.msr")
    assert code == 2 and "cannot read" in err


def test_systematic_worked_example(capsys, tmp_path):
    out_path = tmp_path / "sys.msr"
    code, out, _ = run(capsys, "systematic", FIXTURES / "worked_4_2_gf3.msr", out_path)
    assert code == 0
    assert out.splitlines() == ["matrix T 4 4", "1 0 0 0", "0 0 1 0", "0 1 2 0", "0 2 1 1"]
    doc = load(out_path)[0]
    seed = doc.to_seed()
    assert seed.base.rows == ((1, 0, 0, 0), (0, 1, 0, 0))
    storage = seed.storage()
    assert vstack(storage[:2]) == FieldMatrix.identity(seed.field, 4)
    assert verify(doc.to_code()).ok


def test_systematic_of_systematic_is_identity(capsys, tmp_path):
    out_path = tmp_path / "again.msr"
    code, out, _ = run(capsys, "systematic", FIXTURES / "appendix_gf3_systematic.msr", out_path)
    assert code == 0
    assert out.splitlines()[1:] == [" ".join("1" if i == j else "0" for j in range(6)) for i in range(6)]
    assert load(out_path)[0].to_code() == load(FIXTURES / "appendix_gf3_systematic.msr")[0].to_code()


def test_systematic_rejects_dependent_input(capsys, tmp_path):
    explicit = CodeDocument.from_seed(worked_seed())
    explicit = CodeDocument.from_code(explicit.to_code())
    explicit.matrices["A2"] = explicit.matrices["A1"]
    path = tmp_path / "dep.msr"
    path.write_text(serialize(explicit))
    code, _, err = run(capsys, "systematic", path, tmp_path / "out.msr")
    assert code == 1 and "independence FAIL 1,2" in err
    assert not (tmp_path / "out.msr").exists()


@pytest.mark.parametrize("n,k,msr,ia,equal", [
    (5, 3, "2/3", "5/6", "no"),
    (4, 2, "3/4", "3/4", "yes"),
    (5, 4, "1", "1", "yes"),
])
def test_rate(capsys, n, k, msr, ia, equal):
    code, out, _ = run(capsys, "rate", "--n", n, "--k", k, "--M", 1)
    assert code == 0
    lines = out.splitlines()
    assert "gamma_naive=1" in lines
    assert f"gamma_msr={msr}" in lines and f"gamma_ia={ia}" in lines and f"equal={equal}" in lines


def test_rate_usage_error(capsys):
    code, _, err = run(capsys, "rate", "--n", 3, "--k", 3)
    assert code == 2 and "k < n" in err


def test_search_emits_verified_code(capsys, tmp_path):
    out_path = tmp_path / "codes.msr"
    code, out, _ = run(capsys, "search", "--n", 5, "--k", 3, "--p", 3, "--mode", "exhaustive",
                       "--limit", 1, "--out", out_path)
    assert code == 0
    rep = report_of(out)
    assert rep.codes_found >= 1
    docs = load(out_path)
    assert len(docs) == 1 and verify(docs[0].to_code()).ok


def test_search_report_matches_library(capsys):
    code, out, _ = run(capsys, "search", "--n", 4, "--k", 2, "--p", 2)
    assert code == 0
    rep = report_of(out)
    lib = run_search(SearchConfig(CodeParameters(4, 2), make_field(2)))
    assert (rep.a_candidates, rep.a_independent, rep.codes_found) == \
        (lib.a_candidates, lib.a_independent, lib.codes_found)
    assert "a_range=0:35" in out


@pytest.mark.parametrize("argv", [
    ["--n", 3, "--k", 3, "--p", 3],
    ["--n", 4, "--k", 2, "--p", 4],
    ["--n", 4, "--k", 2, "--p", 3, "--mode", "random"],
    ["--n", 4, "--k", 2, "--p", 3, "--shard", "5/4"],
    ["--n", 4, "--k", 2, "--p", 3, "--jobs", 0],
])
def test_search_usage_errors(capsys, argv):
    code, _, err = run(capsys, "search", *argv)
    assert code == 2 and err


def test_search_shards_and_merge(capsys, tmp_path):
    paths = []
    for i in (1, 2, 3):
        code, out, _ = run(capsys, "search", "--n", 4, "--k", 2, "--p", 3, "--shard", f"{i}/3", "--with-codes",
                           "--limit", 0)
        assert code == 0
        paths.append(tmp_path / f"part{i}.txt")
        paths[-1].write_text(out)
    code, out, _ = run(capsys, "merge", *paths)
    assert code == 0
    merged = parse_report(out)
    full = run_search(SearchConfig(CodeParameters(4, 2), make_field(3), limit=0))
    assert (merged.a_candidates, merged.a_independent, merged.y_candidates, merged.codes_found) == \
        (full.a_candidates, full.a_independent, full.y_candidates, full.codes_found)
    assert merged.emitted == full.emitted


def test_merge_rejects_mixed(capsys, tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text(format_report(run_search(SearchConfig(CodeParameters(4, 2), make_field(2)))))
    b.write_text(format_report(run_search(SearchConfig(CodeParameters(4, 2), make_field(3)))))
    code, _, err = run(capsys, "merge", a, b)
    assert code == 2 and err


def test_search_parallel_jobs_match_serial(capsys):
    code, out, _ = run(capsys, "search", "--n", 4, "--k", 2, "--p", 5, "--jobs", 2)
    assert code == 0
    par = report_of(out)
    ser = run_search(SearchConfig(CodeParameters(4, 2), make_field(5)))
    assert (par.a_independent, par.y_candidates, par.codes_found) == \
        (ser.a_independent, ser.y_candidates, ser.codes_found)


def test_random_search_prints_seed(capsys):
    code, out, _ = run(capsys, "search", "--n", 4, "--k", 2, "--p", 7, "--mode", "random", "--seed", 42,
                       "--samples", 50)
    assert code == 0 and "seed=42" in out and "mode=random" in out


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "msrsearch.cli", "verify",
                           str(FIXTURES / "appendix_gf7_systematic.msr")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "recovery node 1 OK" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "msrsearch.cli", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2
