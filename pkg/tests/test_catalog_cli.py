from __future__ import annotations

import csv
import subprocess
import sys
from pathlib import Path

import pytest

from fftamagawa.catalog import DescriptorError, SUITES, default_catalog, default_catalog_text, entry_text, load_catalog, parse_descriptor
from fftamagawa.cli import main

GOOD = """
# comment
[entry my2A2]
series = A
rank = 2
auto = (1 2)
suites = poles, chain
"""


def test_parse_good_descriptor():
    (e,) = parse_descriptor(GOOD)
    assert e.name == "my2A2"
    assert e.datum.diagram_auto == (1, 0) and e.datum.q == 5
    assert e.suites == ("poles", "chain")
    again = parse_descriptor(entry_text(e))
    assert again[0] == e


@pytest.mark.parametrize(
    "text,line,field",
    [
        ("[entry x]\nseries = A\nrank = 3\nauto = (1 2)\n", 4, "auto"),
        ("[entry x]\nseries = A\nrank = two\n", 3, "rank"),
        ("[entry x]\nseries = Q\nrank = 2\n", 2, "series"),
        ("[entry x]\nrank = 2\n", 1, "series"),
        ("[entry x]\nseries = A\nrank = 2\ncolour = red\n", 4, "colour"),
        ("[entry x]\nseries = A\nrank = 2\nrank = 3\n", 4, "rank"),
        ("[entry x]\nseries = A\nrank = 2\nq = 6\n", 4, "q"),
        ("[entry x]\nseries = A\nrank = 2\nres_degree = 0\n", 4, "res_degree"),
        ("[entry x]\nseries = A\nrank = 2\nsuites = local, magic\n", 4, "suites"),
        ("[entry x]\nseries = A\nrank = 2\ngenus = 1\nnumerator = 1, 2\n", 5, "numerator"),
    ],
)
def test_parse_errors_have_line_and_field(text, line, field):
    with pytest.raises(DescriptorError) as info:
        parse_descriptor(text, "cat.txt")
    assert info.value.line == line and info.value.field == field
    assert str(info.value).startswith(f"cat.txt:{line} [{field}]")


def test_bad_automorphism_names_entry_pair():
    with pytest.raises(DescriptorError, match=r"entry \(\d,\d\) = -?\d but \(\d,\d\)"):
        parse_descriptor("[entry x]\nseries = A\nrank = 3\nauto = (1 2)\n")


@pytest.mark.parametrize(
    "text",
    ["", "series = A\n", "[entry x]\nseries A\n", "[entry x\n", "[entry x]\nseries = A\nrank = 1\n[entry x]\nseries = A\nrank = 1\n"],
)
def test_structural_errors(text):
    with pytest.raises(DescriptorError):
        parse_descriptor(text)


def test_default_catalog_contract():
    entries = default_catalog()
    assert len(entries) >= 14 and len({e.name for e in entries}) == len(entries)
    labels = {e.datum.label for e in entries}
    for t in ("2A2", "2A3", "2A4", "2D4", "3D4", "2E6"):
        assert t in labels
    assert all(e.suites == SUITES for e in entries)
    shipped = Path(__file__).resolve().parents[1] / "catalog" / "default.txt"
    assert shipped.read_text() == default_catalog_text()
    assert [e.name for e in load_catalog(shipped)] == [e.name for e in entries]


def test_cli_catalog(capsys):
    assert main(["catalog"]) == 0
    assert capsys.readouterr().out == default_catalog_text()


def test_cli_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("[entry x]\nseries = A\nrank = 3\nauto = (1 2)\n")
    assert main(["run", str(bad), "--out-dir", str(tmp_path / "o")]) == 2
    assert f"{bad}:4 [auto]" in capsys.readouterr().err
    assert main(["run", "--suites", "nope", "--out-dir", str(tmp_path / "o")]) == 2
    assert main(["run", "--entry", "Z9", "--out-dir", str(tmp_path / "o")]) == 2
    assert main(["run", "--s", "1", "--out-dir", str(tmp_path / "o")]) == 2
    assert main(["run", "--q", "6", "--out-dir", str(tmp_path / "o")]) == 2
    assert main(["run", str(tmp_path / "missing.txt"), "--out-dir", str(tmp_path / "o")]) == 2


def test_cli_failure_exit_code(tmp_path):
    out = tmp_path / "o"
    assert main(["run", "--entry", "A1", "--suites", "global", "--euler-tol", "1e-30", "--out-dir", str(out), "--quiet"]) == 1
    summary = (out / "summary.txt").read_text()
    assert "FAIL  A1" in summary and "euler" in summary


def test_cli_oracle_row(tmp_path):
    out = tmp_path / "o"
    assert main(["run", "--entry", "2A2", "--suites", "oracle", "--depth", "8", "--s", "2.0", "--out-dir", str(out), "--quiet"]) == 0
    rows = list(csv.DictReader((out / "oracle.csv").open()))
    assert rows and rows[0]["entry"] == "2A2" and rows[0]["kind"].startswith("SU3")
    assert float(rows[0]["abs_err"]) < 1e-4


def test_cli_deterministic_reports(tmp_path):
    args = ["run", "--entry", "A1,2A2,2A3,A1_res2", "--suites", "local,global,poles,chain,oracle,convexity", "--quiet"]
    assert main(args + ["--out-dir", str(tmp_path / "a")]) == 0
    assert main(args + ["--out-dir", str(tmp_path / "b"), "--jobs", "2"]) == 0
    a = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert a == sorted(p.name for p in (tmp_path / "b").iterdir())
    assert "2A3.txt" in a and "summary.txt" in a and "oracle.csv" in a
    for name in a:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "fftamagawa", "run", "--entry", "A2", "--suites", "poles,chain", "--out-dir", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "1/1 entries passed" in proc.stdout
