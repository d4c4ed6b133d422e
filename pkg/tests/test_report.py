"""Report generation: experiments, figures, CSVs, manifest."""

import csv
import json

import pytest

from mvlsim.report import generate_report


@pytest.fixture(scope="module")
def quick_report(tmp_path_factory):
    out = tmp_path_factory.mktemp("report")
    manifest = generate_report(out_dir=str(out), seed=0, quick=True)
    return out, manifest


def test_artifacts_exist(quick_report):
    out, manifest = quick_report
    assert manifest["schema_version"] == 1
    assert manifest["quick"] is True
    for name in manifest["artifacts"]:
        path = out / name
        assert path.is_file(), name
        assert path.stat().st_size > 0, name
    pngs = [n for n in manifest["artifacts"] if n.endswith(".png")]
    assert len(pngs) == 4
    for name in pngs:
        assert (out / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_manifest_matches_disk(quick_report):
    out, manifest = quick_report
    on_disk = json.loads((out / "manifest.json").read_text())
    assert on_disk == manifest


def test_growth_csv_values(quick_report):
    out, _ = quick_report
    with open(out / "complexity_growth.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["circuit", "inputs", "structural_cover"]
    table = {r[0]: (int(r[1]), int(r[2])) for r in rows[1:]}
    # n-input AND covers with n+1 terms across both polarities
    for n in range(2, 6):
        assert table[f"and{n}"] == (n, n + 1)
    # 2^k-way multiplexer covers with 2^(k+1) terms
    assert table["mux2"] == (3, 4)
    assert table["mux4"] == (6, 8)


def test_needle_csv(quick_report):
    out, manifest = quick_report
    with open(out / "needle_search.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["seed", "guided_trials", "blind_trials"]
    assert len(rows) == 6
    res = manifest["results"]["needle_search"]
    assert res["seeds"] == 5
    assert res["guided_found"] == 5
    guided = [int(r[1]) for r in rows[1:] if r[1]]
    blind = [int(r[2]) for r in rows[1:] if r[2]]
    assert len(guided) == res["guided_found"]
    assert len(blind) == res["blind_found"]
    # guidance needs far fewer trials on the one-in-2^8 needle
    assert max(guided) < 100


def test_separation_csv(quick_report):
    out, manifest = quick_report
    with open(out / "quality_separation.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["seed", "trials_to_m_discrepancy"]
    assert len(rows) == 6
    assert all(r[1] for r in rows[1:])  # every seed separated the pair
    res = manifest["results"]["quality_separation"]
    assert res["median_trials"] <= 20


def test_forest_result(quick_report):
    _, manifest = quick_report
    assert manifest["results"]["forest_trace"]["classes"] == 4


def test_cli_report(tmp_path, capsys):
    from mvlsim.cli import run_cli

    out = tmp_path / "rpt"
    code = run_cli(["report", "--out-dir", str(out), "--quick", "--seed", "0"])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out.count("wrote ") == 8
    assert (out / "manifest.json").is_file()
