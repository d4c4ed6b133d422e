"""End-to-end command-line tests: exit codes, stdout, JSON artifacts."""

import json

import pytest

from mvlsim.cli import run_cli
from mvlsim.netlist import format_netlist, parse_netlist
from mvlsim import equivalence as E

from circuit_corpus import ITE_TEXT, and_text, or_text, shift_text

SMALL = "inputs x1 x2 x3\noutputs f\nf = (x1 | x2) & x3\n"


@pytest.fixture
def small(tmp_path):
    p = tmp_path / "small.mvl"
    p.write_text(SMALL)
    return str(p)


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _run(capsys, argv):
    code = run_cli(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- sim ----------------------------------------------------------------------


def test_sim_basic(capsys, small):
    code, out, err = _run(capsys, ["sim", "-n", small, "-v", "x1=1,x2=-2,x3=3"])
    assert code == 0
    assert out == "f = 1\n"
    assert err == ""


def test_sim_forest_and_dot(capsys, small, tmp_path):
    dot = tmp_path / "trace.dot"
    code, out, _ = _run(
        capsys,
        ["sim", "-n", small, "-v", "x1=1,x2=-2,x3=3", "--forest",
         "--dot", str(dot)],
    )
    assert code == 0
    assert "magnitude 1:" in out
    assert "magnitude 2:" in out
    assert "magnitude 3:" in out
    text = dot.read_text()
    assert text.startswith("digraph")
    assert "penwidth=2" in text


def test_sim_json_artifact(capsys, small, tmp_path):
    path = tmp_path / "trace.json"
    code, _, _ = _run(
        capsys,
        ["sim", "-n", small, "-v", "x1=1,x2=-2,x3=3", "--json", str(path)],
    )
    assert code == 0
    text = path.read_text()
    assert text.endswith("\n")
    doc = json.loads(text)
    assert doc["schema_version"] == 1
    assert doc["run_config"]["vector"] == "x1=1,x2=-2,x3=3"
    assert "generated_at" in doc
    assert doc["outputs"] == {"f": 1}
    assert len(doc["nodes"]) == 5


def test_sim_artifact_reproducible(capsys, small, tmp_path):
    path = tmp_path / "trace.json"
    argv = ["sim", "-n", small, "-v", "x1=1,x2=-2,x3=3", "--json", str(path)]
    assert run_cli(argv) == 0
    first = json.loads(path.read_text())
    assert run_cli(argv) == 0
    second = json.loads(path.read_text())
    capsys.readouterr()
    first.pop("generated_at")
    second.pop("generated_at")
    assert first == second


def test_sim_inf_ceiling(capsys, small):
    code, out, _ = _run(
        capsys,
        ["sim", "-n", small, "-v", "x1=99,x2=-2,x3=3", "--inf-ceiling", "10"],
    )
    assert code == 0
    assert out == "f = 3\n"


def test_sim_vector_errors(capsys, small):
    for vec in ("x1=1,x2=-2", "x1=1,x2=-2,zz=3", "x1=1,x1=2,x3=3",
                "x1=0,x2=-2,x3=3", "x1"):
        code, _, err = _run(capsys, ["sim", "-n", small, "-v", vec])
        assert code == 2
        assert err.startswith("error:")


def test_missing_netlist_file(capsys, tmp_path):
    code, _, err = _run(
        capsys, ["sim", "-n", str(tmp_path / "nope.mvl"), "-v", "x=1"]
    )
    assert code == 2
    assert "cannot read" in err


def test_netlist_parse_error_names_position(capsys, tmp_path):
    path = _write(tmp_path, "bad.mvl", "inputs x\noutputs f\nf = x &\n")
    code, _, err = _run(capsys, ["sim", "-n", path, "-v", "x=1"])
    assert code == 2
    assert "line 3" in err


# --- ternary-sim ---------------------------------------------------------------


def test_ternary_sim(capsys, small):
    code, out, _ = _run(capsys, ["ternary-sim", "-n", small, "-v", "T,F,X"])
    assert code == 0
    assert out == "f = X\n"
    code, _, err = _run(capsys, ["ternary-sim", "-n", small, "-v", "T,F"])
    assert code == 2
    assert "expected 3" in err


# --- abstract / check-maximal ---------------------------------------------------


def test_abstract_strict(capsys, small):
    code, out, _ = _run(capsys, ["abstract", "-n", small, "--perm", "1,-2,3"])
    assert code == 0
    assert "threshold: 2" in out
    assert "av: T,X,T" in out


def test_abstract_faithful(capsys, small):
    code, out, _ = _run(
        capsys,
        ["abstract", "-n", small, "--perm", "1,-2,3", "--mode", "faithful"],
    )
    assert code == 0
    assert "threshold: 1" in out
    assert "av: T,F,T" in out
    assert "iteration 1: w=1,-2,3 out=1" in out
    assert "iteration 2: w=3,-2,1 out=1" in out
    assert "final: w=3,-1,2 out=2" in out


def test_abstract_probe_and_json(capsys, tmp_path):
    path = _write(tmp_path, "or3.mvl", or_text(3))
    art = tmp_path / "abs.json"
    code, out, _ = _run(
        capsys,
        ["abstract", "-n", path, "--perm", "1,2,3", "--sign-flip-probe",
         "--json", str(art)],
    )
    assert code == 0
    assert "sign-flip insensitive: x3" in out
    doc = json.loads(art.read_text())
    assert doc["av"] == ["X", "X", "T"]
    assert doc["sign_flip_insensitive"] == [2]


def test_abstract_seed_fallback(capsys, small, monkeypatch):
    code, via_flag, _ = _run(capsys, ["abstract", "-n", small, "--seed", "7"])
    assert code == 0
    monkeypatch.setenv("MVLSIM_SEED", "7")
    code, via_env, _ = _run(capsys, ["abstract", "-n", small])
    assert code == 0
    assert via_env == via_flag
    monkeypatch.setenv("MVLSIM_SEED", "xy")
    code, _, err = _run(capsys, ["abstract", "-n", small])
    assert code == 2
    assert "MVLSIM_SEED" in err


def test_abstract_bad_perm(capsys, small):
    code, _, err = _run(capsys, ["abstract", "-n", small, "--perm", "1,1,3"])
    assert code == 2
    assert "error:" in err


def test_check_maximal_pass(capsys, tmp_path):
    path = _write(tmp_path, "or3.mvl", or_text(3))
    code, out, _ = _run(capsys, ["check-maximal", "-n", path, "--av", "X,X,T"])
    assert code == 0
    assert "consistent: yes" in out
    assert "maximal: yes" in out


def test_check_maximal_witness(capsys, tmp_path):
    path = _write(tmp_path, "or3.mvl", or_text(3))
    code, out, _ = _run(capsys, ["check-maximal", "-n", path, "--av", "T,T,X"])
    assert code == 1
    assert "maximal: no" in out
    assert "witness: x1" in out
    # the finding is also emitted as JSON on stdout
    assert '"witness": "x1"' in out


def test_check_maximal_inconsistent(capsys, tmp_path):
    path = _write(tmp_path, "or3.mvl", or_text(3))
    code, out, _ = _run(capsys, ["check-maximal", "-n", path, "--av", "X,X,X"])
    assert code == 1
    assert "consistent: no" in out


# --- equiv / oracle-equiv -------------------------------------------------------


@pytest.fixture
def needle_files(tmp_path):
    base = parse_netlist(or_text(8))
    buggy = E.mutate_conjunctive_bug(base, [("x1", True)])
    pa = _write(tmp_path, "a.mvl", or_text(8))
    pb = _write(tmp_path, "b.mvl", format_netlist(buggy))
    return pa, pb


def test_equiv_counterexample(capsys, needle_files, tmp_path):
    pa, pb = needle_files
    art = tmp_path / "cex.json"
    code, out, _ = _run(
        capsys,
        ["equiv", pa, pb, "--budget", "2000", "--seed", "0", "--json", str(art)],
    )
    assert code == 1
    assert "verdict: counterexample" in out
    assert "trigger: guided" in out
    doc = json.loads(art.read_text())
    assert doc["verdict"] == "counterexample"
    assert doc["assignment"] == {f"x{i}": "F" for i in range(1, 9)}
    assert doc["run_config"]["budget"] == 2000


def test_equiv_blind_budget_exhausted(capsys, needle_files):
    pa, pb = needle_files
    code, out, _ = _run(
        capsys,
        ["equiv", pa, pb, "--blind", "--budget", "50", "--seed", "0"],
    )
    assert code == 0
    assert "verdict: budget_exhausted" in out
    assert "trials: 50" in out


def test_equiv_m_discrepancy(capsys, tmp_path):
    base = parse_netlist(and_text(8))
    mutant = E.mutate_redundant_contradiction(base, seed=3)
    pa = _write(tmp_path, "a.mvl", and_text(8))
    pb = _write(tmp_path, "b.mvl", format_netlist(mutant))
    code, out, _ = _run(
        capsys,
        ["equiv", pa, pb, "--stop-on-m-discrepancy", "--budget", "500",
         "--seed", "0"],
    )
    assert code == 1
    assert "verdict: m_discrepancy" in out
    assert "m outputs A:" in out
    assert "av A:" in out


def test_equiv_stimulus_file(capsys, needle_files, tmp_path):
    pa, pb = needle_files
    stim = tmp_path / "rows.csv"
    stim.write_text("1,2,3,4,5,6,7,8\n-1 -2 -3 -4 -5 -6 -7 -8\n")
    code, out, _ = _run(
        capsys,
        ["equiv", pa, pb, "--stimulus-file", str(stim), "--blind",
         "--budget", "100"],
    )
    assert code == 1
    assert "verdict: counterexample" in out
    assert "trial: 1" in out

    stim.write_text("1,2\n")
    code, _, err = _run(
        capsys, ["equiv", pa, pb, "--stimulus-file", str(stim)]
    )
    assert code == 2
    assert "error:" in err

    stim.write_text("1,2,x,4,5,6,7,8\n")
    code, _, err = _run(
        capsys, ["equiv", pa, pb, "--stimulus-file", str(stim)]
    )
    assert code == 2
    assert "bad entry" in err


def test_equiv_rejects_mismatched_interfaces(capsys, tmp_path):
    pa = _write(tmp_path, "a.mvl", or_text(2))
    pb = _write(tmp_path, "b.mvl", or_text(3))
    code, _, err = _run(capsys, ["equiv", pa, pb])
    assert code == 2
    assert "input names" in err


def test_oracle_equiv(capsys, tmp_path):
    pa = _write(tmp_path, "a.mvl", "inputs x y\noutputs f\nf = x & y\n")
    pb = _write(tmp_path, "b.mvl", "inputs x y\noutputs f\nf = y & x\n")
    code, out, _ = _run(capsys, ["oracle-equiv", pa, pb])
    assert code == 0
    assert "equivalent: yes" in out

    pc = _write(tmp_path, "c.mvl", "inputs x y\noutputs f\nf = x ^ y\n")
    code, out, _ = _run(capsys, ["oracle-equiv", pa, pc])
    assert code == 1
    assert "equivalent: no" in out
    assert "assignment:" in out
    assert '"equivalent": false' in out


# --- dnf / complexity / gen-vectors ---------------------------------------------


@pytest.fixture
def ite(tmp_path):
    return _write(tmp_path, "ite.mvl", ITE_TEXT)


def test_dnf_forms(capsys, ite):
    code, out, _ = _run(capsys, ["dnf", "-n", ite])
    assert code == 0
    assert "d0~s + d1s" in out
    code, out, _ = _run(capsys, ["dnf", "-n", ite, "--negate"])
    assert code == 0
    assert "~d0~d1 + ~d0~s + ~d1s + s~s" in out
    code, out, _ = _run(capsys, ["dnf", "-n", ite, "--form", "bcf"])
    assert code == 0
    assert "d0d1 + d0~s + d1s" in out
    code, out, _ = _run(capsys, ["dnf", "-n", ite, "--form", "fdnf"])
    assert code == 0
    assert "terms: 4" in out
    code, out, _ = _run(
        capsys, ["dnf", "-n", ite, "--form", "mincover", "--negate"]
    )
    assert code == 0
    assert "~d0~s + ~d1s" in out


def test_dnf_json_terms(capsys, ite, tmp_path):
    art = tmp_path / "dnf.json"
    code, _, _ = _run(capsys, ["dnf", "-n", ite, "--json", str(art)])
    assert code == 0
    doc = json.loads(art.read_text())
    assert doc["dnf"] == "d0~s + d1s"
    assert doc["terms"] == [["d0", "~s"], ["d1", "s"]]
    assert doc["term_count"] == 2


def test_dnf_budget_overflow(capsys, tmp_path):
    lines = ["inputs " + " ".join(f"x{i}" for i in range(1, 7)), "outputs f",
             "f = x1 ^ x2 ^ x3 ^ x4 ^ x5 ^ x6"]
    path = _write(tmp_path, "xor6.mvl", "\n".join(lines) + "\n")
    code, _, err = _run(capsys, ["dnf", "-n", path, "--budget", "10"])
    assert code == 2
    assert "error:" in err


def test_complexity(capsys, tmp_path):
    path = _write(tmp_path, "and3.mvl", and_text(3))
    art = tmp_path / "cx.json"
    code, out, _ = _run(capsys, ["complexity", "-n", path, "--json", str(art)])
    assert code == 0
    assert "structural: 4" in out
    assert "prime: 4" in out
    doc = json.loads(art.read_text())
    assert doc["variable_upper"] == 4
    assert doc["min_cover"] == "x1x2x3"


def test_gen_vectors(capsys, tmp_path):
    path = _write(tmp_path, "and3.mvl", and_text(3))
    code, out, _ = _run(capsys, ["gen-vectors", "-n", path])
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "ternary\tm_values\texpected"
    assert lines[1] == "T,T,T\t1,1,1\tT"
    assert len(lines) == 5


def test_gen_vectors_control(capsys, tmp_path):
    from circuit_corpus import mux_text

    path = _write(tmp_path, "mux.mvl", mux_text(1))
    code, out, _ = _run(
        capsys, ["gen-vectors", "-n", path, "--control", "s0"]
    )
    assert code == 0
    assert "inf" in out
    assert len(out.strip().splitlines()) == 5
    code, _, err = _run(
        capsys, ["gen-vectors", "-n", path, "--control", "zz"]
    )
    assert code == 2
    assert "error:" in err


# --- sequential -----------------------------------------------------------------


def test_seq_run_seeded(capsys, tmp_path):
    path = _write(tmp_path, "shift2.mvl", shift_text(2))
    art = tmp_path / "run.json"
    code, out, _ = _run(
        capsys,
        ["seq-run", "-n", path, "--cycles", "3", "--seed", "1",
         "--json", str(art)],
    )
    assert code == 0
    assert "cycle 00 state: r1=+pb" in out or "cycle 00 state: r1=-pb" in out
    doc = json.loads(art.read_text())
    assert doc["cycles"] == 3
    assert len(doc["states"]) == 4
    assert doc["states"][0]["registers"]["r1"]["epoch"] == -1
    assert doc["states"][3]["registers"]["r2"]["epoch"] == 1


def test_seq_run_stimulus_rows(capsys, tmp_path):
    path = _write(tmp_path, "shift1.mvl", shift_text(1))
    stim = _write(tmp_path, "stim.csv", "3\n-2\n")
    code, out, _ = _run(capsys, ["seq-run", "-n", path, "--stimulus", stim])
    assert code == 0
    assert "cycle 01 state: r1=+00 003" in out
    assert "cycle 02 state: r1=-01 002" in out
    code, _, err = _run(
        capsys,
        ["seq-run", "-n", path, "--stimulus", stim, "--cycles", "5"],
    )
    assert code == 2
    assert "covers 2" in err


def test_seq_run_requires_cycles_without_rows(capsys, tmp_path):
    path = _write(tmp_path, "shift1.mvl", shift_text(1))
    code, _, err = _run(capsys, ["seq-run", "-n", path])
    assert code == 2
    assert "--cycles" in err


def test_seq_init_latency(capsys, tmp_path):
    path = _write(tmp_path, "shift2.mvl", shift_text(2))
    code, out, _ = _run(capsys, ["seq-init", "-n", path, "--cycles", "4"])
    assert code == 0
    assert "initialized: cycle 2" in out
    assert "ternary oracle: cycle 2" in out
    assert "0\t-1\t3" in out


def test_seq_init_never(capsys, tmp_path):
    path = _write(
        tmp_path, "sticky.mvl", "inputs d\noutputs q\nreg r\nr <= r | d\nq = r\n"
    )
    code, out, _ = _run(
        capsys,
        ["seq-init", "-n", path, "--cycles", "5", "--init", "r=inf"],
    )
    assert code == 1
    assert "initialized: never within 5 cycles" in out
    assert '"initialized_at": null' in out


def test_seq_init_bad_override(capsys, tmp_path):
    path = _write(tmp_path, "shift1.mvl", shift_text(1))
    code, _, err = _run(
        capsys,
        ["seq-init", "-n", path, "--cycles", "2", "--init", "zz=3"],
    )
    assert code == 2
    assert "no register" in err


# --- mutate ---------------------------------------------------------------------


def test_mutate_stdout_and_file(capsys, tmp_path):
    path = _write(tmp_path, "or2.mvl", or_text(2))
    code, out, _ = _run(
        capsys, ["mutate", "-n", path, "--kind", "conjunctive", "--term", "~x1"]
    )
    assert code == 0
    mutant = parse_netlist(out)
    base = parse_netlist(or_text(2))
    assert not E.oracle_equivalence(base, mutant).equivalent

    dest = tmp_path / "mut.mvl"
    code, _, _ = _run(
        capsys,
        ["mutate", "-n", path, "--kind", "tautology", "-O", str(dest)],
    )
    assert code == 0
    assert E.oracle_equivalence(base, parse_netlist(dest.read_text())).equivalent


def test_mutate_errors(capsys, tmp_path):
    path = _write(tmp_path, "or2.mvl", or_text(2))
    code, _, err = _run(capsys, ["mutate", "-n", path, "--kind", "conjunctive"])
    assert code == 2
    assert "--term" in err
    code, _, err = _run(
        capsys,
        ["mutate", "-n", path, "--kind", "conjunctive", "--term", "zz"],
    )
    assert code == 2
    assert "not an input" in err
