"""Bundled experiments behind the `report` subcommand.

Each experiment writes a CSV next to a rendered PNG so the numbers stay
inspectable without matplotlib.  A manifest.json ties the artifacts to
the seed and mode that produced them.
"""

from __future__ import annotations

import csv
import json
import os
import statistics

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import equivalence as E
from . import normal_forms as F
from . import simulator as S
from .netlist import parse_netlist
from .values import format_mvalue


def _and_text(n: int) -> str:
    names = [f"x{i}" for i in range(1, n + 1)]
    return (
        "inputs " + " ".join(names) + "\n"
        "outputs f\n"
        "f = " + " & ".join(names) + "\n"
    )


def _or_text(n: int) -> str:
    names = [f"x{i}" for i in range(1, n + 1)]
    return (
        "inputs " + " ".join(names) + "\n"
        "outputs f\n"
        "f = " + " | ".join(names) + "\n"
    )


def _mux_text(k: int) -> str:
    data = [f"d{j}" for j in range(1 << k)]
    sel = [f"s{i}" for i in range(k)]
    terms = []
    for j in range(1 << k):
        lits = [data[j]]
        for i in range(k):
            lits.append(sel[i] if (j >> i) & 1 else f"~{sel[i]}")
        terms.append(" & ".join(lits))
    return (
        "inputs " + " ".join(data + sel) + "\n"
        "outputs f\n"
        "f = " + " | ".join(terms) + "\n"
    )


def _structural_cover_size(circuit, output: str | None = None) -> int:
    form = F.dmcf(circuit, output)
    n = circuit.n_inputs
    target = circuit.output_node(output)
    onset = S.node_masks(circuit)[target]
    full = (1 << (1 << n)) - 1
    pos = F.minimal_cover(form.pos, onset, n)
    neg = F.minimal_cover(form.neg, full & ~onset, n)
    return len(pos) + len(neg)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _experiment_growth(out_dir: str, quick: bool) -> dict:
    and_ns = range(2, 6 if quick else 9)
    mux_ks = range(1, 3 if quick else 4)
    rows: list[list] = []
    and_pts: list[tuple[int, int]] = []
    mux_pts: list[tuple[int, int]] = []
    for n in and_ns:
        size = _structural_cover_size(parse_netlist(_and_text(n)))
        rows.append([f"and{n}", n, size])
        and_pts.append((n, size))
    for k in mux_ks:
        circuit = parse_netlist(_mux_text(k))
        size = _structural_cover_size(circuit)
        rows.append([f"mux{1 << k}", circuit.n_inputs, size])
        mux_pts.append((circuit.n_inputs, size))
    _write_csv(
        os.path.join(out_dir, "complexity_growth.csv"),
        ["circuit", "inputs", "structural_cover"],
        rows,
    )

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(*zip(*and_pts), marker="o", label="n-input AND")
    ax.plot(*zip(*mux_pts), marker="s", label="multiplexer")
    ax.set_xlabel("inputs")
    ax.set_ylabel("minimal cover size (both polarities)")
    ax.set_title("Structural cover growth")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(out_dir, "complexity_growth.png"), dpi=150)
    plt.close(fig)
    return {"rows": len(rows)}


def _trials_to_find(a, b, *, budget: int, seed: int, guided: bool) -> int | None:
    result = E.nonequivalence_search(
        a, b, budget=budget, seed=seed, guided=guided, workers=1
    )
    if result.verdict == "counterexample":
        return result.trial + 1
    return None


def _experiment_needle(out_dir: str, seed: int, quick: bool) -> dict:
    n_seeds = 5 if quick else 20
    budget = 1500 if quick else 10000
    base = parse_netlist(_or_text(8))
    buggy = E.mutate_conjunctive_bug(base, [("x1", True)])
    rows: list[list] = []
    guided_counts: list[int | None] = []
    blind_counts: list[int | None] = []
    for s in range(seed, seed + n_seeds):
        g = _trials_to_find(base, buggy, budget=budget, seed=s, guided=True)
        b = _trials_to_find(base, buggy, budget=budget, seed=s, guided=False)
        guided_counts.append(g)
        blind_counts.append(b)
        rows.append([s, g if g is not None else "", b if b is not None else ""])
    _write_csv(
        os.path.join(out_dir, "needle_search.csv"),
        ["seed", "guided_trials", "blind_trials"],
        rows,
    )

    fig, ax = plt.subplots(figsize=(7, 4))
    xs = range(n_seeds)
    width = 0.4
    g_vals = [g if g is not None else budget for g in guided_counts]
    b_vals = [b if b is not None else budget for b in blind_counts]
    ax.bar([x - width / 2 for x in xs], g_vals, width, label="guided")
    ax.bar([x + width / 2 for x in xs], b_vals, width, label="blind")
    ax.set_yscale("log")
    ax.set_xlabel("seed")
    ax.set_ylabel("trials until counterexample")
    ax.set_title("Unique-vector bug: guided vs blind search")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([str(seed + x) for x in xs])
    ax.grid(alpha=0.3, axis="y")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(out_dir, "needle_search.png"), dpi=150)
    plt.close(fig)
    return {
        "guided_found": sum(1 for g in guided_counts if g is not None),
        "blind_found": sum(1 for b in blind_counts if b is not None),
        "seeds": n_seeds,
        "budget": budget,
    }


def _experiment_separation(out_dir: str, seed: int, quick: bool) -> dict:
    n_seeds = 5 if quick else 20
    budget = 200 if quick else 500
    base = parse_netlist(_and_text(8))
    mutant = E.mutate_redundant_contradiction(base, seed=seed)
    rows: list[list] = []
    counts: list[int] = []
    for s in range(seed, seed + n_seeds):
        result = E.nonequivalence_search(
            base,
            mutant,
            budget=budget,
            seed=s,
            stop_on_m_discrepancy=True,
            workers=1,
        )
        t = result.trial + 1 if result.verdict == "m_discrepancy" else budget
        counts.append(t)
        rows.append([s, t if result.verdict == "m_discrepancy" else ""])
    _write_csv(
        os.path.join(out_dir, "quality_separation.csv"),
        ["seed", "trials_to_m_discrepancy"],
        rows,
    )

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(n_seeds), counts)
    ax.set_xlabel("seed")
    ax.set_ylabel("trials to first strength discrepancy")
    ax.set_title("Redundant contradiction: boolean-invisible, strength-visible")
    ax.set_xticks(range(n_seeds))
    ax.set_xticklabels([str(seed + x) for x in range(n_seeds)])
    ax.grid(alpha=0.3, axis="y")
    fig.tight_layout()
    fig.savefig(os.path.join(out_dir, "quality_separation.png"), dpi=150)
    plt.close(fig)
    return {"median_trials": statistics.median(counts), "seeds": n_seeds}


_FOREST_TEXT = """\
inputs x1 x2 x3 x4
outputs f
a = x1 ^ x2
b = x3 & x4
c = a | b
d = x2 | ~x3
f = c & d
"""

_FOREST_W = (-1, 3, -2, 4)


def _experiment_forest(out_dir: str) -> dict:
    circuit = parse_netlist(_FOREST_TEXT)
    valuation = dict(zip(circuit.inputs, _FOREST_W))
    trace = S.evaluate(circuit, valuation)
    forest = S.extract_forest(trace)

    depth = [0] * len(circuit.nodes)
    for node in circuit.nodes:
        if node.kind == "gate":
            depth[node.id] = 1 + max(depth[op] for op in node.operands)
    by_level: dict[int, list[int]] = {}
    for nid in range(len(circuit.nodes)):
        by_level.setdefault(depth[nid], []).append(nid)
    pos: dict[int, tuple[float, float]] = {}
    for level, ids in by_level.items():
        for col, nid in enumerate(sorted(ids)):
            pos[nid] = (col - (len(ids) - 1) / 2, level)

    mags = sorted(forest.classes)
    cmap = plt.get_cmap("tab10")
    color_of = {mag: cmap(i % 10) for i, mag in enumerate(mags)}

    fig, ax = plt.subplots(figsize=(6, 5))
    for node in circuit.nodes:
        if node.kind != "gate":
            continue
        px, py = pos[node.id]
        for op in node.operands:
            ox, oy = pos[op]
            if trace.provenance[node.id] == op:
                mag = abs(trace.values[node.id])
                ax.plot([px, ox], [py, oy], color=color_of[mag], lw=2.2, zorder=1)
            else:
                ax.plot([px, ox], [py, oy], color="0.75", lw=0.9, ls="--", zorder=0)
    for nid, (px, py) in pos.items():
        node = circuit.nodes[nid]
        mag = abs(trace.values[nid])
        ax.scatter([px], [py], s=550, color=color_of[mag],
                   edgecolor="black", zorder=2)
        label = node.gate.value if node.kind == "gate" else circuit.inputs[nid]
        ax.annotate(
            f"{label}\n{format_mvalue(trace.values[nid])}",
            (px, py), ha="center", va="center", fontsize=7, zorder=3,
        )
    ax.set_title("Provenance forest, one colour per magnitude class")
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(os.path.join(out_dir, "forest_trace.png"), dpi=150)
    plt.close(fig)
    return {"classes": len(mags)}


def generate_report(*, out_dir: str, seed: int = 0, quick: bool = False) -> dict:
    os.makedirs(out_dir, exist_ok=True)
    results = {
        "complexity_growth": _experiment_growth(out_dir, quick),
        "needle_search": _experiment_needle(out_dir, seed, quick),
        "quality_separation": _experiment_separation(out_dir, seed, quick),
        "forest_trace": _experiment_forest(out_dir),
    }
    manifest = {
        "schema_version": 1,
        "generated_at": S.run_stamp(),
        "seed": seed,
        "quick": quick,
        "artifacts": [
            "complexity_growth.csv",
            "complexity_growth.png",
            "needle_search.csv",
            "needle_search.png",
            "quality_separation.csv",
            "quality_separation.png",
            "forest_trace.png",
            "manifest.json",
        ],
        "results": results,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
