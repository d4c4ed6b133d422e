"""Circuit evaluation: strength values, ternary, boolean, truth tables.

Evaluation walks nodes in id order (the validated topological order).
The strength-valued evaluator additionally records provenance: for each
gate, which operand decided its value.

    NOT  the single operand
    AND  first operand equal to the minimum
    OR   first operand equal to the maximum
    XOR  the operand of smaller magnitude, the left one on ties

The decided operand always has the same magnitude as the gate itself,
so the provenance edges partition the evaluated circuit by magnitude,
and within each magnitude class they form trees whose roots are the
leaves (inputs or registers) carrying that magnitude.  When all input
magnitudes are distinct there is exactly one tree per magnitude, rooted
at that input.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, TypeVar

from . import values as V
from .netlist import Circuit, Node
from .values import GateKind, MValue, Ternary

T = TypeVar("T")


def _eval_nodes(circuit: Circuit, leaf: Callable[[Node], T]) -> list[T]:
    """Evaluate every node bottom-up; works for any type with -, min, max."""
    out: list[T] = []
    for node in circuit.nodes:
        if node.kind != "gate":
            out.append(leaf(node))
            continue
        ops = [out[i] for i in node.operands]
        if node.gate is GateKind.NOT:
            out.append(-ops[0])
        elif node.gate is GateKind.AND:
            out.append(min(ops))
        elif node.gate is GateKind.OR:
            out.append(max(ops))
        else:
            a, b = ops
            out.append(max(min(a, -b), min(-a, b)))
    return out


def _check_valuation(circuit: Circuit, valuation: Mapping[str, object]) -> None:
    missing = [n for n in circuit.inputs if n not in valuation]
    if missing:
        raise ValueError(f"missing values for inputs: {', '.join(missing)}")
    extra = sorted(set(valuation) - set(circuit.inputs))
    if extra:
        raise ValueError(f"values for unknown inputs: {', '.join(extra)}")


def _require_combinational(circuit: Circuit, what: str) -> None:
    if circuit.registers:
        raise ValueError(f"{what} needs a register-free circuit")


@dataclass(frozen=True)
class Trace:
    """Result of one strength-valued evaluation."""

    circuit: Circuit
    values: tuple[MValue, ...]
    provenance: tuple[int | None, ...]
    outputs: dict[str, MValue]


def evaluate(circuit: Circuit, valuation: Mapping[str, MValue]) -> Trace:
    _require_combinational(circuit, "evaluate")
    _check_valuation(circuit, valuation)
    for name, v in valuation.items():
        V.check_mvalue(v)
    vals = _eval_nodes(circuit, lambda node: valuation[node.ref])
    prov: list[int | None] = []
    for node in circuit.nodes:
        if node.kind != "gate":
            prov.append(None)
            continue
        if node.gate is GateKind.NOT:
            prov.append(node.operands[0])
        elif node.gate in (GateKind.AND, GateKind.OR):
            target = vals[node.id]
            chosen = next(op for op in node.operands if vals[op] == target)
            prov.append(chosen)
        else:
            a, b = node.operands
            prov.append(a if abs(vals[a]) <= abs(vals[b]) else b)
    return Trace(
        circuit=circuit,
        values=tuple(vals),
        provenance=tuple(prov),
        outputs={name: vals[nid] for name, nid in circuit.outputs.items()},
    )


def evaluate_ternary(
    circuit: Circuit, valuation: Mapping[str, Ternary]
) -> tuple[tuple[Ternary, ...], dict[str, Ternary]]:
    """Strong three-valued evaluation; returns all node values and outputs."""
    _require_combinational(circuit, "evaluate_ternary")
    _check_valuation(circuit, valuation)
    vals: list[Ternary] = []
    for node in circuit.nodes:
        if node.kind != "gate":
            vals.append(valuation[node.ref])
        else:
            vals.append(V.k3_apply(node.gate, [vals[i] for i in node.operands]))
    return tuple(vals), {n: vals[i] for n, i in circuit.outputs.items()}


def evaluate_binary(
    circuit: Circuit, valuation: Mapping[str, bool]
) -> dict[str, bool]:
    _require_combinational(circuit, "evaluate_binary")
    _check_valuation(circuit, valuation)
    vals: list[bool] = []
    for node in circuit.nodes:
        if node.kind != "gate":
            vals.append(bool(valuation[node.ref]))
        else:
            vals.append(V.binary_apply(node.gate, [vals[i] for i in node.operands]))
    return {n: vals[i] for n, i in circuit.outputs.items()}


# --- bit-parallel truth tables -------------------------------------------


def variable_mask(index: int, n: int) -> int:
    """Truth-table mask of variable `index` over n variables.

    Bit j of the mask is bit `index` of j, for j in range(2**n).
    """
    period = ((1 << (1 << index)) - 1) << (1 << index)
    reps = 1 << (n - index - 1)
    repunit = ((1 << (reps * (1 << (index + 1)))) - 1) // ((1 << (1 << (index + 1))) - 1)
    return period * repunit


def node_masks(
    circuit: Circuit,
    *,
    var_order: Sequence[str] | None = None,
    max_inputs: int = 20,
) -> list[int]:
    """Truth-table mask for every node, bit j = value on assignment j.

    `var_order` fixes which variable owns which bit position; it must be
    a permutation of the circuit's inputs and defaults to input order.
    """
    _require_combinational(circuit, "node_masks")
    n = circuit.n_inputs
    if n > max_inputs:
        raise ValueError(f"{n} inputs exceeds the truth-table limit of {max_inputs}")
    order = tuple(var_order) if var_order is not None else circuit.inputs
    if sorted(order) != sorted(circuit.inputs):
        raise ValueError("var_order must be a permutation of the circuit inputs")
    pos = {name: j for j, name in enumerate(order)}
    full = (1 << (1 << n)) - 1
    masks: list[int] = []
    for node in circuit.nodes:
        if node.kind != "gate":
            masks.append(variable_mask(pos[node.ref], n))
            continue
        ops = [masks[i] for i in node.operands]
        if node.gate is GateKind.NOT:
            m = full & ~ops[0]
        elif node.gate is GateKind.AND:
            m = full
            for o in ops:
                m &= o
        elif node.gate is GateKind.OR:
            m = 0
            for o in ops:
                m |= o
        else:
            m = ops[0] ^ ops[1]
        masks.append(m)
    return masks


def truth_table_masks(
    circuit: Circuit,
    *,
    var_order: Sequence[str] | None = None,
    max_inputs: int = 20,
) -> dict[str, int]:
    """Output-name to truth-table-mask map."""
    masks = node_masks(circuit, var_order=var_order, max_inputs=max_inputs)
    return {name: masks[nid] for name, nid in circuit.outputs.items()}


# --- provenance forests ---------------------------------------------------


@dataclass(frozen=True)
class ForestClass:
    """All nodes sharing one magnitude, with their provenance tree(s)."""

    magnitude: MValue
    node_ids: tuple[int, ...]
    parent: dict[int, int]
    roots: tuple[int, ...]


@dataclass(frozen=True)
class Forest:
    classes: dict[MValue, ForestClass]

    def class_of(self, magnitude: MValue) -> ForestClass:
        return self.classes[magnitude]


def extract_forest(trace: Trace) -> Forest:
    """Group the trace by magnitude and collect the provenance trees.

    Every gate's provenance edge stays inside its magnitude class, and
    edges always point to smaller node ids, so each class is a forest
    whose roots are leaf nodes.
    """
    by_mag: dict[MValue, list[int]] = {}
    for node in trace.circuit.nodes:
        by_mag.setdefault(abs(trace.values[node.id]), []).append(node.id)
    classes: dict[MValue, ForestClass] = {}
    for mag, ids in sorted(by_mag.items()):
        parent: dict[int, int] = {}
        roots: list[int] = []
        for nid in ids:
            p = trace.provenance[nid]
            if p is None:
                roots.append(nid)
            else:
                if abs(trace.values[p]) != mag:
                    raise AssertionError(
                        f"provenance of node {nid} leaves magnitude class {mag}"
                    )
                parent[nid] = p
        classes[mag] = ForestClass(
            magnitude=mag, node_ids=tuple(ids), parent=parent, roots=tuple(roots)
        )
    return Forest(classes=classes)


# --- export ---------------------------------------------------------------


def run_stamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def trace_to_json(trace: Trace) -> dict:
    circuit = trace.circuit
    return {
        "schema_version": 1,
        "inputs": list(circuit.inputs),
        "outputs": {n: V.mvalue_to_json(v) for n, v in trace.outputs.items()},
        "nodes": [
            {
                "id": node.id,
                "kind": node.kind,
                "gate": node.gate.value if node.gate else None,
                "operands": list(node.operands),
                "name": node.ref,
                "value": V.mvalue_to_json(trace.values[node.id]),
                "provenance": trace.provenance[node.id],
            }
            for node in circuit.nodes
        ],
    }


_DOT_COLORS = (
    "#1b6ca8",
    "#b0413e",
    "#2e7d32",
    "#8e44ad",
    "#c97016",
    "#00838f",
    "#ad1457",
    "#5d4037",
)


def trace_to_dot(trace: Trace) -> str:
    """GraphViz rendering: provenance edges solid, per-magnitude colors."""
    circuit = trace.circuit
    mags = sorted({abs(v) for v in trace.values})
    color = {m: _DOT_COLORS[i % len(_DOT_COLORS)] for i, m in enumerate(mags)}
    out_names: dict[int, list[str]] = {}
    for name, nid in circuit.outputs.items():
        out_names.setdefault(nid, []).append(name)
    lines = ["digraph trace {", "  rankdir=LR;", "  node [fontname=monospace];"]
    for node in circuit.nodes:
        v = trace.values[node.id]
        if node.kind == "gate":
            label = node.gate.value
        else:
            label = node.ref or node.kind
        extra = "".join(f"\\n{n}" for n in sorted(out_names.get(node.id, [])))
        shape = "box" if node.kind == "gate" else "ellipse"
        lines.append(
            f'  n{node.id} [label="{label} = {V.format_mvalue(v)}{extra}",'
            f' shape={shape}, color="{color[abs(v)]}"];'
        )
    for node in circuit.nodes:
        if node.kind != "gate":
            continue
        chosen = trace.provenance[node.id]
        for op in node.operands:
            if op == chosen:
                c = color[abs(trace.values[node.id])]
                lines.append(f'  n{op} -> n{node.id} [color="{c}", penwidth=2];')
            else:
                lines.append(
                    f"  n{op} -> n{node.id} [color=gray, style=dashed];"
                )
    lines.append("}")
    return "\n".join(lines) + "\n"
