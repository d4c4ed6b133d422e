"""Randomized nonequivalence search between two combinational circuits.

Each trial draws one signed permutation of magnitudes 1..n.  Its signs
are a plain boolean stimulus; if the circuits already disagree on it,
done.  Otherwise the strength run is mined for leads: a disagreement in
the strength outputs is recorded (it witnesses structural inequality of
the min-forms even when the boolean functions match), and the per-output
ternary abstractions of both circuits are compared.  When circuit A
abstracts an input to unknown that circuit B still depends on, every
flip of such inputs keeps A's output fixed, so flipping them explores
B's behavior at no risk of moving A.  The search enumerates those flip
sets (capped) looking for a point where the boolean outputs split; any
point found this way is re-checked directly, so a reported
counterexample is always genuine.

Trials are deterministic in (seed, trial index), so runs reproduce
exactly and parallel workers give the same answer as a serial run.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from .abstraction import abstract_valuation, random_signed_permutation
from .netlist import Circuit, Node
from .values import GateKind, MValue, Ternary

_PARALLEL_MIN = 2048


@dataclass(frozen=True)
class SearchStats:
    trials: int = 0
    m_discrepancies: int = 0
    av_mismatches: int = 0
    expansions: int = 0
    anomalies: int = 0

    def merged(self, other: "SearchStats") -> "SearchStats":
        return SearchStats(
            self.trials + other.trials,
            self.m_discrepancies + other.m_discrepancies,
            self.av_mismatches + other.av_mismatches,
            self.expansions + other.expansions,
            self.anomalies + other.anomalies,
        )


@dataclass(frozen=True)
class SearchResult:
    """verdict is 'counterexample', 'm_discrepancy', or 'budget_exhausted'."""

    verdict: str
    stats: SearchStats
    trial: int | None = None
    output: str | None = None
    assignment: dict[str, bool] | None = None
    trigger: str | None = None
    w: tuple[MValue, ...] | None = None
    av_a: tuple[Ternary, ...] | None = None
    av_b: tuple[Ternary, ...] | None = None
    m_out_a: dict[str, MValue] | None = None
    m_out_b: dict[str, MValue] | None = None


def _binary_eval(circuit: Circuit, vec: Sequence[bool]) -> list[bool]:
    vals: list[bool] = []
    for node in circuit.nodes:
        if node.kind != "gate":
            vals.append(vec[node.id])
            continue
        ops = [vals[i] for i in node.operands]
        g = node.gate
        if g is GateKind.NOT:
            vals.append(not ops[0])
        elif g is GateKind.AND:
            vals.append(all(ops))
        elif g is GateKind.OR:
            vals.append(any(ops))
        else:
            vals.append(ops[0] != ops[1])
    return vals


def _m_eval(circuit: Circuit, vec: Sequence[MValue]) -> list[MValue]:
    vals: list[MValue] = []
    for node in circuit.nodes:
        if node.kind != "gate":
            vals.append(vec[node.id])
            continue
        ops = [vals[i] for i in node.operands]
        g = node.gate
        if g is GateKind.NOT:
            vals.append(-ops[0])
        elif g is GateKind.AND:
            vals.append(min(ops))
        elif g is GateKind.OR:
            vals.append(max(ops))
        else:
            a, b = ops
            vals.append(max(min(a, -b), min(-a, b)))
    return vals


@dataclass(frozen=True)
class _SearchContext:
    a: Circuit
    b: Circuit
    seed: int
    outputs: tuple[str, ...]
    b_pos: tuple[int, ...]  # b input position -> a-order position
    rows: tuple[tuple[int, ...], ...] | None
    expansion_cap: int
    guided: bool
    stop_on_m_discrepancy: bool


def _prepare(a: Circuit, b: Circuit) -> tuple[tuple[str, ...], tuple[int, ...]]:
    if a.registers or b.registers:
        raise ValueError("equivalence search needs register-free circuits")
    if set(a.inputs) != set(b.inputs):
        raise ValueError("circuits must share the same input names")
    if set(a.outputs) != set(b.outputs):
        raise ValueError("circuits must share the same output names")
    outputs = tuple(sorted(a.outputs))
    b_pos = tuple(a.input_index[name] for name in b.inputs)
    return outputs, b_pos


def _trial(ctx: _SearchContext, t: int) -> tuple[SearchResult | None, SearchStats]:
    a, b = ctx.a, ctx.b
    n = a.n_inputs
    rng = random.Random((ctx.seed << 32) + t)
    if ctx.rows is not None:
        w = ctx.rows[t]
    else:
        w = random_signed_permutation(n, rng)
    v = tuple(x > 0 for x in w)
    stats = SearchStats(trials=1)

    vb = [v[p] for p in ctx.b_pos]
    a_bin = _binary_eval(a, v)
    b_bin = _binary_eval(b, vb)
    for o in ctx.outputs:
        if a_bin[a.outputs[o]] != b_bin[b.outputs[o]]:
            return (
                SearchResult(
                    verdict="counterexample",
                    stats=stats,
                    trial=t,
                    output=o,
                    assignment=dict(zip(a.inputs, v)),
                    trigger="direct",
                ),
                stats,
            )
    if not ctx.guided:
        return None, stats

    wb = [w[p] for p in ctx.b_pos]
    a_m = _m_eval(a, w)
    b_m = _m_eval(b, wb)
    m_diff = [o for o in ctx.outputs if a_m[a.outputs[o]] != b_m[b.outputs[o]]]
    if m_diff:
        stats = replace(stats, m_discrepancies=1)
        if ctx.stop_on_m_discrepancy:
            o = m_diff[0]
            ra = abstract_valuation(a, w, o, mode="strict")
            rb = abstract_valuation(b, wb, o, mode="strict")
            av_b = tuple(rb.av[b.input_index[name]] for name in a.inputs)
            return (
                SearchResult(
                    verdict="m_discrepancy",
                    stats=stats,
                    trial=t,
                    output=o,
                    w=tuple(w),
                    av_a=ra.av,
                    av_b=av_b,
                    m_out_a={o: a_m[a.outputs[o]] for o in ctx.outputs},
                    m_out_b={o: b_m[b.outputs[o]] for o in ctx.outputs},
                ),
                stats,
            )

    for o in ctx.outputs:
        ra = abstract_valuation(a, w, o, mode="strict")
        rb = abstract_valuation(b, wb, o, mode="strict")
        av_a = ra.av
        av_b = tuple(rb.av[b.input_index[name]] for name in a.inputs)
        if av_a == av_b:
            continue
        stats = replace(stats, av_mismatches=stats.av_mismatches + 1)
        hit, stats = _expand(ctx, o, v, av_a, av_b, t, stats, flip_side="b")
        if hit is not None:
            return hit, stats
        hit, stats = _expand(ctx, o, v, av_b, av_a, t, stats, flip_side="a")
        if hit is not None:
            return hit, stats
    return None, stats


def _expand(
    ctx: _SearchContext,
    o: str,
    v: tuple[bool, ...],
    av_fixed: tuple[Ternary, ...],
    av_watch: tuple[Ternary, ...],
    t: int,
    stats: SearchStats,
    *,
    flip_side: str,
) -> tuple[SearchResult | None, SearchStats]:
    """Flip inputs that av_fixed ignores but av_watch still reads.

    The circuit behind av_fixed cannot move on such flips, so any output
    change in the other circuit is a disagreement.  Every candidate is
    verified by direct evaluation before being reported.
    """
    a, b = ctx.a, ctx.b
    free = [
        k
        for k in range(a.n_inputs)
        if av_fixed[k] is Ternary.X and av_watch[k] is not Ternary.X
    ]
    if not free:
        return None, stats
    watch, fixed = (b, a) if flip_side == "b" else (a, b)
    # watch is the circuit expected to move; flips happen inside av_fixed's
    # unknowns, which belong to the circuit named by the OTHER side
    watch_base = None
    count = min((1 << len(free)) - 1, ctx.expansion_cap)
    u = list(v)
    prev_mask = 0
    done = 0
    for g in range(1, count + 1):
        mask = g ^ (g >> 1)  # Gray sequence, one flip per step
        change = mask ^ prev_mask
        prev_mask = mask
        bit = change.bit_length() - 1
        u[free[bit]] = not u[free[bit]]
        done += 1
        watch_vec = u if watch is a else [u[p] for p in ctx.b_pos]
        watch_out = _binary_eval(watch, watch_vec)[watch.outputs[o]]
        if watch_base is None:
            base_vec = v if watch is a else [v[p] for p in ctx.b_pos]
            watch_base = _binary_eval(watch, base_vec)[watch.outputs[o]]
        if watch_out != watch_base:
            fixed_vec = u if fixed is a else [u[p] for p in ctx.b_pos]
            fixed_out = _binary_eval(fixed, fixed_vec)[fixed.outputs[o]]
            if fixed_out != watch_out:
                stats = replace(stats, expansions=stats.expansions + done)
                return (
                    SearchResult(
                        verdict="counterexample",
                        stats=stats,
                        trial=t,
                        output=o,
                        assignment=dict(zip(a.inputs, u)),
                        trigger="guided",
                    ),
                    stats,
                )
            stats = replace(stats, anomalies=stats.anomalies + 1)
    stats = replace(stats, expansions=stats.expansions + done)
    return None, stats


def _run_slice(
    ctx: _SearchContext, start: int, stop: int, stride: int
) -> tuple[SearchResult | None, SearchStats]:
    total = SearchStats()
    for t in range(start, stop, stride):
        hit, st = _trial(ctx, t)
        total = total.merged(st)
        if hit is not None:
            return hit, total
    return None, total


def nonequivalence_search(
    a: Circuit,
    b: Circuit,
    *,
    budget: int,
    seed: int = 0,
    expansion_cap: int = 4096,
    stimulus: Sequence[Sequence[int]] | None = None,
    stop_on_m_discrepancy: bool = False,
    guided: bool = True,
    workers: int = 1,
) -> SearchResult:
    """Look for an input where the circuits' boolean outputs differ.

    Runs at most `budget` trials (or one per stimulus row if given).
    With `guided` false, only the direct boolean comparison runs.  A
    returned counterexample always satisfies a direct re-evaluation.
    """
    outputs, b_pos = _prepare(a, b)
    rows: tuple[tuple[int, ...], ...] | None = None
    if stimulus is not None:
        from .abstraction import check_signed_permutation

        checked = []
        for row in stimulus:
            tup = tuple(row)
            check_signed_permutation(tup, a.n_inputs)
            checked.append(tup)
        rows = tuple(checked)
        budget = min(budget, len(rows))
    ctx = _SearchContext(
        a=a,
        b=b,
        seed=seed,
        outputs=outputs,
        b_pos=b_pos,
        rows=rows,
        expansion_cap=expansion_cap,
        guided=guided,
        stop_on_m_discrepancy=stop_on_m_discrepancy,
    )

    if workers > 1 and budget >= _PARALLEL_MIN:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_slice, ctx, k, budget, workers)
                for k in range(workers)
            ]
            results = [f.result() for f in futures]
        hits = [r for r, _ in results if r is not None]
        if not hits:
            total = SearchStats()
            for _, st in results:
                total = total.merged(st)
            return SearchResult(verdict="budget_exhausted", stats=total)
        winner = min(hits, key=lambda r: r.trial)
        # serial-identical stats: recount the trials before the winner
        total = SearchStats()
        for t in range(winner.trial):
            _, st = _trial(ctx, t)
            total = total.merged(st)
        total = total.merged(winner.stats)
        return replace(winner, stats=total)

    hit, total = _run_slice(ctx, 0, budget, 1)
    if hit is not None:
        return replace(hit, stats=total)
    return SearchResult(verdict="budget_exhausted", stats=total)


# --- exhaustive oracle ------------------------------------------------------


@dataclass(frozen=True)
class OracleResult:
    equivalent: bool
    output: str | None = None
    assignment: dict[str, bool] | None = None


def oracle_equivalence(a: Circuit, b: Circuit, *, max_inputs: int = 20) -> OracleResult:
    """Exhaustive truth-table comparison over the shared inputs."""
    from .simulator import truth_table_masks

    outputs, _ = _prepare(a, b)
    n = a.n_inputs
    masks_a = truth_table_masks(a, max_inputs=max_inputs)
    masks_b = truth_table_masks(b, var_order=a.inputs, max_inputs=max_inputs)
    for o in outputs:
        diff = masks_a[o] ^ masks_b[o]
        if diff:
            j = (diff & -diff).bit_length() - 1
            assignment = {
                name: bool((j >> i) & 1) for i, name in enumerate(a.inputs)
            }
            return OracleResult(equivalent=False, output=o, assignment=assignment)
    return OracleResult(equivalent=True)


# --- mutations --------------------------------------------------------------


def _extend(circuit: Circuit, output_name: str, builder) -> Circuit:
    """Append gates produced by `builder` and repoint one output at them.

    builder(add, out_id) gets an `add(gate, operands) -> id` callback and
    the current node id of the chosen output; it returns the new id.
    """
    nodes = list(circuit.nodes)

    def add(gate: GateKind, operands: tuple[int, ...]) -> int:
        nid = len(nodes)
        nodes.append(Node(nid, "gate", gate=gate, operands=operands))
        return nid

    new_id = builder(add, circuit.outputs[output_name])
    outputs = dict(circuit.outputs)
    outputs[output_name] = new_id
    return Circuit(
        inputs=circuit.inputs,
        outputs=outputs,
        nodes=tuple(nodes),
        registers=circuit.registers,
    )


def _pick(circuit: Circuit, seed: int) -> tuple[str, str, random.Random]:
    rng = random.Random(seed)
    out_name = rng.choice(sorted(circuit.outputs))
    var = rng.choice(circuit.inputs)
    return out_name, var, rng


def mutate_redundant_contradiction(circuit: Circuit, *, seed: int = 0) -> Circuit:
    """OR a contradiction x & ~x onto one output; boolean-preserving."""
    out_name, var, _ = _pick(circuit, seed)
    x = circuit.input_index[var]

    def build(add, out_id):
        nx = add(GateKind.NOT, (x,))
        both = add(GateKind.AND, (x, nx))
        return add(GateKind.OR, (out_id, both))

    return _extend(circuit, out_name, build)


def mutate_redundant_tautology(circuit: Circuit, *, seed: int = 0) -> Circuit:
    """AND a tautology x | ~x onto one output; boolean-preserving."""
    out_name, var, _ = _pick(circuit, seed)
    x = circuit.input_index[var]

    def build(add, out_id):
        nx = add(GateKind.NOT, (x,))
        either = add(GateKind.OR, (x, nx))
        return add(GateKind.AND, (out_id, either))

    return _extend(circuit, out_name, build)


def mutate_conjunctive_bug(
    circuit: Circuit, term: Sequence[tuple[str, bool]], *, seed: int = 0
) -> Circuit:
    """OR a product term onto one output.

    The mutant differs from the original exactly on assignments that
    satisfy the term but not the original output.
    """
    if not term:
        raise ValueError("term must name at least one literal")
    out_name, _, _ = _pick(circuit, seed)
    lits = []
    for name, negated in term:
        if name not in circuit.input_index:
            raise ValueError(f"term literal {name!r} is not an input")
        lits.append((circuit.input_index[name], negated))

    def build(add, out_id):
        ids = []
        for idx, negated in lits:
            ids.append(add(GateKind.NOT, (idx,)) if negated else idx)
        term_id = ids[0] if len(ids) == 1 else add(GateKind.AND, tuple(ids))
        return add(GateKind.OR, (out_id, term_id))

    return _extend(circuit, out_name, build)


def inject_mutation(
    circuit: Circuit,
    kind: str,
    *,
    seed: int = 0,
    term: Sequence[tuple[str, bool]] | None = None,
) -> Circuit:
    """Build a mutant of `circuit` by name.

    Kinds: redundant_contradiction, redundant_tautology (both
    function-preserving on binary vectors), conjunctive_bug (needs
    `term`, flips the chosen output on part of the term's cube).
    """
    if kind == "redundant_contradiction":
        return mutate_redundant_contradiction(circuit, seed=seed)
    if kind == "redundant_tautology":
        return mutate_redundant_tautology(circuit, seed=seed)
    if kind == "conjunctive_bug":
        if term is None:
            raise ValueError("conjunctive_bug needs a term")
        return mutate_conjunctive_bug(circuit, term, seed=seed)
    raise ValueError(f"unknown mutation kind {kind!r}")
