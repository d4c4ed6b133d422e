"""Ternary abstraction of strength-valued runs.

Given a signed permutation w of magnitudes 1..n as the input valuation,
the abstraction procedure finds a threshold i and reports the ternary
projection of w at i: entries of magnitude below i become unknown, the
rest keep their sign.  Because threshold projection commutes with every
gate, the circuit's ternary output on such a valuation is never X, so
the projection is a compressed certificate of the binary run: the
entries it keeps are sufficient to force the output.

The iterative schedule mirrors the evaluation feedback loop: evaluate,
read off the output magnitude i, swap that magnitude with the current
ceiling j (signs stay with their positions), shrink the ceiling, repeat
while i < j.

Two modes:

* ``faithful`` stops there and projects at the loop's final i, which can
  be stale by one update when the loop exits via the shrinking ceiling.
* ``strict`` (default) re-evaluates at the final valuation, projects at
  the true output magnitude, then greedily weakens entries to X one at a
  time (in input order) wherever the ternary output stays binary.  The
  result is maximal: no further single entry can be unknown, and by
  monotonicity of the ternary semantics no larger set can be either.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import values as V
from .netlist import Circuit
from .values import GateKind, MValue, Ternary


def random_signed_permutation(n: int, rng: random.Random) -> tuple[int, ...]:
    mags = list(range(1, n + 1))
    rng.shuffle(mags)
    return tuple(m if rng.random() < 0.5 else -m for m in mags)


def check_signed_permutation(w: tuple[MValue, ...] | list[MValue], n: int) -> None:
    if len(w) != n:
        raise ValueError(f"valuation has {len(w)} entries, circuit has {n} inputs")
    for v in w:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError("signed permutation entries must be finite integers")
    if sorted(abs(v) for v in w) != list(range(1, n + 1)):
        raise ValueError(
            "valuation must use each magnitude 1..n exactly once, got "
            + ",".join(str(v) for v in w)
        )


def transpose(
    w: tuple[MValue, ...] | list[MValue], i: int, j: int
) -> tuple[int, ...]:
    """Exchange the magnitudes i and j in a signed permutation.

    Signs stay with their positions; only the magnitudes move.  With
    i == j the vector comes back unchanged, and applying the same
    transposition twice restores the original.

        transpose((3, 1, 2, 5, 4), 2, 4) == (3, 1, 4, 5, 2)
    """
    n = len(w)
    check_signed_permutation(w, n)
    for name, v in (("i", i), ("j", j)):
        if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= n:
            raise ValueError(f"{name} must be a magnitude in 1..{n}, got {v!r}")
    if i == j:
        return tuple(w)
    out = list(w)
    pos_i = next(k for k in range(n) if abs(out[k]) == i)
    pos_j = next(k for k in range(n) if abs(out[k]) == j)
    si = 1 if out[pos_i] > 0 else -1
    sj = 1 if out[pos_j] > 0 else -1
    out[pos_i] = si * j
    out[pos_j] = sj * i
    return tuple(out)


def _eval_upto(circuit: Circuit, work: list[MValue], target: int) -> MValue:
    vals: list[MValue] = []
    for node in circuit.nodes[: target + 1]:
        if node.kind != "gate":
            vals.append(work[node.id])
            continue
        ops = [vals[i] for i in node.operands]
        if node.gate is GateKind.NOT:
            vals.append(-ops[0])
        elif node.gate is GateKind.AND:
            vals.append(min(ops))
        elif node.gate is GateKind.OR:
            vals.append(max(ops))
        else:
            a, b = ops
            vals.append(max(min(a, -b), min(-a, b)))
    return vals[target]


def _k3_upto(circuit: Circuit, av: list[Ternary], target: int) -> Ternary:
    vals: list[Ternary] = []
    for node in circuit.nodes[: target + 1]:
        if node.kind != "gate":
            vals.append(av[node.id])
        else:
            vals.append(V.k3_apply(node.gate, [vals[i] for i in node.operands]))
    return vals[target]


@dataclass(frozen=True)
class IterationRecord:
    values: tuple[MValue, ...]
    output: MValue


@dataclass(frozen=True)
class AbstractionResult:
    mode: str
    av: tuple[Ternary, ...]
    threshold: int
    values: tuple[MValue, ...]
    output: MValue
    iterations: tuple[IterationRecord, ...]
    probe_insensitive: tuple[int, ...] | None = None


def abstract_valuation(
    circuit: Circuit,
    w: tuple[MValue, ...] | list[MValue],
    output: str | None = None,
    *,
    mode: str = "strict",
    sign_flip_probe: bool = False,
) -> AbstractionResult:
    if mode not in ("strict", "faithful"):
        raise ValueError(f"mode must be 'strict' or 'faithful', got {mode!r}")
    if circuit.registers:
        raise ValueError("abstraction needs a register-free circuit")
    n = circuit.n_inputs
    check_signed_permutation(w, n)
    target = circuit.output_node(output)
    work: list[MValue] = list(w)
    iterations: list[IterationRecord] = []

    i = 1
    j = n
    while i < j:
        out = _eval_upto(circuit, work, target)
        iterations.append(IterationRecord(tuple(work), out))
        i = abs(out)
        pos_i = next(k for k in range(n) if abs(work[k]) == i)
        pos_j = next(k for k in range(n) if abs(work[k]) == j)
        si = 1 if work[pos_i] > 0 else -1
        sj = 1 if work[pos_j] > 0 else -1
        work[pos_i] = si * j
        work[pos_j] = sj * i
        j -= 1

    final_out = _eval_upto(circuit, work, target)
    if mode == "faithful":
        threshold = i
        av = [V.project_ternary(v, threshold) for v in work]
    else:
        threshold = abs(final_out)
        av = [V.project_ternary(v, threshold) for v in work]
        for k in range(n):
            if av[k] is Ternary.X:
                continue
            saved = av[k]
            av[k] = Ternary.X
            if _k3_upto(circuit, av, target) is Ternary.X:
                av[k] = saved

    probe: tuple[int, ...] | None = None
    if sign_flip_probe:
        base = final_out > 0
        hits = []
        for k in range(n):
            if av[k] is Ternary.X:
                continue
            flipped = list(work)
            flipped[k] = -flipped[k]
            if (_eval_upto(circuit, flipped, target) > 0) == base:
                hits.append(k)
        probe = tuple(hits)

    return AbstractionResult(
        mode=mode,
        av=tuple(av),
        threshold=threshold,
        values=tuple(work),
        output=final_out,
        iterations=tuple(iterations),
        probe_insensitive=probe,
    )


@dataclass(frozen=True)
class MaximalCheck:
    """Outcome of checking an abstract valuation against one output.

    consistent: the ternary output is binary under the valuation.
    maximal: no single known entry can be weakened to X while the output
    stays binary.  witness is the first weakenable input index otherwise.
    """

    consistent: bool
    maximal: bool
    witness: int | None
    output: Ternary


def check_maximal(
    circuit: Circuit,
    av: tuple[Ternary, ...] | list[Ternary],
    output: str | None = None,
) -> MaximalCheck:
    if circuit.registers:
        raise ValueError("abstraction needs a register-free circuit")
    n = circuit.n_inputs
    if len(av) != n:
        raise ValueError(f"valuation has {len(av)} entries, circuit has {n} inputs")
    target = circuit.output_node(output)
    work = list(av)
    out = _k3_upto(circuit, work, target)
    if out is Ternary.X:
        return MaximalCheck(consistent=False, maximal=False, witness=None, output=out)
    for k in range(n):
        if work[k] is Ternary.X:
            continue
        saved = work[k]
        work[k] = Ternary.X
        weaker = _k3_upto(circuit, work, target)
        work[k] = saved
        if weaker is not Ternary.X:
            return MaximalCheck(
                consistent=True, maximal=False, witness=k, output=out
            )
    return MaximalCheck(consistent=True, maximal=True, witness=None, output=out)
