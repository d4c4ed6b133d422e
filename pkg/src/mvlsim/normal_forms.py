"""Disjunctive normal forms, prime covers, complexity measures, vectors.

Two canonical two-level forms are computed for each output, always as a
pair: one DNF for the function and one for its complement.

* The min-form (`dmcf`) is built structurally, bottom-up over the gate
  DAG, keeping for every node the set of product terms for the node and
  for its negation.  Superset terms are absorbed eagerly after every
  combination step; the result does not depend on the order absorption
  interleaves with the per-gate set operations, because absorption is
  confluent with union and product.  Terms that contain both polarities
  of one variable are kept; they matter for the strength semantics even
  though they are contradictions classically.

* The prime form (`bcf`) is semantic: all prime implicants of the
  function, computed from its truth table.  Merging two complementary
  single-literal cubes into the empty (tautology) cube is banned, so a
  tautology keeps all single literals as primes and every form stays
  free of constants.

`minimal_cover` extracts a smallest subset of terms that still covers
the function's onset, exactly (branch and bound) for small inputs.
The two cover sizes, for the function and for its complement, add up to
the corresponding complexity measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .netlist import Circuit
from .simulator import node_masks, variable_mask
from .values import GateKind, INF, MValue, NEG_INF, Ternary

#: A product term: a set of (variable index, negated) literals.
Term = frozenset[tuple[int, bool]]


class DnfOverflowError(Exception):
    """Term sets outgrew the configured budget.

    `partial_size` reports how many terms existed when the limit hit.
    """

    def __init__(self, partial_size: int, budget: int):
        self.partial_size = partial_size
        self.budget = budget
        super().__init__(
            f"term budget exceeded: {partial_size} terms, budget {budget}"
        )


def term_sort_key(term: Term) -> tuple[tuple[int, bool], ...]:
    return tuple(sorted(term))


def sorted_terms(terms: Iterable[Term]) -> list[Term]:
    return sorted(terms, key=term_sort_key)


def format_term(term: Term, names: Sequence[str]) -> str:
    if not term:
        return "1"
    return "".join(
        ("~" if neg else "") + names[i] for i, neg in sorted(term)
    )


def format_dnf(terms: Iterable[Term], names: Sequence[str]) -> str:
    ts = sorted_terms(terms)
    if not ts:
        return "0"
    return " + ".join(format_term(t, names) for t in ts)


def is_contradictory(term: Term) -> bool:
    pos = {i for i, neg in term if not neg}
    return any((i, True) in term for i in pos)


# --- integer-packed terms (internal) --------------------------------------
# Literal (i, False) is bit 2i, literal (i, True) is bit 2i+1.


def _pack(term: Term) -> int:
    m = 0
    for i, neg in term:
        m |= 1 << (2 * i + (1 if neg else 0))
    return m


def _unpack(packed: int) -> Term:
    out = []
    i = 0
    while packed:
        if packed & 1:
            out.append((i >> 1, bool(i & 1)))
        packed >>= 1
        i += 1
    return frozenset(out)


def _absorb(terms: set[int]) -> set[int]:
    """Drop every term that strictly contains another term of the set."""
    if len(terms) <= 1:
        return terms
    by_size = sorted(terms, key=lambda t: (t.bit_count(), t))
    kept: list[int] = []
    out: set[int] = set()
    for t in by_size:
        absorbed = False
        for s in kept:
            if s & t == s and s != t:
                absorbed = True
                break
        if not absorbed:
            kept.append(t)
            out.add(t)
    return out


def _cross(a: set[int], b: set[int], budget: int) -> set[int]:
    out: set[int] = set()
    for ta in a:
        for tb in b:
            out.add(ta | tb)
            if len(out) > budget:
                raise DnfOverflowError(len(out), budget)
    return _absorb(out)


def _union(a: set[int], b: set[int], budget: int) -> set[int]:
    out = a | b
    if len(out) > budget:
        raise DnfOverflowError(len(out), budget)
    return _absorb(out)


@dataclass(frozen=True)
class DnfForm:
    """A function/complement pair of DNFs over named variables."""

    names: tuple[str, ...]
    pos: frozenset[Term]
    neg: frozenset[Term]

    def format_pos(self) -> str:
        return format_dnf(self.pos, self.names)

    def format_neg(self) -> str:
        return format_dnf(self.neg, self.names)


DEFAULT_TERM_BUDGET = 20000


def dmcf(
    circuit: Circuit,
    output: str | None = None,
    *,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> DnfForm:
    """Structural min-form of one output, with its complement form.

    Raises DnfOverflowError if any intermediate term set (before
    absorption) exceeds `term_budget`.
    """
    if circuit.registers:
        raise ValueError("normal forms need a register-free circuit")
    target = circuit.output_node(output)
    pairs: list[tuple[set[int], set[int]] | None] = [None] * (target + 1)
    for node in circuit.nodes[: target + 1]:
        if node.kind == "input":
            i = node.id
            pairs[node.id] = ({1 << (2 * i)}, {1 << (2 * i + 1)})
            continue
        ops = [pairs[i] for i in node.operands]
        if node.gate is GateKind.NOT:
            p, n = ops[0]
            pairs[node.id] = (n, p)
        elif node.gate is GateKind.AND:
            p, n = ops[0]
            for p2, n2 in ops[1:]:
                p = _cross(p, p2, term_budget)
                n = _union(n, n2, term_budget)
            pairs[node.id] = (p, n)
        elif node.gate is GateKind.OR:
            p, n = ops[0]
            for p2, n2 in ops[1:]:
                p = _union(p, p2, term_budget)
                n = _cross(n, n2, term_budget)
            pairs[node.id] = (p, n)
        else:
            (pa, na), (pb, nb) = ops
            pos = _union(
                _cross(pa, nb, term_budget), _cross(na, pb, term_budget), term_budget
            )
            neg = _cross(
                _union(na, pb, term_budget), _union(pa, nb, term_budget), term_budget
            )
            pairs[node.id] = (pos, neg)
    p, n = pairs[target]
    return DnfForm(
        names=circuit.inputs,
        pos=frozenset(_unpack(t) for t in p),
        neg=frozenset(_unpack(t) for t in n),
    )


# --- semantic forms from truth tables --------------------------------------


@lru_cache(maxsize=64)
def _var_masks(n: int) -> tuple[int, ...]:
    return tuple(variable_mask(i, n) for i in range(n))


def cube_mask(term: Term, n: int) -> int:
    """Truth-table mask of the assignments a term covers."""
    full = (1 << (1 << n)) - 1
    masks = _var_masks(n)
    m = full
    for i, neg in term:
        if i >= n:
            raise ValueError(f"literal on variable {i}, but only {n} variables")
        m &= (full & ~masks[i]) if neg else masks[i]
    return m


def fdnf_terms(onset: int, n: int) -> frozenset[Term]:
    """Full DNF: one complete term per satisfied assignment."""
    out = []
    j = 0
    m = onset
    while m:
        if m & 1:
            out.append(frozenset((i, not (j >> i) & 1) for i in range(n)))
        m >>= 1
        j += 1
    return frozenset(out)


def prime_implicants(onset: int, n: int) -> frozenset[Term]:
    """All prime implicant cubes of the function given by `onset`.

    A cube counts as prime when no single literal can be removed without
    leaving the onset, under the constraint that the last literal of a
    cube is never removed (the empty cube is banned).  For a tautology
    this yields all 2n single-literal cubes.
    """
    if onset == 0:
        return frozenset()
    full = (1 << (1 << n)) - 1
    offset = full & ~onset
    frontier: set[Term] = set(fdnf_terms(onset, n))
    seen: set[Term] = set(frontier)
    primes: set[Term] = set()
    while frontier:
        grown: set[Term] = set()
        for cube in frontier:
            can_drop = False
            if len(cube) > 1:
                for lit in cube:
                    sub = cube - {lit}
                    if cube_mask(sub, n) & offset == 0:
                        can_drop = True
                        if sub not in seen:
                            seen.add(sub)
                            grown.add(sub)
            if not can_drop:
                primes.add(cube)
        frontier = grown
    return frozenset(primes)


DEFAULT_TABLE_LIMIT = 16


def bcf(
    circuit: Circuit,
    output: str | None = None,
    *,
    max_inputs: int = DEFAULT_TABLE_LIMIT,
) -> DnfForm:
    """Prime form of one output: all primes of it and of its complement."""
    if circuit.registers:
        raise ValueError("normal forms need a register-free circuit")
    target = circuit.output_node(output)
    n = circuit.n_inputs
    masks = node_masks(circuit, max_inputs=max_inputs)
    onset = masks[target]
    full = (1 << (1 << n)) - 1
    return DnfForm(
        names=circuit.inputs,
        pos=prime_implicants(onset, n),
        neg=prime_implicants(full & ~onset, n),
    )


def fdnf(
    circuit: Circuit,
    output: str | None = None,
    *,
    max_inputs: int = DEFAULT_TABLE_LIMIT,
) -> DnfForm:
    if circuit.registers:
        raise ValueError("normal forms need a register-free circuit")
    target = circuit.output_node(output)
    n = circuit.n_inputs
    masks = node_masks(circuit, max_inputs=max_inputs)
    onset = masks[target]
    full = (1 << (1 << n)) - 1
    return DnfForm(
        names=circuit.inputs,
        pos=fdnf_terms(onset, n),
        neg=fdnf_terms(full & ~onset, n),
    )


# --- minimum covers ---------------------------------------------------------


def minimal_cover(
    terms: Iterable[Term], onset: int, n: int, *, exact: bool | None = None
) -> frozenset[Term]:
    """Smallest subset of `terms` whose cubes cover `onset`.

    Every term must be an implicant (its cube inside the onset).  With
    `exact` unset, exact branch-and-bound runs for n <= 16 and greedy
    beyond; pass True/False to force.  Both strategies and the result
    are deterministic.
    """
    cands = sorted_terms(set(terms))
    masks = []
    for t in cands:
        m = cube_mask(t, n)
        if m & ~onset:
            raise ValueError(f"term {sorted(t)} is not an implicant")
        masks.append(m)
    if onset == 0:
        return frozenset()
    covered = 0
    for m in masks:
        covered |= m
    if covered != onset:
        raise ValueError("terms do not cover the onset")
    if exact is None:
        exact = n <= 16

    def greedy() -> list[int]:
        chosen: list[int] = []
        left = onset
        while left:
            best_i = -1
            best_gain = -1
            for i, m in enumerate(masks):
                gain = (m & left).bit_count()
                if gain > best_gain:
                    best_gain = gain
                    best_i = i
            chosen.append(best_i)
            left &= ~masks[best_i]
        return chosen

    best = greedy()
    if not exact:
        return frozenset(cands[i] for i in best)

    max_cov = max(m.bit_count() for m in masks if m) if any(masks) else 1
    by_bit_cache: dict[int, list[int]] = {}

    def covers_of(bit: int) -> list[int]:
        got = by_bit_cache.get(bit)
        if got is None:
            got = [i for i, m in enumerate(masks) if m >> bit & 1]
            by_bit_cache[bit] = got
        return got

    def search(left: int, chosen: list[int]) -> None:
        nonlocal best
        if left == 0:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        need = -(-left.bit_count() // max_cov)
        if len(chosen) + need >= len(best):
            return
        bit = (left & -left).bit_length() - 1
        for i in covers_of(bit):
            chosen.append(i)
            search(left & ~masks[i], chosen)
            chosen.pop()

    search(onset, [])
    return frozenset(cands[i] for i in best)


# --- complexity measures ----------------------------------------------------


@dataclass(frozen=True)
class ComplexityReport:
    """Cover-size measures of one output function.

    structural: terms in the minimum covers taken from the min-form pair.
    prime: same, taken from the prime-form pair; never larger, since
    every min-form term contains a prime.  The variable measure has no
    exact procedure here and is reported as an upper bound equal to the
    structural measure.
    """

    names: tuple[str, ...]
    structural: int
    prime: int
    variable_upper: int
    min_cover_pos: frozenset[Term]
    min_cover_neg: frozenset[Term]
    prime_cover_pos: frozenset[Term]
    prime_cover_neg: frozenset[Term]


def complexity_measures(
    circuit: Circuit,
    output: str | None = None,
    *,
    term_budget: int = DEFAULT_TERM_BUDGET,
    max_inputs: int = DEFAULT_TABLE_LIMIT,
) -> ComplexityReport:
    n = circuit.n_inputs
    target = circuit.output_node(output)
    onset = node_masks(circuit, max_inputs=max_inputs)[target]
    full = (1 << (1 << n)) - 1
    offset = full & ~onset
    m_form = dmcf(circuit, output, term_budget=term_budget)
    mc_pos = minimal_cover(m_form.pos, onset, n)
    mc_neg = minimal_cover(m_form.neg, offset, n)
    b_form = bcf(circuit, output, max_inputs=max_inputs)
    bc_pos = minimal_cover(b_form.pos, onset, n)
    bc_neg = minimal_cover(b_form.neg, offset, n)
    c_s = len(mc_pos) + len(mc_neg)
    return ComplexityReport(
        names=circuit.inputs,
        structural=c_s,
        prime=len(bc_pos) + len(bc_neg),
        variable_upper=c_s,
        min_cover_pos=mc_pos,
        min_cover_neg=mc_neg,
        prime_cover_pos=bc_pos,
        prime_cover_neg=bc_neg,
    )


# --- test vectors ------------------------------------------------------------


@dataclass(frozen=True)
class TestVector:
    """One directed stimulus derived from a cover term.

    ternary sets the term's literals and leaves everything else unknown.
    m_values is the strength encoding: literals get magnitude 2 (or 1
    when the term mentions every variable), absent variables sit below
    at +1, and variables named in `control` are pinned at infinity.
    """

    term: Term
    expected: bool
    ternary: tuple[Ternary, ...]
    m_values: tuple[MValue, ...]


def _vector_for(
    term: Term, n: int, expected: bool, control_idx: frozenset[int]
) -> TestVector:
    lit = dict(term)
    tern = tuple(
        Ternary.X if i not in lit else (Ternary.F if lit[i] else Ternary.T)
        for i in range(n)
    )
    full_term = len(lit) == n and not is_contradictory(term)
    base = 1 if full_term else 2
    vals: list[MValue] = []
    for i in range(n):
        if i not in lit:
            vals.append(1)
        elif i in control_idx:
            vals.append(NEG_INF if lit[i] else INF)
        else:
            vals.append(-base if lit[i] else base)
    return TestVector(term=term, expected=expected, ternary=tern, m_values=tuple(vals))


def generate_test_vectors(
    circuit: Circuit,
    output: str | None = None,
    *,
    control: Iterable[str] = (),
    term_budget: int = DEFAULT_TERM_BUDGET,
    max_inputs: int = DEFAULT_TABLE_LIMIT,
) -> tuple[TestVector, ...]:
    """Vectors exercising each term of the minimum covers, both polarities.

    Contradictory terms cover no assignment and so never appear in the
    covers; every returned vector is realizable.
    """
    n = circuit.n_inputs
    target = circuit.output_node(output)
    for name in control:
        if name not in circuit.input_index:
            raise ValueError(f"control name {name!r} is not an input")
    control_idx = frozenset(circuit.input_index[c] for c in control)
    onset = node_masks(circuit, max_inputs=max_inputs)[target]
    full = (1 << (1 << n)) - 1
    form = dmcf(circuit, output, term_budget=term_budget)
    pos_cover = minimal_cover(form.pos, onset, n)
    neg_cover = minimal_cover(form.neg, full & ~onset, n)
    vecs = [
        _vector_for(t, n, True, control_idx) for t in sorted_terms(pos_cover)
    ]
    vecs += [
        _vector_for(t, n, False, control_idx) for t in sorted_terms(neg_cover)
    ]
    return tuple(vecs)
