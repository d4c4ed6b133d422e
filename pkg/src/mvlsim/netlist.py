"""Gate-level netlist format: parsing, the circuit data model, printing.

The textual format is line oriented.  ``#`` starts a comment.  Blank
lines are ignored.  Declarations:

    inputs a b c        # primary inputs, order is significant
    outputs f g         # exported names
    reg r               # one register per line
    f = a & ~b | c ^ d  # combinational definition
    r <= f & a          # register next-state

Operator precedence, tightest first: ``~``, ``&``, ``^``, ``|``, ``->``.
Implication is right associative and is lowered to ``~a | b``.  Chains
of ``&`` or ``|`` at one precedence level become a single wide gate;
parentheses keep their own structure.  ``^`` chains fold left into
binary gates.

Input order matters: the k-th declared input is variable k everywhere
else in the library (truth tables, normal forms, vectors).  Definitions
may reference names defined later in the file; cycles through
combinational definitions are rejected.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from .values import ArityError, GateKind

KEYWORDS = frozenset({"inputs", "outputs", "reg"})


class NetlistError(ValueError):
    """Base for netlist problems; carries a source position when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        if self.col is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, col {self.col}: {self.message}"


class ParseError(NetlistError):
    pass


class UndeclaredIdentifierError(NetlistError):
    pass


class DuplicateDefinitionError(NetlistError):
    pass


class MissingDefinitionError(NetlistError):
    pass


class CombinationalCycleError(NetlistError):
    pass


class StructureError(NetlistError):
    """A programmatically built circuit violates the data-model contract."""


class UnusedNodeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Node:
    """One vertex of the circuit DAG.

    kind is 'input', 'reg', or 'gate'.  Inputs and registers carry their
    declared name in ref and have no operands.  Gate operands are node
    ids, always smaller than the gate's own id.
    """

    id: int
    kind: str
    gate: GateKind | None = None
    operands: tuple[int, ...] = ()
    ref: str | None = None


@dataclass(frozen=True)
class Register:
    name: str
    node: int
    next_state: int


@dataclass(frozen=True, eq=True)
class Circuit:
    inputs: tuple[str, ...]
    outputs: dict[str, int] = field(compare=True)
    nodes: tuple[Node, ...] = ()
    registers: tuple[Register, ...] = ()

    @cached_property
    def input_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.inputs)}

    @cached_property
    def register_index(self) -> dict[str, int]:
        return {r.name: k for k, r in enumerate(self.registers)}

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def combinational(self) -> bool:
        return not self.registers

    def node_count(self) -> int:
        return len(self.nodes)

    def output_node(self, name: str | None = None) -> int:
        """Node id of a named output; name may be omitted for single-output circuits."""
        if name is None:
            if len(self.outputs) != 1:
                raise ValueError(
                    f"circuit has {len(self.outputs)} outputs, name one of: "
                    + ", ".join(sorted(self.outputs))
                )
            return next(iter(self.outputs.values()))
        if name not in self.outputs:
            raise ValueError(f"no output named {name!r}")
        return self.outputs[name]

    def output_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.outputs))


# --- tokenizer ---------------------------------------------------------

_TOKEN_RE = re.compile(r"[ \t]*(->|<=|[()~&|^=]|[A-Za-z_][A-Za-z0-9_]*)")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _tokenize_line(text: str, lineno: int) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    cut = text.find("#")
    if cut >= 0:
        text = text[:cut]
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            bad_at = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(
                f"unexpected character {text[bad_at]!r}", lineno, bad_at + 1
            )
        toks.append(_Tok(m.group(1), lineno, m.start(1) + 1))
        pos = m.end()
    return toks


# --- expression ASTs ----------------------------------------------------
# Plain tuples: ('var', name, tok), ('not', sub), ('and', [subs]),
# ('or', [subs]), ('xor', a, b), ('imp', a, b).


class _ExprParser:
    def __init__(self, toks: list[_Tok], lineno: int):
        self.toks = toks
        self.pos = 0
        self.lineno = lineno

    def peek(self) -> str | None:
        return self.toks[self.pos].text if self.pos < len(self.toks) else None

    def take(self) -> _Tok:
        if self.pos >= len(self.toks):
            raise ParseError("unexpected end of expression", self.lineno)
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.take()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def parse(self) -> tuple:
        ast = self.implies()
        if self.pos < len(self.toks):
            tok = self.toks[self.pos]
            raise ParseError(f"trailing {tok.text!r}", tok.line, tok.col)
        return ast

    def implies(self) -> tuple:
        lhs = self.disjunct()
        if self.peek() == "->":
            self.take()
            return ("imp", lhs, self.implies())
        return lhs

    def disjunct(self) -> tuple:
        parts = [self.xorterm()]
        while self.peek() == "|":
            self.take()
            parts.append(self.xorterm())
        return parts[0] if len(parts) == 1 else ("or", parts)

    def xorterm(self) -> tuple:
        ast = self.conjunct()
        while self.peek() == "^":
            self.take()
            ast = ("xor", ast, self.conjunct())
        return ast

    def conjunct(self) -> tuple:
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else ("and", parts)

    def unary(self) -> tuple:
        if self.peek() == "~":
            self.take()
            return ("not", self.unary())
        return self.atom()

    def atom(self) -> tuple:
        tok = self.take()
        if tok.text == "(":
            inner = self.implies()
            self.expect(")")
            return inner
        if _IDENT_RE.match(tok.text) and tok.text not in KEYWORDS:
            return ("var", tok.text, tok)
        raise ParseError(f"expected identifier or '(', got {tok.text!r}", tok.line, tok.col)


def _walk_vars(ast: tuple) -> Iterator[tuple[str, _Tok]]:
    kind = ast[0]
    if kind == "var":
        yield ast[1], ast[2]
    elif kind == "not":
        yield from _walk_vars(ast[1])
    elif kind in ("and", "or"):
        for sub in ast[1]:
            yield from _walk_vars(sub)
    else:
        yield from _walk_vars(ast[1])
        yield from _walk_vars(ast[2])


# --- parsing and lowering ----------------------------------------------


@dataclass
class _Def:
    name: str
    is_reg_next: bool
    ast: tuple
    tok: _Tok


def parse_netlist(text: str) -> Circuit:
    """Parse netlist source into a validated circuit."""
    inputs: list[str] = []
    outputs: list[str] = []
    regs: list[str] = []
    decl_tok: dict[str, _Tok] = {}
    defs: dict[str, _Def] = {}
    reg_next: dict[str, _Def] = {}
    def_order: list[_Def] = []

    def declare(name: str, tok: _Tok, into: list[str], what: str) -> None:
        if name in KEYWORDS:
            raise ParseError(f"{name!r} is a reserved word", tok.line, tok.col)
        if what != "output" and name in decl_tok:
            raise DuplicateDefinitionError(
                f"{name!r} already declared", tok.line, tok.col
            )
        if what == "output" and name in outputs:
            raise DuplicateDefinitionError(
                f"output {name!r} listed twice", tok.line, tok.col
            )
        into.append(name)
        if what != "output":
            decl_tok[name] = tok

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokenize_line(raw, lineno)
        if not toks:
            continue
        head = toks[0]
        if head.text in ("inputs", "outputs"):
            if len(toks) < 2:
                raise ParseError(f"empty {head.text} declaration", lineno, head.col)
            for tok in toks[1:]:
                if not _IDENT_RE.match(tok.text):
                    raise ParseError(
                        f"expected identifier, got {tok.text!r}", tok.line, tok.col
                    )
                if head.text == "inputs":
                    declare(tok.text, tok, inputs, "input")
                else:
                    declare(tok.text, tok, outputs, "output")
            continue
        if head.text == "reg":
            if len(toks) != 2 or not _IDENT_RE.match(toks[1].text):
                raise ParseError("reg takes exactly one name", lineno, head.col)
            declare(toks[1].text, toks[1], regs, "reg")
            continue
        if not _IDENT_RE.match(head.text):
            raise ParseError("expected declaration or definition", lineno, head.col)
        if head.text in KEYWORDS:
            raise ParseError(f"{head.text!r} is a reserved word", lineno, head.col)
        if len(toks) < 2 or toks[1].text not in ("=", "<="):
            raise ParseError("expected '=' or '<=' after name", lineno, head.col)
        is_next = toks[1].text == "<="
        expr = _ExprParser(toks[2:], lineno).parse()
        d = _Def(head.text, is_next, expr, head)
        if is_next:
            if head.text in reg_next:
                raise DuplicateDefinitionError(
                    f"register {head.text!r} assigned twice", lineno, head.col
                )
            reg_next[head.text] = d
        else:
            if head.text in defs:
                raise DuplicateDefinitionError(
                    f"{head.text!r} defined twice", lineno, head.col
                )
            defs[head.text] = d
        def_order.append(d)

    input_set = set(inputs)
    reg_set = set(regs)
    known = input_set | reg_set | set(defs)

    for d in def_order:
        if d.is_reg_next:
            if d.name not in reg_set:
                raise ParseError(
                    f"next-state assignment to non-register {d.name!r}",
                    d.tok.line,
                    d.tok.col,
                )
        else:
            if d.name in input_set:
                raise DuplicateDefinitionError(
                    f"cannot redefine input {d.name!r}", d.tok.line, d.tok.col
                )
            if d.name in reg_set:
                raise DuplicateDefinitionError(
                    f"register {d.name!r} needs '<=', not '='", d.tok.line, d.tok.col
                )
        for name, tok in _walk_vars(d.ast):
            if name not in known:
                raise UndeclaredIdentifierError(
                    f"undeclared identifier {name!r}", tok.line, tok.col
                )

    if not outputs:
        raise MissingDefinitionError("netlist declares no outputs")
    for name in outputs:
        if name not in known:
            raise MissingDefinitionError(f"output {name!r} is never defined")
    for name in regs:
        if name not in reg_next:
            raise MissingDefinitionError(f"register {name!r} has no next-state")

    lowerer = _Lowerer(inputs, regs, defs)
    for d in def_order:
        if d.is_reg_next:
            lowerer.next_state[d.name] = lowerer.lower_expr(d.ast)
        else:
            lowerer.resolve(d.name, d.tok)

    registers = tuple(
        Register(name, lowerer.name_to_id[name], lowerer.next_state[name])
        for name in regs
    )
    out_map = {name: lowerer.resolve_name_only(name) for name in outputs}
    circuit = Circuit(
        inputs=tuple(inputs),
        outputs=out_map,
        nodes=tuple(lowerer.nodes),
        registers=registers,
    )
    return validate_and_order(circuit)


class _Lowerer:
    def __init__(self, inputs: list[str], regs: list[str], defs: dict[str, _Def]):
        self.defs = defs
        self.nodes: list[Node] = []
        self.name_to_id: dict[str, int] = {}
        self.next_state: dict[str, int] = {}
        self.cons: dict[tuple[GateKind, tuple[int, ...]], int] = {}
        self.in_progress: set[str] = set()
        for name in inputs:
            nid = len(self.nodes)
            self.nodes.append(Node(nid, "input", ref=name))
            self.name_to_id[name] = nid
        for name in regs:
            nid = len(self.nodes)
            self.nodes.append(Node(nid, "reg", ref=name))
            self.name_to_id[name] = nid

    def resolve(self, name: str, tok: _Tok) -> int:
        if name in self.name_to_id:
            return self.name_to_id[name]
        if name in self.in_progress:
            raise CombinationalCycleError(
                f"combinational cycle through {name!r}", tok.line, tok.col
            )
        self.in_progress.add(name)
        nid = self.lower_expr(self.defs[name].ast)
        self.in_progress.discard(name)
        self.name_to_id[name] = nid
        return nid

    def resolve_name_only(self, name: str) -> int:
        return self.name_to_id[name]

    def lower_expr(self, ast: tuple) -> int:
        kind = ast[0]
        if kind == "var":
            return self.resolve(ast[1], ast[2])
        if kind == "not":
            return self.mk(GateKind.NOT, (self.lower_expr(ast[1]),))
        if kind == "and":
            return self.mk(GateKind.AND, tuple(self.lower_expr(s) for s in ast[1]))
        if kind == "or":
            return self.mk(GateKind.OR, tuple(self.lower_expr(s) for s in ast[1]))
        if kind == "xor":
            return self.mk(
                GateKind.XOR, (self.lower_expr(ast[1]), self.lower_expr(ast[2]))
            )
        # a -> b is sugar for ~a | b
        a = self.lower_expr(ast[1])
        b = self.lower_expr(ast[2])
        return self.mk(GateKind.OR, (self.mk(GateKind.NOT, (a,)), b))

    def mk(self, gate: GateKind, operands: tuple[int, ...]) -> int:
        key = (gate, operands)
        hit = self.cons.get(key)
        if hit is not None:
            return hit
        nid = len(self.nodes)
        self.nodes.append(Node(nid, "gate", gate=gate, operands=operands))
        self.cons[key] = nid
        return nid


def load_netlist(path: str) -> Circuit:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_netlist(fh.read())


# --- validation ---------------------------------------------------------


def validate_and_order(circuit: Circuit) -> Circuit:
    """Check the data-model invariants, repairing gate order when possible.

    Node ids must equal tuple positions, inputs come first in declared
    order, registers next, and every gate reads only smaller ids.  Gates
    listed out of order are re-sorted topologically and renumbered; a
    true cycle raises CombinationalCycleError.  Gates feeding neither an
    output nor a register produce an UnusedNodeWarning.  Running this on
    its own result returns it unchanged.
    """
    n_in = len(circuit.inputs)
    n_reg = len(circuit.registers)
    for i, node in enumerate(circuit.nodes):
        if node.id != i:
            raise StructureError(f"node at position {i} has id {node.id}")
    for i, name in enumerate(circuit.inputs):
        node = circuit.nodes[i] if i < len(circuit.nodes) else None
        if node is None or node.kind != "input" or node.ref != name:
            raise StructureError(f"node {i} must be input {name!r}")
        if node.operands:
            raise StructureError(f"input node {i} has operands")
    for k, reg in enumerate(circuit.registers):
        i = n_in + k
        node = circuit.nodes[i] if i < len(circuit.nodes) else None
        if node is None or node.kind != "reg" or node.ref != reg.name:
            raise StructureError(f"node {i} must be register {reg.name!r}")
        if reg.node != i:
            raise StructureError(f"register {reg.name!r} points at node {reg.node}")
        if not (0 <= reg.next_state < len(circuit.nodes)):
            raise StructureError(f"register {reg.name!r} next-state id out of range")

    needs_sort = False
    for node in circuit.nodes[n_in + n_reg :]:
        if node.kind != "gate" or node.gate is None:
            raise StructureError(f"node {node.id} must be a gate")
        if not node.gate.arity_ok(len(node.operands)):
            raise ArityError(
                f"node {node.id}: {node.gate.value} takes "
                f"{node.gate.arity_doc()}, got {len(node.operands)}"
            )
        for op in node.operands:
            if not (0 <= op < len(circuit.nodes)):
                raise StructureError(f"node {node.id} reads missing node {op}")
            if op >= node.id:
                needs_sort = True

    if not circuit.outputs:
        raise StructureError("circuit has no outputs")
    for name, nid in circuit.outputs.items():
        if not (0 <= nid < len(circuit.nodes)):
            raise StructureError(f"output {name!r} points at missing node {nid}")

    if needs_sort:
        circuit = _topo_renumber(circuit)

    live = set(circuit.outputs.values()) | {r.next_state for r in circuit.registers}
    stack = list(live)
    while stack:
        nid = stack.pop()
        for op in circuit.nodes[nid].operands:
            if op not in live:
                live.add(op)
                stack.append(op)
    dead = [n.id for n in circuit.nodes if n.kind == "gate" and n.id not in live]
    if dead:
        warnings.warn(
            UnusedNodeWarning(f"gate nodes feed nothing: {sorted(dead)}"),
            stacklevel=2,
        )
    return circuit


def _topo_renumber(circuit: Circuit) -> Circuit:
    n_fixed = len(circuit.inputs) + len(circuit.registers)
    order: list[int] = []
    state: dict[int, int] = {}  # 0 visiting, 1 done

    def visit(nid: int) -> None:
        st = state.get(nid)
        if st == 1:
            return
        if st == 0:
            raise CombinationalCycleError(f"combinational cycle through node {nid}")
        state[nid] = 0
        for op in circuit.nodes[nid].operands:
            if op >= n_fixed:
                visit(op)
        state[nid] = 1
        order.append(nid)

    for node in circuit.nodes[n_fixed:]:
        visit(node.id)

    remap = {i: i for i in range(n_fixed)}
    for pos, old in enumerate(order):
        remap[old] = n_fixed + pos
    new_nodes = list(circuit.nodes[:n_fixed])
    for old in order:
        node = circuit.nodes[old]
        new_nodes.append(
            Node(
                remap[old],
                "gate",
                gate=node.gate,
                operands=tuple(remap[op] for op in node.operands),
            )
        )
    return Circuit(
        inputs=circuit.inputs,
        outputs={name: remap[nid] for name, nid in circuit.outputs.items()},
        nodes=tuple(new_nodes),
        registers=tuple(
            Register(r.name, r.node, remap[r.next_state]) for r in circuit.registers
        ),
    )


# --- canonical printing --------------------------------------------------


def format_netlist(circuit: Circuit) -> str:
    """Render a circuit in canonical form.

    One line per gate node, in id order, each a single-level expression
    over node names; outputs aliased at the end; register next-states
    last.  Input and register declaration order is preserved because it
    is meaningful; output lists and alias lines are sorted.  Parsing the
    result reproduces the circuit exactly, node ids included.
    """
    user_names = set(circuit.inputs) | set(circuit.outputs) | {
        r.name for r in circuit.registers
    }
    prefix = "_n"
    while any(re.fullmatch(re.escape(prefix) + r"\d+", n) for n in user_names):
        prefix = "_" + prefix

    def node_name(nid: int) -> str:
        node = circuit.nodes[nid]
        if node.ref is not None:
            return node.ref
        return f"{prefix}{nid}"

    lines: list[str] = []
    lines.append("inputs " + " ".join(circuit.inputs))
    lines.append("outputs " + " ".join(sorted(circuit.outputs)))
    for reg in circuit.registers:
        lines.append(f"reg {reg.name}")
    for node in circuit.nodes:
        if node.kind != "gate":
            continue
        ops = [node_name(op) for op in node.operands]
        if node.gate is GateKind.NOT:
            expr = "~" + ops[0]
        elif node.gate is GateKind.AND:
            expr = " & ".join(ops)
        elif node.gate is GateKind.OR:
            expr = " | ".join(ops)
        else:
            expr = f"{ops[0]} ^ {ops[1]}"
        lines.append(f"{node_name(node.id)} = {expr}")
    for name in sorted(circuit.outputs):
        target = node_name(circuit.outputs[name])
        if target != name:
            lines.append(f"{name} = {target}")
    for reg in circuit.registers:
        lines.append(f"{reg.name} <= {node_name(reg.next_state)}")
    return "\n".join(lines) + "\n"
