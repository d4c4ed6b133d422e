"""Sequential simulation with birth-dated strength values.

A temporal value carries a sign, the epoch (cycle number) at which it
entered the circuit, and a truth strength that breaks ties within an
epoch.  Ordering is sign first, then epoch, then strength, except that
an infinite strength outranks every epoch.  Register power-up values get
epoch -1, below anything the environment can inject, so surviving
pre-birth state is visible in any later value: its epoch stays -1.

Because gates are still min/max/negation, a whole run needs no special
cases, and one fact makes initialization analysis cheap: a node's value
descends from power-up state exactly when a three-valued simulation
seeded with unknown registers leaves that node unknown.  The two views
are computed independently here and cross-checked in tests.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import total_ordering
from typing import Mapping, Sequence

from . import values as V
from .netlist import Circuit
from .values import GateKind, Ternary


class EpochMismatchError(ValueError):
    """Stimulus epochs must equal the cycle they are applied at."""


@total_ordering
@dataclass(frozen=True)
class TemporalValue:
    sign: int
    epoch: int
    truth: int | float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be -1 or +1, got {self.sign!r}")
        if not isinstance(self.epoch, int) or isinstance(self.epoch, bool):
            raise ValueError(f"epoch must be an integer, got {self.epoch!r}")
        if self.epoch < -1:
            raise ValueError(f"epoch must be >= -1, got {self.epoch}")
        ok_int = (
            isinstance(self.truth, int)
            and not isinstance(self.truth, bool)
            and self.truth >= 1
        )
        if not ok_int and not (
            isinstance(self.truth, float) and math.isinf(self.truth) and self.truth > 0
        ):
            raise ValueError(
                f"truth must be a positive integer or inf, got {self.truth!r}"
            )

    def _mag_key(self) -> tuple[int, int, int | float]:
        infinite = isinstance(self.truth, float)
        return (1 if infinite else 0, self.epoch, 0 if infinite else self.truth)

    def _key(self) -> tuple:
        m = self._mag_key()
        return (self.sign, self.sign * m[0], self.sign * m[1], self.sign * m[2])

    def __lt__(self, other: "TemporalValue") -> bool:
        if not isinstance(other, TemporalValue):
            return NotImplemented
        return self._key() < other._key()

    def __neg__(self) -> "TemporalValue":
        return TemporalValue(-self.sign, self.epoch, self.truth)

    def __abs__(self) -> "TemporalValue":
        return TemporalValue(1, self.epoch, self.truth)

    @property
    def pre_birth(self) -> bool:
        return self.epoch == -1

    def to_json(self) -> dict:
        return {
            "sign": self.sign,
            "epoch": self.epoch,
            "truth": "inf" if isinstance(self.truth, float) else self.truth,
        }


def format_temporal(v: TemporalValue, truth_digits: int = 3) -> str:
    """Fixed-width rendering: sign, epoch (pb for power-up), strength."""
    sign = "+" if v.sign > 0 else "-"
    epoch = "pb" if v.epoch == -1 else f"{v.epoch:02d}"
    if isinstance(v.truth, float):
        truth = "inf".rjust(truth_digits)
    else:
        truth = f"{v.truth:0{truth_digits}d}"
    return f"{sign}{epoch} {truth}"


@dataclass(frozen=True)
class SeqState:
    """Register contents entering a cycle; values align with circuit.registers."""

    cycle: int
    values: tuple[TemporalValue, ...]

    def by_name(self, circuit: Circuit) -> dict[str, TemporalValue]:
        return {r.name: self.values[k] for k, r in enumerate(circuit.registers)}


def initial_state(
    circuit: Circuit,
    *,
    seed: int = 0,
    truth_range: int | None = None,
    overrides: Mapping[str, TemporalValue] | None = None,
) -> SeqState:
    """Seeded power-up state: epoch -1, distinct strengths, random signs.

    `overrides` replaces chosen registers' power-up values; override
    epochs must be -1.
    """
    nregs = len(circuit.registers)
    rng = random.Random(seed)
    r = truth_range if truth_range is not None else max(nregs, 1)
    if r < nregs:
        raise ValueError(f"truth_range {r} cannot cover {nregs} registers")
    truths = rng.sample(range(1, r + 1), nregs)
    vals = [
        TemporalValue(1 if rng.random() < 0.5 else -1, -1, truths[k])
        for k in range(nregs)
    ]
    if overrides:
        index = circuit.register_index
        for name, v in overrides.items():
            if name not in index:
                raise ValueError(f"no register named {name!r}")
            if v.epoch != -1:
                raise ValueError(f"power-up override for {name!r} must have epoch -1")
            vals[index[name]] = v
    return SeqState(cycle=0, values=tuple(vals))


def _combinational(
    circuit: Circuit,
    state: SeqState,
    stim: Mapping[str, TemporalValue],
) -> list[TemporalValue]:
    reg_index = circuit.register_index
    vals: list[TemporalValue] = []
    for node in circuit.nodes:
        if node.kind == "input":
            vals.append(stim[node.ref])
        elif node.kind == "reg":
            vals.append(state.values[reg_index[node.ref]])
        else:
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
    return vals


def step(
    circuit: Circuit,
    state: SeqState,
    stimulus: Mapping[str, TemporalValue],
) -> tuple[SeqState, dict[str, TemporalValue]]:
    """Advance one cycle; stimulus epochs must equal the current cycle."""
    missing = [n for n in circuit.inputs if n not in stimulus]
    if missing:
        raise ValueError(f"missing stimulus for inputs: {', '.join(missing)}")
    for name in circuit.inputs:
        v = stimulus[name]
        if not isinstance(v, TemporalValue):
            raise TypeError(f"stimulus for {name!r} is not a temporal value")
        if v.epoch != state.cycle:
            raise EpochMismatchError(
                f"stimulus for {name!r} has epoch {v.epoch} at cycle {state.cycle}"
            )
    vals = _combinational(circuit, state, stimulus)
    nxt = SeqState(
        cycle=state.cycle + 1,
        values=tuple(vals[r.next_state] for r in circuit.registers),
    )
    outs = {name: vals[nid] for name, nid in circuit.outputs.items()}
    return nxt, outs


@dataclass(frozen=True)
class RunResult:
    states: tuple[SeqState, ...]
    outputs: tuple[dict[str, TemporalValue], ...]


class StimulusPlan:
    """Produces the input valuation for each cycle."""

    def stimulus(self, cycle: int) -> dict[str, TemporalValue]:
        raise NotImplementedError

    @staticmethod
    def seeded(inputs: Sequence[str], seed: int = 0) -> "SeededPlan":
        return SeededPlan(tuple(inputs), seed)

    @staticmethod
    def from_rows(
        inputs: Sequence[str],
        rows: Sequence[Sequence[str]],
        *,
        truth_digits: int = 3,
    ) -> "RowsPlan":
        """Rows of signed integers (or inf), one row per cycle, one column
        per input; the row index becomes the epoch."""
        parsed: list[tuple[TemporalValue, ...]] = []
        limit = 10 ** truth_digits
        for cycle, row in enumerate(rows):
            if len(row) != len(inputs):
                raise ValueError(
                    f"row {cycle} has {len(row)} cells for {len(inputs)} inputs"
                )
            vals = []
            for cell in row:
                m = V.parse_mvalue(str(cell).strip())
                truth = abs(m)
                if isinstance(truth, int) and truth >= limit:
                    raise ValueError(
                        f"row {cycle}: strength {truth} needs more than "
                        f"{truth_digits} digits"
                    )
                vals.append(TemporalValue(1 if m > 0 else -1, cycle, truth))
            parsed.append(tuple(vals))
        return RowsPlan(tuple(inputs), tuple(parsed))


class SeededPlan(StimulusPlan):
    """Per cycle: a signed permutation of strengths 1..n, epoch = cycle."""

    def __init__(self, inputs: tuple[str, ...], seed: int):
        self.inputs = inputs
        self.seed = seed

    def stimulus(self, cycle: int) -> dict[str, TemporalValue]:
        rng = random.Random((self.seed << 32) + cycle)
        n = len(self.inputs)
        mags = list(range(1, n + 1))
        rng.shuffle(mags)
        return {
            name: TemporalValue(
                1 if rng.random() < 0.5 else -1, cycle, mags[i]
            )
            for i, name in enumerate(self.inputs)
        }


class RowsPlan(StimulusPlan):
    def __init__(self, inputs: tuple[str, ...], rows: tuple[tuple[TemporalValue, ...], ...]):
        self.inputs = inputs
        self.rows = rows

    def __len__(self) -> int:
        return len(self.rows)

    def stimulus(self, cycle: int) -> dict[str, TemporalValue]:
        if cycle >= len(self.rows):
            raise ValueError(f"stimulus rows cover {len(self.rows)} cycles")
        return dict(zip(self.inputs, self.rows[cycle]))


def run(
    circuit: Circuit,
    *,
    cycles: int,
    plan: StimulusPlan,
    init: SeqState | None = None,
    seed: int = 0,
) -> RunResult:
    state = init if init is not None else initial_state(circuit, seed=seed)
    if state.cycle != 0:
        raise ValueError("runs start at cycle 0")
    states = [state]
    outputs: list[dict[str, TemporalValue]] = []
    for c in range(cycles):
        state, outs = step(circuit, state, plan.stimulus(c))
        states.append(state)
        outputs.append(outs)
    return RunResult(states=tuple(states), outputs=tuple(outputs))


# --- initialization analysis -------------------------------------------------


@dataclass(frozen=True)
class InitRow:
    cycle: int
    oldest_epoch: int
    span: int


@dataclass(frozen=True)
class InitReport:
    """Where power-up state stops being visible.

    initialized_at is the first cycle whose register state contains no
    epoch -1 value (0 for register-free circuits), or None if power-up
    state survives the whole run.  Each row reports the oldest epoch
    still held and the span (cycle - oldest_epoch) + 2, counting the
    cycles that state reaches back over including the power-up boundary.
    """

    initialized_at: int | None
    rows: tuple[InitRow, ...]


def detect_initialization(circuit: Circuit, states: Sequence[SeqState]) -> InitReport:
    if not circuit.registers:
        return InitReport(initialized_at=0, rows=())
    rows = []
    initialized_at: int | None = None
    for st in states:
        oldest = min(v.epoch for v in st.values)
        rows.append(InitRow(cycle=st.cycle, oldest_epoch=oldest, span=(st.cycle - oldest) + 2))
        if oldest > -1 and initialized_at is None:
            initialized_at = st.cycle
    return InitReport(initialized_at=initialized_at, rows=tuple(rows))


def ternary_init_oracle(
    circuit: Circuit, plan: StimulusPlan, cycles: int
) -> int | None:
    """First cycle with a fully known register state, by three-valued runs.

    Registers start unknown; stimulus is the plan's signs.  Independent
    of the strength machinery on purpose.
    """
    if not circuit.registers:
        return 0
    reg_index = circuit.register_index
    regs: list[Ternary] = [Ternary.X] * len(circuit.registers)
    for c in range(cycles):
        stim = plan.stimulus(c)
        tern_in = {
            name: Ternary.T if v.sign > 0 else Ternary.F for name, v in stim.items()
        }
        vals: list[Ternary] = []
        for node in circuit.nodes:
            if node.kind == "input":
                vals.append(tern_in[node.ref])
            elif node.kind == "reg":
                vals.append(regs[reg_index[node.ref]])
            else:
                vals.append(V.k3_apply(node.gate, [vals[i] for i in node.operands]))
        regs = [vals[r.next_state] for r in circuit.registers]
        if all(v is not Ternary.X for v in regs):
            return c + 1
    return None
