"""Core value domains and gate semantics.

Simulation values live in the set of nonzero integers extended with the
two markers +inf and -inf (here called M values).  The magnitude of a
value is its truth strength, the sign is its polarity, and the gates act
as order operations under the usual total order

    -inf < ... < -2 < -1 < 1 < 2 < ... < +inf

* NOT is sign flip,
* AND is minimum, OR is maximum,
* XOR is derived: a ^ b = (a & ~b) | (~a & b).  Its magnitude is always
  min(|a|, |b|) and its sign is negative exactly when the operand signs
  agree.

Zero is not a value; validation rejects it everywhere.

Two projections connect M values to classical logics.  `project_binary`
keeps only the sign.  `project_ternary` compares the magnitude against a
threshold n >= 1 and yields the strong three-valued logic over
{F, X, T}: values at or beyond the threshold keep their sign, weaker
values become the unknown X.  Both projections commute with every gate
(the ternary one with X treated by the strong Kleene tables), which is
what makes threshold abstraction of whole circuits sound.
"""

from __future__ import annotations

import enum
import math
import re
from typing import Iterable, Sequence

INF: float = math.inf
NEG_INF: float = -math.inf

#: An M value: a nonzero int, or one of the +/-inf markers (floats are
#: used only for the two infinities, never for finite magnitudes).
MValue = int | float


class DomainError(ValueError):
    """A value lies outside the simulation domain."""


class ArityError(ValueError):
    """A gate was applied to the wrong number of operands."""


class GateKind(enum.Enum):
    NOT = "not"
    AND = "and"
    OR = "or"
    XOR = "xor"

    def arity_ok(self, count: int) -> bool:
        if self is GateKind.NOT:
            return count == 1
        if self is GateKind.XOR:
            return count == 2
        return count >= 2

    def arity_doc(self) -> str:
        if self is GateKind.NOT:
            return "exactly 1 operand"
        if self is GateKind.XOR:
            return "exactly 2 operands"
        return "at least 2 operands"


def check_mvalue(value: MValue) -> MValue:
    """Return ``value`` unchanged, raising DomainError if unrepresentable."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DomainError(f"not an M value: {value!r}")
    if isinstance(value, float) and not math.isinf(value):
        raise DomainError(f"finite magnitudes must be integers, got {value!r}")
    if value == 0:
        raise DomainError("0 is not a representable value")
    return value


def m_not(a: MValue) -> MValue:
    return -a


def m_and(operands: Iterable[MValue]) -> MValue:
    return min(operands)


def m_or(operands: Iterable[MValue]) -> MValue:
    return max(operands)


def m_xor(a: MValue, b: MValue) -> MValue:
    return max(min(a, -b), min(-a, b))


def apply_gate(kind: GateKind, operands: Sequence[MValue]) -> MValue:
    """Apply one gate to already-validated operand values."""
    if not kind.arity_ok(len(operands)):
        raise ArityError(
            f"{kind.value} takes {kind.arity_doc()}, got {len(operands)}"
        )
    if kind is GateKind.NOT:
        return -operands[0]
    if kind is GateKind.AND:
        return min(operands)
    if kind is GateKind.OR:
        return max(operands)
    return m_xor(operands[0], operands[1])


class Ternary(enum.Enum):
    """Strong three-valued logic: false, unknown, true."""

    F = "F"
    X = "X"
    T = "T"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


_RANK = {Ternary.F: 0, Ternary.X: 1, Ternary.T: 2}
_FROM_RANK = {0: Ternary.F, 1: Ternary.X, 2: Ternary.T}


def k3_not(a: Ternary) -> Ternary:
    return _FROM_RANK[2 - _RANK[a]]


def k3_and(operands: Iterable[Ternary]) -> Ternary:
    return _FROM_RANK[min(_RANK[a] for a in operands)]


def k3_or(operands: Iterable[Ternary]) -> Ternary:
    return _FROM_RANK[max(_RANK[a] for a in operands)]


def k3_xor(a: Ternary, b: Ternary) -> Ternary:
    if a is Ternary.X or b is Ternary.X:
        return Ternary.X
    return Ternary.T if a is not b else Ternary.F


def k3_apply(kind: GateKind, operands: Sequence[Ternary]) -> Ternary:
    if not kind.arity_ok(len(operands)):
        raise ArityError(
            f"{kind.value} takes {kind.arity_doc()}, got {len(operands)}"
        )
    if kind is GateKind.NOT:
        return k3_not(operands[0])
    if kind is GateKind.AND:
        return k3_and(operands)
    if kind is GateKind.OR:
        return k3_or(operands)
    return k3_xor(operands[0], operands[1])


def binary_apply(kind: GateKind, operands: Sequence[bool]) -> bool:
    if not kind.arity_ok(len(operands)):
        raise ArityError(
            f"{kind.value} takes {kind.arity_doc()}, got {len(operands)}"
        )
    if kind is GateKind.NOT:
        return not operands[0]
    if kind is GateKind.AND:
        return all(operands)
    if kind is GateKind.OR:
        return any(operands)
    return operands[0] != operands[1]


def project_binary(a: MValue) -> bool:
    """Sign projection: True for positive values, False for negative."""
    check_mvalue(a)
    return a > 0


def project_ternary(a: MValue, n: int) -> Ternary:
    """Threshold projection at n >= 1: |a| < n becomes X, else the sign."""
    check_mvalue(a)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"threshold must be a positive integer, got {n!r}")
    if a <= -n:
        return Ternary.F
    if a >= n:
        return Ternary.T
    return Ternary.X


_VALUE_RE = re.compile(r"-?\d+\Z")


def parse_mvalue(text: str, *, inf_ceiling: int | None = None) -> MValue:
    """Parse the textual value syntax: optional '-', then digits, or inf/-inf.

    With ``inf_ceiling`` set, finite literals whose magnitude reaches the
    ceiling are promoted to the matching infinity.  This exists for
    command-line convenience only; the library itself never rounds.
    """
    t = text.strip()
    if t == "inf":
        return INF
    if t == "-inf":
        return NEG_INF
    if not _VALUE_RE.match(t):
        raise DomainError(f"bad value syntax: {text!r}")
    v = int(t)
    if v == 0:
        raise DomainError("0 is not a representable value")
    if inf_ceiling is not None and abs(v) >= inf_ceiling:
        return INF if v > 0 else NEG_INF
    return v


def format_mvalue(v: MValue) -> str:
    check_mvalue(v)
    if v == INF:
        return "inf"
    if v == NEG_INF:
        return "-inf"
    return str(int(v))


def mvalue_to_json(v: MValue) -> int | str:
    """JSON encoding: finite values as ints, infinities as strings."""
    if isinstance(v, float):
        return "inf" if v > 0 else "-inf"
    return int(v)


def parse_ternary(text: str) -> Ternary:
    t = text.strip().upper()
    if t in ("T", "F", "X"):
        return Ternary(t)
    raise DomainError(f"bad ternary value: {text!r} (expected T, F, or X)")


def format_binary(b: bool) -> str:
    return "T" if b else "F"
