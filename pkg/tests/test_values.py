"""Algebra-level tests: gate semantics, projections, value syntax."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mvlsim import values as V
from mvlsim.values import INF, NEG_INF, GateKind, Ternary

finite = st.integers(min_value=-9, max_value=9).filter(lambda v: v != 0)
mvalues = st.one_of(finite, st.sampled_from([INF, NEG_INF]))
thresholds = st.integers(min_value=1, max_value=6)
ternaries = st.sampled_from(list(Ternary))


# Reference operator table: (a, b) -> (not a, not b, and, or, xor).
OP_TABLE = {
    (-2, -1): (2, 1, -2, -1, -1),
    (-2, 1): (2, -1, -2, 1, 1),
    (-1, 2): (1, -2, -1, 2, 1),
    (1, 2): (-1, -2, 1, 2, -1),
}


def test_operator_table():
    for (a, b), (na, nb, ab_and, ab_or, ab_xor) in OP_TABLE.items():
        assert V.m_not(a) == na
        assert V.m_not(b) == nb
        assert V.m_and([a, b]) == ab_and
        assert V.m_or([a, b]) == ab_or
        assert V.m_xor(a, b) == ab_xor


def test_xor_strength_attenuates():
    # equal signs give a negative result at the weaker strength
    assert V.m_xor(3, 5) == -3
    assert V.m_xor(5, 3) == -3
    assert V.m_xor(-4, -9) == -4
    # opposing signs give a positive result at the weaker strength
    assert V.m_xor(-7, 2) == 2
    assert V.m_xor(2, -7) == 2


@given(a=mvalues, b=mvalues)
def test_xor_magnitude_and_sign(a, b):
    r = V.m_xor(a, b)
    assert abs(r) == min(abs(a), abs(b))
    assert (r < 0) == ((a > 0) == (b > 0))


@given(a=mvalues, b=mvalues)
def test_xor_matches_definition(a, b):
    expanded = V.m_or([V.m_and([a, -b]), V.m_and([-a, b])])
    assert V.m_xor(a, b) == expanded


@given(ops=st.lists(mvalues, min_size=2, max_size=5))
def test_binary_projection_commutes(ops):
    for kind in (GateKind.AND, GateKind.OR):
        assert V.project_binary(V.apply_gate(kind, ops)) == V.binary_apply(
            kind, [V.project_binary(o) for o in ops]
        )
    a, b = ops[0], ops[1]
    assert V.project_binary(V.m_xor(a, b)) == (
        V.project_binary(a) != V.project_binary(b)
    )
    assert V.project_binary(V.m_not(a)) == (not V.project_binary(a))


@given(ops=st.lists(mvalues, min_size=2, max_size=5), n=thresholds)
def test_ternary_projection_commutes(ops, n):
    for kind in (GateKind.AND, GateKind.OR):
        assert V.project_ternary(V.apply_gate(kind, ops), n) == V.k3_apply(
            kind, [V.project_ternary(o, n) for o in ops]
        )
    a, b = ops[0], ops[1]
    assert V.project_ternary(V.m_xor(a, b), n) == V.k3_xor(
        V.project_ternary(a, n), V.project_ternary(b, n)
    )
    assert V.project_ternary(V.m_not(a), n) == V.k3_not(V.project_ternary(a, n))


# The lattice laws, each in the shape it is usually quoted.


@given(a=mvalues, b=mvalues)
def test_law_commutativity(a, b):
    assert V.m_and([a, b]) == V.m_and([b, a])
    assert V.m_or([a, b]) == V.m_or([b, a])
    assert V.m_xor(a, b) == V.m_xor(b, a)


@given(a=mvalues, b=mvalues, c=mvalues)
def test_law_associativity(a, b, c):
    assert V.m_and([V.m_and([a, b]), c]) == V.m_and([a, V.m_and([b, c])])
    assert V.m_or([V.m_or([a, b]), c]) == V.m_or([a, V.m_or([b, c])])


@given(a=mvalues)
def test_law_idempotence(a):
    assert V.m_and([a, a]) == a
    assert V.m_or([a, a]) == a


@given(a=mvalues, b=mvalues)
def test_law_absorption(a, b):
    assert V.m_and([a, V.m_or([a, b])]) == a
    assert V.m_or([a, V.m_and([a, b])]) == a


@given(a=mvalues, b=mvalues, c=mvalues)
def test_law_distributivity(a, b, c):
    assert V.m_and([a, V.m_or([b, c])]) == V.m_or(
        [V.m_and([a, b]), V.m_and([a, c])]
    )
    assert V.m_or([a, V.m_and([b, c])]) == V.m_and(
        [V.m_or([a, b]), V.m_or([a, c])]
    )


@given(a=mvalues)
def test_law_identity(a):
    assert V.m_and([a, INF]) == a
    assert V.m_or([a, NEG_INF]) == a


@given(a=mvalues)
def test_law_consumption(a):
    assert V.m_and([a, NEG_INF]) == NEG_INF
    assert V.m_or([a, INF]) == INF


def test_law_duality():
    assert V.m_not(NEG_INF) == INF
    assert V.m_not(INF) == NEG_INF


@given(a=mvalues)
def test_law_double_negation(a):
    assert V.m_not(V.m_not(a)) == a


@given(a=mvalues, b=mvalues)
def test_law_de_morgan(a, b):
    assert V.m_not(V.m_and([a, b])) == V.m_or([V.m_not(a), V.m_not(b)])
    assert V.m_not(V.m_or([a, b])) == V.m_and([V.m_not(a), V.m_not(b)])


@given(a=mvalues, b=mvalues)
def test_law_contradiction_below_tautology(a, b):
    assert V.m_and([a, V.m_not(a)]) <= V.m_or([b, V.m_not(b)])


def test_no_general_complement():
    # a | ~a only reaches the top element for the two infinities, so a
    # positive answer of finite strength is weaker than certainty.
    assert V.m_or([3, V.m_not(3)]) == 3
    assert V.m_or([3, V.m_not(3)]) != INF
    assert V.project_binary(3) is True
    assert V.m_or([INF, V.m_not(INF)]) == INF
    assert V.m_and([-1, V.m_not(-1)]) == -1


@given(a=mvalues)
def test_contradiction_strength(a):
    # x & ~x is false at exactly the strength of x, never stronger
    assert V.m_and([a, V.m_not(a)]) == -abs(a)
    assert V.m_or([a, V.m_not(a)]) == abs(a)


# Domain and arity validation.


@pytest.mark.parametrize("bad", [0, True, False, 2.5, float("nan"), "3", None])
def test_rejects_non_values(bad):
    with pytest.raises(V.DomainError):
        V.check_mvalue(bad)


def test_infinities_are_values():
    assert V.check_mvalue(INF) == INF
    assert V.check_mvalue(NEG_INF) == NEG_INF
    assert V.check_mvalue(-17) == -17


def test_gate_arities():
    with pytest.raises(V.ArityError):
        V.apply_gate(GateKind.NOT, [1, 2])
    with pytest.raises(V.ArityError):
        V.apply_gate(GateKind.XOR, [1, 2, 3])
    with pytest.raises(V.ArityError):
        V.apply_gate(GateKind.AND, [1])
    assert V.apply_gate(GateKind.AND, [5, 2, -1]) == -1
    assert V.apply_gate(GateKind.OR, [5, 2, -1]) == 5
    assert V.apply_gate(GateKind.NOT, [4]) == -4
    assert V.apply_gate(GateKind.XOR, [2, -3]) == 2


def test_k3_tables():
    F, X, T = Ternary.F, Ternary.X, Ternary.T
    assert V.k3_and([F, X]) is F
    assert V.k3_and([X, T]) is X
    assert V.k3_and([T, T]) is T
    assert V.k3_or([F, X]) is X
    assert V.k3_or([X, T]) is T
    assert V.k3_or([F, F]) is F
    assert V.k3_not(F) is T
    assert V.k3_not(X) is X
    assert V.k3_xor(T, T) is F
    assert V.k3_xor(T, F) is T
    assert V.k3_xor(X, T) is X
    assert V.k3_xor(F, X) is X


@given(a=mvalues, n=thresholds)
def test_ternary_projection_cases(a, n):
    t = V.project_ternary(a, n)
    if abs(a) < n:
        assert t is Ternary.X
    elif a > 0:
        assert t is Ternary.T
    else:
        assert t is Ternary.F


def test_projection_threshold_validation():
    with pytest.raises(V.DomainError):
        V.project_ternary(3, 0)
    with pytest.raises(V.DomainError):
        V.project_ternary(3, True)
    with pytest.raises(V.DomainError):
        V.project_ternary(0, 2)


def test_parse_format_round_trip():
    for text, value in [("inf", INF), ("-inf", NEG_INF), ("42", 42), ("-3", -3)]:
        assert V.parse_mvalue(text) == value
        assert V.format_mvalue(value) == text
    assert V.parse_mvalue("  7 ") == 7


@pytest.mark.parametrize("bad", ["0", "abc", "3.5", "", "+4", "inf2"])
def test_parse_rejects(bad):
    with pytest.raises(V.DomainError):
        V.parse_mvalue(bad)


def test_parse_with_ceiling():
    assert V.parse_mvalue("9", inf_ceiling=5) == INF
    assert V.parse_mvalue("-7", inf_ceiling=7) == NEG_INF
    assert V.parse_mvalue("4", inf_ceiling=5) == 4
    assert math.isinf(V.parse_mvalue("inf", inf_ceiling=100))


def test_json_encoding():
    assert V.mvalue_to_json(5) == 5
    assert V.mvalue_to_json(-2) == -2
    assert V.mvalue_to_json(INF) == "inf"
    assert V.mvalue_to_json(NEG_INF) == "-inf"


def test_parse_ternary():
    assert V.parse_ternary("T") is Ternary.T
    assert V.parse_ternary(" x ") is Ternary.X
    assert V.parse_ternary("f") is Ternary.F
    with pytest.raises(V.DomainError):
        V.parse_ternary("maybe")


def test_format_binary():
    assert V.format_binary(True) == "T"
    assert V.format_binary(False) == "F"
