"""Gate-level simulation and verification over signed integer strengths.

Circuits evaluate over nonzero signed integers extended with +/-inf:
conjunction is minimum, disjunction is maximum, negation flips the
sign.  The sign of a value carries the boolean answer while the
magnitude says how strongly the circuit committed to it, which makes
single runs carry sensitivity information that plain boolean
simulation throws away.
"""

from .values import (
    INF,
    NEG_INF,
    ArityError,
    DomainError,
    GateKind,
    MValue,
    Ternary,
    apply_gate,
    binary_apply,
    format_mvalue,
    k3_apply,
    m_and,
    m_not,
    m_or,
    m_xor,
    parse_mvalue,
    parse_ternary,
    project_binary,
    project_ternary,
)
from .netlist import (
    Circuit,
    CombinationalCycleError,
    NetlistError,
    Node,
    ParseError,
    Register,
    format_netlist,
    load_netlist,
    parse_netlist,
    validate_and_order,
)
from .simulator import (
    Forest,
    Trace,
    evaluate,
    evaluate_binary,
    evaluate_ternary,
    extract_forest,
    trace_to_dot,
    trace_to_json,
    truth_table_masks,
)
from .normal_forms import (
    ComplexityReport,
    DnfForm,
    DnfOverflowError,
    TestVector,
    bcf,
    complexity_measures,
    dmcf,
    fdnf,
    format_dnf,
    format_term,
    generate_test_vectors,
    minimal_cover,
    prime_implicants,
)
from .abstraction import (
    AbstractionResult,
    MaximalCheck,
    abstract_valuation,
    check_maximal,
    random_signed_permutation,
    transpose,
)
from .equivalence import (
    OracleResult,
    SearchResult,
    SearchStats,
    inject_mutation,
    mutate_conjunctive_bug,
    mutate_redundant_contradiction,
    mutate_redundant_tautology,
    nonequivalence_search,
    oracle_equivalence,
)
from .sequential import (
    EpochMismatchError,
    InitReport,
    SeqState,
    StimulusPlan,
    TemporalValue,
    detect_initialization,
    format_temporal,
    initial_state,
    run,
    step,
    ternary_init_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "NEG_INF",
    "MValue",
    "GateKind",
    "Ternary",
    "DomainError",
    "ArityError",
    "m_not",
    "m_and",
    "m_or",
    "m_xor",
    "apply_gate",
    "k3_apply",
    "binary_apply",
    "project_binary",
    "project_ternary",
    "parse_mvalue",
    "parse_ternary",
    "format_mvalue",
    "Circuit",
    "Node",
    "Register",
    "NetlistError",
    "ParseError",
    "CombinationalCycleError",
    "parse_netlist",
    "load_netlist",
    "format_netlist",
    "validate_and_order",
    "Trace",
    "Forest",
    "evaluate",
    "evaluate_ternary",
    "evaluate_binary",
    "extract_forest",
    "truth_table_masks",
    "trace_to_json",
    "trace_to_dot",
    "DnfForm",
    "DnfOverflowError",
    "ComplexityReport",
    "TestVector",
    "dmcf",
    "bcf",
    "fdnf",
    "prime_implicants",
    "minimal_cover",
    "complexity_measures",
    "generate_test_vectors",
    "format_term",
    "format_dnf",
    "AbstractionResult",
    "MaximalCheck",
    "abstract_valuation",
    "check_maximal",
    "transpose",
    "random_signed_permutation",
    "SearchStats",
    "SearchResult",
    "OracleResult",
    "nonequivalence_search",
    "oracle_equivalence",
    "inject_mutation",
    "mutate_redundant_contradiction",
    "mutate_redundant_tautology",
    "mutate_conjunctive_bug",
    "TemporalValue",
    "EpochMismatchError",
    "SeqState",
    "StimulusPlan",
    "InitReport",
    "initial_state",
    "step",
    "run",
    "detect_initialization",
    "ternary_init_oracle",
    "format_temporal",
    "__version__",
]
