"""Finite-field circuit toolkit: 3SAT-decider correctness as polynomial identity testing."""

from .arithmetize import ArithmetizationReport, arithmetize_circuit, build_R, unbounded_arithmetize
from .circuit import (
    ArithBuilder,
    ArithCircuit,
    BoolBuilder,
    BoolCircuit,
    CircuitMetrics,
    compose,
    eval_arith,
    eval_bool,
    metrics,
    parse_netlist,
    to_netlist,
)
from .gf import FieldElement, FieldSpec, make_field, parse_field
from .pit import (
    IdenticallyZero,
    Inconclusive,
    NonzeroWitness,
    SparsePoly,
    exhaustive_test,
    sample_test,
    symbolic_canonical,
    verify_witness,
)
from .reduction import ReductionBundle, build_A_star, build_G, build_H, build_S, build_V
from .sat3 import (
    BitString,
    EncodingProfile,
    ThreeSatInstance,
    brute_force_sat,
    decode,
    encode,
    enumerate_instances,
    is_valid_encoding,
    mini_profile,
    paper_profile,
    substitute,
    validate_instance,
)

__version__ = "0.1.0"
