"""Gate-local translation of boolean circuits into arithmetic circuits over GF(q).

AND -> a*b, OR -> 1-(1-a)(1-b), NOT -> 1-a.  On 0/1 inputs the arithmetic
circuit computes exactly the boolean outputs as the field elements 0 and 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .circuit import ArithBuilder, ArithCircuit, BoolCircuit, CircuitError, CircuitMetrics, metrics
from .gf import FieldSpec

# Bounded fan-in: OR costs 4 gates (two 1-x, one product, one 1-x) and adds 3 levels.
SIZE_FACTOR = 4
DEPTH_FACTOR = 3


@dataclass(frozen=True)
class ArithmetizationReport:
    source_metrics: CircuitMetrics
    target_metrics: CircuitMetrics
    size_ratio: Fraction
    depth_ratio: Fraction
    size_bound: int
    depth_bound: int
    depth_constant: int = DEPTH_FACTOR

    @property
    def within_bounds(self) -> bool:
        return self.target_metrics.size <= self.size_bound and self.target_metrics.depth <= self.depth_bound

    def to_dict(self) -> dict:
        return {
            "source": {"size": self.source_metrics.size, "depth": self.source_metrics.depth},
            "target": {"size": self.target_metrics.size, "depth": self.target_metrics.depth},
            "size_ratio": str(self.size_ratio),
            "depth_ratio": str(self.depth_ratio),
            "size_bound": self.size_bound,
            "depth_bound": self.depth_bound,
            "depth_constant": self.depth_constant,
            "within_bounds": self.within_bounds,
        }


def _ratio(a: int, b: int) -> Fraction:
    return Fraction(a, b) if b else Fraction(a)


def _report(src: BoolCircuit, dst: ArithCircuit, size_bound: int, depth_bound: int) -> ArithmetizationReport:
    sm, tm = metrics(src), metrics(dst)
    return ArithmetizationReport(sm, tm, _ratio(tm.size, sm.size), _ratio(tm.depth, sm.depth), size_bound, depth_bound)


def arithmetize_circuit(c: BoolCircuit, field: FieldSpec) -> tuple[ArithCircuit, ArithmetizationReport]:
    if c.fanin != "bounded":
        raise CircuitError("arithmetize_circuit takes bounded fan-in circuits; use unbounded_arithmetize")
    b = ArithBuilder(field, c.n_inputs)
    node = list(range(c.n_inputs))
    for g in c.gates:
        a = [node[i] for i in g.args]
        if g.kind == "AND":
            node.append(b.mul(a[0], a[1]))
        elif g.kind == "OR":
            node.append(b.one_minus(b.mul(b.one_minus(a[0]), b.one_minus(a[1]))))
        elif g.kind == "NOT":
            node.append(b.one_minus(a[0]))
        elif g.kind == "CONST1":
            node.append(b.const(1))
        else:
            node.append(b.const(0))
    out = b.build([node[o] for o in c.outputs])
    sm = metrics(c)
    return out, _report(c, out, SIZE_FACTOR * sm.size + 1, DEPTH_FACTOR * sm.depth + 1)


def max_fanin(c: BoolCircuit) -> int:
    return max((len(g.args) for g in c.gates), default=0)


def unbounded_arithmetize(c: BoolCircuit, field: FieldSpec) -> tuple[ArithCircuit, ArithmetizationReport]:
    """Wide AND becomes a balanced product tree, wide OR becomes 1 - prod(1 - a_i).

    Depth bound: 3 * depth * max(1, ceil(log2(max fan-in))) + 1.
    """
    b = ArithBuilder(field, c.n_inputs)
    node = list(range(c.n_inputs))
    total_fanin = 0
    for g in c.gates:
        a = [node[i] for i in g.args]
        total_fanin += len(a)
        if g.kind == "AND":
            node.append(b.product(a))
        elif g.kind == "OR":
            node.append(b.one_minus(b.product([b.one_minus(x) for x in a])))
        elif g.kind == "NOT":
            node.append(b.one_minus(a[0]))
        elif g.kind == "CONST1":
            node.append(b.const(1))
        else:
            node.append(b.const(0))
    out = b.build([node[o] for o in c.outputs])
    sm = metrics(c)
    levels = max(1, math.ceil(math.log2(max(1, max_fanin(c)))))
    size_bound = 2 * total_fanin + len(c.gates) + 1
    return out, _report(c, out, size_bound, DEPTH_FACTOR * sm.depth * levels + 1)


def arithmetize(c: BoolCircuit, field: FieldSpec) -> ArithCircuit:
    """Either translation, picked by the circuit's fan-in mode."""
    if c.fanin == "bounded":
        return arithmetize_circuit(c, field)[0]
    return unbounded_arithmetize(c, field)[0]


def build_R(field: FieldSpec) -> ArithCircuit:
    """One-input circuit for 1 - (x(x-1))^(q-1): nonzero exactly on {0, 1}."""
    b = ArithBuilder(field, 1)
    x = 0
    t = b.mul(x, b.sub(x, b.const(1)))
    return b.build([b.one_minus(b.power(t, field.q - 1))])
