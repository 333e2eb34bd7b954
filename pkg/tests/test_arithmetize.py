import random

import numpy as np
import pytest

from pitreduce.arithmetize import arithmetize, arithmetize_circuit, build_R, unbounded_arithmetize
from pitreduce.circuit import (
    BoolBuilder,
    BoolCircuit,
    CircuitError,
    Gate,
    all_assignments,
    eval_arith,
    eval_arith_batch,
    eval_bool_batch,
    metrics,
    random_bool_circuit,
)
from pitreduce.gf import make_field

FIELDS = [make_field(2), make_field(3), make_field(2, 2), make_field(5)]


def gate_circuit(kind, k):
    return BoolCircuit(k, (Gate(kind, tuple(range(k))),), (k,), fanin="bounded" if k <= 2 else "unbounded")


def at(c, F, bits):
    return eval_arith(c, [F.element(b) for b in bits])[0]


def test_gate_examples():
    F = make_field(3)
    assert at(arithmetize(gate_circuit("AND", 2), F), F, [1, 1]) == F.one
    assert at(arithmetize(gate_circuit("OR", 2), F), F, [0, 0]) == F.zero
    assert at(arithmetize(gate_circuit("NOT", 1), F), F, [0]) == F.one


def test_wide_gate_examples():
    F = make_field(3)
    assert at(arithmetize(gate_circuit("OR", 4), F), F, [0, 0, 0, 1]) == F.one
    assert at(arithmetize(gate_circuit("AND", 3), F), F, [1, 1, 0]) == F.zero


def test_polynomials_off_the_cube():
    # over F(5): AND is a*b, OR is a+b-ab, NOT is 1-a on every point
    F = make_field(5)
    cand = arithmetize(gate_circuit("AND", 2), F)
    cor = arithmetize(gate_circuit("OR", 2), F)
    cnot = arithmetize(gate_circuit("NOT", 1), F)
    for a in F.elements():
        assert eval_arith(cnot, [a])[0] == F.one - a
        for b in F.elements():
            assert eval_arith(cand, [a, b])[0] == a * b
            assert eval_arith(cor, [a, b])[0] == a + b - a * b


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.literal)
def test_random_circuits_agree_on_cube(F):
    rng = random.Random(F.q)
    for _ in range(40):
        n = rng.randint(1, 7)
        c = random_bool_circuit(rng, n, rng.randint(1, 60), n_outputs=2)
        a, rep = arithmetize_circuit(c, F)
        pts = all_assignments(n)
        assert (eval_arith_batch(a, pts) == eval_bool_batch(c, pts).astype(np.int64)).all()
        sm = metrics(c)
        assert a.metrics().size <= 4 * sm.size + 1
        assert a.metrics().depth <= 3 * sm.depth + 1
        assert rep.within_bounds


@pytest.mark.parametrize("F", FIELDS[:3], ids=lambda F: F.literal)
def test_unbounded_circuits_agree_on_cube(F):
    rng = random.Random(10 + F.q)
    for _ in range(40):
        n = rng.randint(1, 7)
        c = random_bool_circuit(rng, n, rng.randint(1, 40), fanin="unbounded", max_fanin=6)
        a, rep = unbounded_arithmetize(c, F)
        pts = all_assignments(n)
        assert (eval_arith_batch(a, pts)[:, 0] == eval_bool_batch(c, pts)[:, 0]).all()
        assert rep.within_bounds


def test_report_contents():
    b = BoolBuilder(2)
    c = b.build([b.or_(b.and_(0, 1), b.not_(0))])
    a, rep = arithmetize_circuit(c, make_field(2))
    d = rep.to_dict()
    assert d["source"] == {"size": 3, "depth": 2}
    assert d["target"]["size"] == a.metrics().size
    assert d["size_bound"] == 13 and d["depth_bound"] == 7
    assert d["within_bounds"]


def test_bounded_translation_rejects_unbounded_circuit():
    with pytest.raises(CircuitError):
        arithmetize_circuit(gate_circuit("AND", 3), make_field(2))


@pytest.mark.parametrize("pk", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)])
def test_R_gadget(pk):
    F = make_field(*pk)
    R = build_R(F)
    for a in F.elements():
        r = eval_arith(R, [a])[0]
        assert (not r.is_zero()) == (a.index in (0, 1))
    assert eval_arith(R, [F.zero])[0] == F.one
    assert eval_arith(R, [F.one])[0] == F.one


def test_R_over_F3_at_2():
    F = make_field(3)
    assert eval_arith(build_R(F), [F.element(2)])[0] == F.zero


def test_R_uses_square_and_multiply():
    F = make_field(2, 3)
    # q - 1 = 7 needs at most 2*3 multiplications, plus the x(x-1) prefix and 1 - t
    assert build_R(F).metrics().size <= 12
