"""Gate-DAG circuits over {0,1} and over GF(q).

Both IRs share one skeleton: ``n_inputs`` input nodes followed by an ordered
tuple of gates.  Node ``i < n_inputs`` is input ``x<i>``; node
``n_inputs + j`` is gate ``g<j>``.  A gate may only reference nodes with a
smaller id, which makes every circuit acyclic by construction.

Netlist text format::

    bool inputs=2
    g0 = AND x0, x1
    g1 = NOT x0
    g2 = OR g0, g1
    outputs: g2

Arithmetic netlists carry the field in the header (``arith 3^1 inputs=1``)
and constants as ``g0 = CONST 1,2`` (coefficient residues, low degree first).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from dataclasses import field as dc_field
from typing import Sequence

import numpy as np

from .gf import FieldElement, FieldError, FieldSpec, parse_field

BOOL_KINDS = ("AND", "OR", "NOT", "CONST0", "CONST1")
ARITH_KINDS = ("ADD", "SUB", "MUL", "CONST")


class CircuitError(ValueError):
    pass


class NetlistError(CircuitError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class Gate:
    kind: str
    args: tuple[int, ...] = ()
    const: FieldElement | None = None


@dataclass(frozen=True)
class CircuitMetrics:
    size: int
    depth: int


@dataclass(frozen=True, eq=False)
class Circuit:
    n_inputs: int
    gates: tuple[Gate, ...]
    outputs: tuple[int, ...]

    kinds: tuple[str, ...] = dc_field(default=(), init=False, repr=False)

    def __post_init__(self):
        if not self.outputs:
            raise CircuitError("a circuit needs at least one output")
        n = self.n_inputs
        for j, g in enumerate(self.gates):
            if g.kind not in self.kinds:
                raise CircuitError(f"g{j}: gate kind {g.kind} not allowed in {type(self).__name__}")
            for a in g.args:
                if not 0 <= a < n + j:
                    raise CircuitError(f"g{j}: operand {a} is not an earlier node")
            self._check_gate(j, g)
        for o in self.outputs:
            if not 0 <= o < n + len(self.gates):
                raise CircuitError(f"output reference {o} out of range")

    def _check_gate(self, j: int, g: Gate) -> None:
        pass

    @property
    def n_nodes(self) -> int:
        return self.n_inputs + len(self.gates)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    def ref_name(self, node: int) -> str:
        return f"x{node}" if node < self.n_inputs else f"g{node - self.n_inputs}"

    def metrics(self) -> CircuitMetrics:
        return metrics(self)

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.n_inputs == other.n_inputs
            and self.gates == other.gates
            and self.outputs == other.outputs
            and self._header_key() == other._header_key()
        )

    def __hash__(self):
        return hash((type(self).__name__, self.n_inputs, self.gates, self.outputs))

    def _header_key(self):
        return None


@dataclass(frozen=True, eq=False)
class BoolCircuit(Circuit):
    fanin: str = "bounded"
    kinds: tuple[str, ...] = dc_field(default=BOOL_KINDS, init=False, repr=False)

    def _check_gate(self, j, g):
        if self.fanin not in ("bounded", "unbounded"):
            raise CircuitError(f"unknown fan-in mode {self.fanin!r}")
        arity = len(g.args)
        if g.kind in ("CONST0", "CONST1"):
            ok = arity == 0
        elif g.kind == "NOT":
            ok = arity == 1
        elif self.fanin == "bounded":
            ok = arity == 2
        else:
            ok = arity >= 1
        if not ok:
            raise CircuitError(f"g{j}: {g.kind} with {arity} operands in {self.fanin} mode")

    def _header_key(self):
        return self.fanin


@dataclass(frozen=True, eq=False)
class ArithCircuit(Circuit):
    field: FieldSpec = None
    kinds: tuple[str, ...] = dc_field(default=ARITH_KINDS, init=False, repr=False)

    def _check_gate(self, j, g):
        if self.field is None:
            raise CircuitError("arithmetic circuit without a field")
        if g.kind == "CONST":
            if g.args or g.const is None or g.const.field != self.field:
                raise CircuitError(f"g{j}: CONST must carry an element of {self.field}")
        elif len(g.args) != 2:
            raise CircuitError(f"g{j}: {g.kind} needs exactly 2 operands")

    def _header_key(self):
        return self.field


# ---------------------------------------------------------------------------
# builders


class _Builder:
    def __init__(self, n_inputs: int = 0):
        self.n_inputs = n_inputs
        self.gates: list[Gate] = []

    def add_input(self) -> int:
        if self.gates:
            raise CircuitError("inputs must be declared before gates")
        self.n_inputs += 1
        return self.n_inputs - 1

    def inputs(self) -> list[int]:
        return list(range(self.n_inputs))

    def gate(self, kind: str, *args: int, const: FieldElement | None = None) -> int:
        self.gates.append(Gate(kind, tuple(args), const))
        return self.n_inputs + len(self.gates) - 1

    def inline(self, circuit: Circuit, inputs: Sequence[int]) -> list[int]:
        """Copy ``circuit`` into this builder with its inputs driven by ``inputs``."""
        if len(inputs) != circuit.n_inputs:
            raise CircuitError(f"inline needs {circuit.n_inputs} input nodes, got {len(inputs)}")
        remap = list(inputs)
        for g in circuit.gates:
            remap.append(self.gate(g.kind, *(remap[a] for a in g.args), const=g.const))
        return [remap[o] for o in circuit.outputs]

    @property
    def size(self) -> int:
        return len(self.gates)


class BoolBuilder(_Builder):
    """Bounded fan-in boolean builder with a few derived gadgets."""

    def __init__(self, n_inputs: int = 0, fanin: str = "bounded"):
        super().__init__(n_inputs)
        self.fanin = fanin
        self._consts: dict[int, int] = {}

    def const(self, bit: int) -> int:
        bit = int(bool(bit))
        if bit not in self._consts:
            self._consts[bit] = self.gate("CONST1" if bit else "CONST0")
        return self._consts[bit]

    def and_(self, *xs: int) -> int:
        return self.gate("AND", *xs)

    def or_(self, *xs: int) -> int:
        return self.gate("OR", *xs)

    def not_(self, a: int) -> int:
        return self.gate("NOT", a)

    def xor(self, a: int, b: int) -> int:
        return self.and_(self.or_(a, b), self.not_(self.and_(a, b)))

    def xnor(self, a: int, b: int) -> int:
        return self.not_(self.xor(a, b))

    def mux(self, sel: int, when1: int, when0: int) -> int:
        return self.or_(self.and_(sel, when1), self.and_(self.not_(sel), when0))

    def _tree(self, kind: str, xs: Sequence[int], empty: int) -> int:
        xs = list(xs)
        if not xs:
            return self.const(empty)
        while len(xs) > 1:
            nxt = [self.gate(kind, xs[i], xs[i + 1]) for i in range(0, len(xs) - 1, 2)]
            if len(xs) % 2:
                nxt.append(xs[-1])
            xs = nxt
        return xs[0]

    def all_(self, xs: Sequence[int]) -> int:
        """Balanced AND tree (constant 1 when empty)."""
        return self._tree("AND", xs, 1)

    def any_(self, xs: Sequence[int]) -> int:
        """Balanced OR tree (constant 0 when empty)."""
        return self._tree("OR", xs, 0)

    def equals_const(self, bits: Sequence[int], value: int) -> int:
        """1 iff the big-endian word ``bits`` equals ``value``."""
        w = len(bits)
        lits = [b if (value >> (w - 1 - i)) & 1 else self.not_(b) for i, b in enumerate(bits)]
        return self.all_(lits)

    def equal(self, a: Sequence[int], b: Sequence[int]) -> int:
        return self.all_([self.xnor(x, y) for x, y in zip(a, b)])

    def less_than(self, a: Sequence[int], b: Sequence[int]) -> int:
        """1 iff big-endian word a < b (unsigned)."""
        # scan from the least significant bit: lt_i = (~a_i & b_i) | (a_i == b_i) & lt_{i+1}
        lt = self.const(0)
        for x, y in reversed(list(zip(a, b))):
            here = self.and_(self.not_(x), y)
            lt = self.or_(here, self.and_(self.xnor(x, y), lt))
        return lt

    def less_equal_const(self, bits: Sequence[int], value: int) -> int:
        """1 iff the big-endian word ``bits`` is <= value."""
        w = len(bits)
        if value >= (1 << w) - 1:
            return self.const(1)
        # bits <= value  <=>  not (value < bits)
        consts = [self.const((value >> (w - 1 - i)) & 1) for i in range(w)]
        return self.not_(self.less_than(consts, bits))

    def build(self, outputs: Sequence[int]) -> BoolCircuit:
        return BoolCircuit(self.n_inputs, tuple(self.gates), tuple(outputs), fanin=self.fanin)


class ArithBuilder(_Builder):
    def __init__(self, field: FieldSpec, n_inputs: int = 0):
        super().__init__(n_inputs)
        self.field = field
        self._consts: dict[FieldElement, int] = {}

    def const(self, value) -> int:
        el = self.field.element(value)
        if el not in self._consts:
            self._consts[el] = self.gate("CONST", const=el)
        return self._consts[el]

    def add(self, a: int, b: int) -> int:
        return self.gate("ADD", a, b)

    def sub(self, a: int, b: int) -> int:
        return self.gate("SUB", a, b)

    def mul(self, a: int, b: int) -> int:
        return self.gate("MUL", a, b)

    def one_minus(self, a: int) -> int:
        return self.sub(self.const(1), a)

    def product(self, xs: Sequence[int]) -> int:
        """Balanced product tree (constant 1 when empty)."""
        xs = list(xs)
        if not xs:
            return self.const(1)
        while len(xs) > 1:
            nxt = [self.mul(xs[i], xs[i + 1]) for i in range(0, len(xs) - 1, 2)]
            if len(xs) % 2:
                nxt.append(xs[-1])
            xs = nxt
        return xs[0]

    def power(self, a: int, e: int) -> int:
        """Square-and-multiply chain for a**e, e >= 1."""
        if e < 1:
            raise CircuitError("power chain needs e >= 1")
        result = None
        base = a
        while True:
            if e & 1:
                result = base if result is None else self.mul(result, base)
            e >>= 1
            if not e:
                return result
            base = self.mul(base, base)

    def build(self, outputs: Sequence[int]) -> ArithCircuit:
        return ArithCircuit(self.n_inputs, tuple(self.gates), tuple(outputs), field=self.field)


# ---------------------------------------------------------------------------
# evaluation


def _last_use(c: Circuit) -> list[int]:
    last = [-1] * c.n_nodes
    for j, g in enumerate(c.gates):
        for a in g.args:
            last[a] = j
    for o in c.outputs:
        last[o] = len(c.gates)
    return last


def eval_bool_batch(c: BoolCircuit, points: np.ndarray) -> np.ndarray:
    """Evaluate on a ``(batch, n_inputs)`` 0/1 array; returns ``(batch, n_outputs)`` bools."""
    points = np.asarray(points)
    if points.ndim != 2 or points.shape[1] != c.n_inputs:
        raise CircuitError(f"expected assignments of length {c.n_inputs}")
    batch = points.shape[0]
    vals: list = [points[:, i].astype(bool) for i in range(c.n_inputs)]
    vals.extend([None] * len(c.gates))
    last = _last_use(c)
    n = c.n_inputs
    zero = np.zeros(batch, dtype=bool)
    one = np.ones(batch, dtype=bool)
    for j, g in enumerate(c.gates):
        k = g.kind
        a = g.args
        if k == "AND":
            v = vals[a[0]] & vals[a[1]] if len(a) == 2 else np.logical_and.reduce([vals[i] for i in a])
        elif k == "OR":
            v = vals[a[0]] | vals[a[1]] if len(a) == 2 else np.logical_or.reduce([vals[i] for i in a])
        elif k == "NOT":
            v = ~vals[a[0]]
        elif k == "CONST0":
            v = zero
        else:
            v = one
        vals[n + j] = v
        for i in a:
            if last[i] == j:
                vals[i] = None
    out = np.empty((batch, len(c.outputs)), dtype=bool)
    for t, o in enumerate(c.outputs):
        out[:, t] = vals[o]
    return out


def eval_arith_batch(c: ArithCircuit, points: np.ndarray) -> np.ndarray:
    """Evaluate on a ``(batch, n_inputs)`` array of element indices."""
    points = np.asarray(points, dtype=np.int64)
    if points.ndim != 2 or points.shape[1] != c.n_inputs:
        raise CircuitError(f"expected assignments of length {c.n_inputs}")
    f = c.field
    if points.size and (points.min() < 0 or points.max() >= f.q):
        raise CircuitError(f"assignment entries must be element indices of {f}")
    batch = points.shape[0]
    vals: list = [points[:, i] for i in range(c.n_inputs)]
    vals.extend([None] * len(c.gates))
    last = _last_use(c)
    n = c.n_inputs
    for j, g in enumerate(c.gates):
        k = g.kind
        a = g.args
        if k == "ADD":
            v = f.vec_add(vals[a[0]], vals[a[1]])
        elif k == "SUB":
            v = f.vec_sub(vals[a[0]], vals[a[1]])
        elif k == "MUL":
            v = f.vec_mul(vals[a[0]], vals[a[1]])
        else:
            v = np.full(batch, g.const.index, dtype=np.int64)
        vals[n + j] = v
        for i in a:
            if last[i] == j:
                vals[i] = None
    out = np.empty((batch, len(c.outputs)), dtype=np.int64)
    for t, o in enumerate(c.outputs):
        out[:, t] = vals[o]
    return out


def _check_order(c: Circuit, order: Sequence[int]) -> None:
    if sorted(order) != list(range(len(c.gates))):
        raise CircuitError("evaluation order must be a permutation of the gates")


def eval_bool(c: BoolCircuit, assignment: Sequence[int], order: Sequence[int] | None = None) -> list[int]:
    """Evaluate one assignment.  ``order`` optionally fixes the gate visiting order;
    it must be topological (every operand visited before its consumer)."""
    if len(assignment) != c.n_inputs:
        raise CircuitError(f"expected {c.n_inputs} input bits, got {len(assignment)}")
    if order is None:
        return [int(b) for b in eval_bool_batch(c, np.asarray([assignment], dtype=np.int64).reshape(1, -1))[0]]
    _check_order(c, order)
    val: dict[int, bool] = {i: bool(b) for i, b in enumerate(assignment)}
    n = c.n_inputs
    for j in order:
        g = c.gates[j]
        try:
            xs = [val[a] for a in g.args]
        except KeyError:
            raise CircuitError(f"order visits g{j} before one of its operands") from None
        if g.kind == "AND":
            v = all(xs)
        elif g.kind == "OR":
            v = any(xs)
        elif g.kind == "NOT":
            v = not xs[0]
        else:
            v = g.kind == "CONST1"
        val[n + j] = v
    return [int(val[o]) for o in c.outputs]


def eval_arith(
    c: ArithCircuit, assignment: Sequence[FieldElement], order: Sequence[int] | None = None
) -> list[FieldElement]:
    if len(assignment) != c.n_inputs:
        raise CircuitError(f"expected {c.n_inputs} field elements, got {len(assignment)}")
    f = c.field
    for a in assignment:
        if not isinstance(a, FieldElement) or a.field != f:
            raise FieldError(f"assignment entry {a!r} is not an element of {f}")
    if order is None:
        idx = np.asarray([[a.index for a in assignment]], dtype=np.int64).reshape(1, -1)
        return [f.from_index(int(v)) for v in eval_arith_batch(c, idx)[0]]
    _check_order(c, order)
    val: dict[int, FieldElement] = dict(enumerate(assignment))
    n = c.n_inputs
    for j in order:
        g = c.gates[j]
        try:
            xs = [val[a] for a in g.args]
        except KeyError:
            raise CircuitError(f"order visits g{j} before one of its operands") from None
        if g.kind == "ADD":
            v = xs[0] + xs[1]
        elif g.kind == "SUB":
            v = xs[0] - xs[1]
        elif g.kind == "MUL":
            v = xs[0] * xs[1]
        else:
            v = g.const
        val[n + j] = v
    return [val[o] for o in c.outputs]


def random_topological_order(c: Circuit, rng: random.Random) -> list[int]:
    """Kahn's algorithm with random tie-breaking."""
    n = c.n_inputs
    indeg = [len({a for a in g.args if a >= n}) for g in c.gates]
    users: list[list[int]] = [[] for _ in c.gates]
    for j, g in enumerate(c.gates):
        for a in set(g.args):
            if a >= n:
                users[a - n].append(j)
    ready = [j for j, d in enumerate(indeg) if d == 0]
    order = []
    while ready:
        j = ready.pop(rng.randrange(len(ready)))
        order.append(j)
        for u in users[j]:
            indeg[u] -= 1
            if indeg[u] == 0:
                ready.append(u)
    return order


# ---------------------------------------------------------------------------
# metrics and composition


def metrics(c: Circuit) -> CircuitMetrics:
    """Gate count (inputs excluded) and the longest input-to-output path in gates."""
    depth = [0] * c.n_nodes
    n = c.n_inputs
    for j, g in enumerate(c.gates):
        depth[n + j] = 1 + max((depth[a] for a in g.args), default=0)
    return CircuitMetrics(len(c.gates), max(depth[o] for o in c.outputs))


def _same_ir(a: Circuit, b: Circuit) -> None:
    if type(a) is not type(b):
        raise CircuitError("cannot compose circuits of different IR kinds")
    if isinstance(a, ArithCircuit) and a.field != b.field:
        raise CircuitError(f"field mismatch: {a.field} vs {b.field}")


def compose(outer: Circuit, inner: Circuit, wiring: dict[int, int]) -> Circuit:
    """Feed inner outputs into outer inputs.

    ``wiring`` maps outer input index -> inner output index.  The result's
    inputs are the inner inputs followed by the unwired outer inputs (in
    their original order); its outputs are the outer outputs.
    """
    _same_ir(outer, inner)
    for oi, ii in wiring.items():
        if not 0 <= oi < outer.n_inputs:
            raise CircuitError(f"wiring drives outer input {oi}, outer has {outer.n_inputs}")
        if not 0 <= ii < inner.n_outputs:
            raise CircuitError(f"wiring reads inner output {ii}, inner has {inner.n_outputs}")
    free = [i for i in range(outer.n_inputs) if i not in wiring]
    if isinstance(outer, ArithCircuit):
        b: _Builder = ArithBuilder(outer.field, inner.n_inputs + len(free))
    else:
        fanin = "unbounded" if "unbounded" in (outer.fanin, inner.fanin) else "bounded"
        b = BoolBuilder(inner.n_inputs + len(free), fanin=fanin)
    inner_out = b.inline(inner, list(range(inner.n_inputs)))
    drive = [0] * outer.n_inputs
    for pos, i in enumerate(free):
        drive[i] = inner.n_inputs + pos
    for oi, ii in wiring.items():
        drive[oi] = inner_out[ii]
    return b.build(b.inline(outer, drive))


# ---------------------------------------------------------------------------
# netlist text


def to_netlist(c: Circuit) -> str:
    if isinstance(c, ArithCircuit):
        header = f"arith {c.field.literal} inputs={c.n_inputs}"
        if not c.field.has_default_modulus:
            header += " modulus=" + ",".join(map(str, c.field.modulus))
    else:
        header = f"bool inputs={c.n_inputs}"
        if c.fanin == "unbounded":
            header += " fanin=unbounded"
    lines = [header]
    for j, g in enumerate(c.gates):
        if g.kind == "CONST":
            rhs = f"CONST {g.const.literal}"
        elif g.args:
            rhs = g.kind + " " + ", ".join(c.ref_name(a) for a in g.args)
        else:
            rhs = g.kind
        lines.append(f"g{j} = {rhs}")
    lines.append("outputs: " + ", ".join(c.ref_name(o) for o in c.outputs))
    return "\n".join(lines) + "\n"


_HEADER_RE = re.compile(r"^(bool|arith)(?: (\S+))? inputs=(\d+)((?: \w+=\S+)*)$")
_GATE_RE = re.compile(r"^g(\d+) = ([A-Z0-9]+)(?: (.*))?$")
_REF_RE = re.compile(r"^([xg])(\d+)$")


def parse_netlist(text: str) -> Circuit:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise NetlistError(1, "empty netlist")
    no, head = lines[0]
    m = _HEADER_RE.match(head)
    if not m:
        raise NetlistError(no, f"bad header {head!r}")
    kind, field_lit, n_inputs, extras = m.group(1), m.group(2), int(m.group(3)), m.group(4)
    opts = dict(kv.split("=", 1) for kv in extras.split())
    fld = None
    if kind == "arith":
        if field_lit is None:
            raise NetlistError(no, "arith header needs a field literal p^k")
        try:
            modulus = [int(t) for t in opts.pop("modulus").split(",")] if "modulus" in opts else None
            fld = parse_field(field_lit, modulus)
        except (FieldError, ValueError) as exc:
            raise NetlistError(no, str(exc)) from None
        kinds = ARITH_KINDS
    else:
        if field_lit is not None:
            raise NetlistError(no, "bool header takes no field literal")
        kinds = BOOL_KINDS
    fanin = opts.pop("fanin", "bounded")
    if opts:
        raise NetlistError(no, f"unknown header options {sorted(opts)}")
    if kind == "bool" and fanin not in ("bounded", "unbounded"):
        raise NetlistError(no, f"bad fan-in mode {fanin!r}")

    gates: list[Gate] = []
    outputs = None

    def ref(tok: str, line: int) -> int:
        rm = _REF_RE.match(tok.strip())
        if not rm:
            raise NetlistError(line, f"bad reference {tok!r}")
        idx = int(rm.group(2))
        if rm.group(1) == "x":
            if idx >= n_inputs:
                raise NetlistError(line, f"undefined input x{idx}")
            return idx
        if idx >= len(gates):
            raise NetlistError(line, f"g{idx} referenced before definition (cycle or forward reference)")
        return n_inputs + idx

    for no, ln in lines[1:]:
        if outputs is not None:
            raise NetlistError(no, "content after outputs line")
        if ln.startswith("outputs:"):
            body = ln[len("outputs:"):].strip()
            if not body:
                raise NetlistError(no, "empty outputs list")
            outputs = [ref(t, no) for t in body.split(",")]
            continue
        gm = _GATE_RE.match(ln)
        if not gm:
            raise NetlistError(no, f"syntax error: {ln!r}")
        gid, gkind, rest = int(gm.group(1)), gm.group(2), gm.group(3)
        if gid != len(gates):
            raise NetlistError(no, f"expected g{len(gates)}, found g{gid}")
        if gkind not in kinds:
            raise NetlistError(no, f"unknown gate kind {gkind}")
        if gkind == "CONST":
            if not rest:
                raise NetlistError(no, "CONST needs an element literal")
            try:
                gates.append(Gate("CONST", (), fld.parse_element(rest)))
            except FieldError as exc:
                raise NetlistError(no, str(exc)) from None
            continue
        args = tuple(ref(t, no) for t in rest.split(",")) if rest else ()
        gates.append(Gate(gkind, args))
    if outputs is None:
        raise NetlistError(lines[-1][0], "missing outputs line")
    try:
        if kind == "arith":
            return ArithCircuit(n_inputs, tuple(gates), tuple(outputs), field=fld)
        return BoolCircuit(n_inputs, tuple(gates), tuple(outputs), fanin=fanin)
    except CircuitError as exc:
        raise NetlistError(lines[-1][0], str(exc)) from None


# ---------------------------------------------------------------------------
# random circuits (test corpora, demos)


def random_bool_circuit(
    rng: random.Random,
    n_inputs: int,
    n_gates: int,
    n_outputs: int = 1,
    fanin: str = "bounded",
    max_fanin: int = 4,
) -> BoolCircuit:
    b = BoolBuilder(n_inputs, fanin=fanin)
    for _ in range(n_gates):
        top = b.n_inputs + len(b.gates)
        if top == 0:
            b.gate(rng.choice(["CONST0", "CONST1"]))
            continue
        r = rng.random()
        if r < 0.04:
            b.gate(rng.choice(["CONST0", "CONST1"]))
        elif r < 0.3:
            b.not_(rng.randrange(top))
        else:
            kind = rng.choice(["AND", "OR"])
            w = 2 if fanin == "bounded" else rng.randint(1, max_fanin)
            b.gate(kind, *(rng.randrange(top) for _ in range(w)))
    top = b.n_inputs + len(b.gates)
    if top == 0:
        b.const(0)
        top = 1
    # bias outputs towards late gates so most of the DAG is live
    outs = [max(rng.randrange(top), rng.randrange(top)) for _ in range(n_outputs)]
    return b.build(outs)


def random_arith_circuit(
    rng: random.Random,
    field_spec: FieldSpec,
    n_inputs: int,
    n_gates: int,
    n_outputs: int = 1,
) -> ArithCircuit:
    b = ArithBuilder(field_spec, n_inputs)
    q = field_spec.q
    for _ in range(n_gates):
        top = b.n_inputs + len(b.gates)
        if top == 0 or rng.random() < 0.08:
            b.gate("CONST", const=field_spec.from_index(rng.randrange(q)))
            continue
        kind = rng.choice(["ADD", "SUB", "MUL", "MUL"])
        b.gate(kind, rng.randrange(top), rng.randrange(top))
    top = b.n_inputs + len(b.gates)
    outs = [max(rng.randrange(top), rng.randrange(top)) for _ in range(n_outputs)]
    return b.build(outs)


def all_assignments(n: int) -> np.ndarray:
    """All 2**n bit vectors, lexicographic with x0 most significant."""
    idx = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 1).astype(np.int64)
