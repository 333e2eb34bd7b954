"""Circuits that turn "C decides 3SAT on encodings" into a PIT instance.

For a decider circuit C over m-bit encodings this module builds

* ``V``  : bool, m -> 1, recognises valid encodings bit-for-bit;
* ``S0``, ``S1`` : bool, m -> m, substitute the lowest variable by 0 / 1;
* ``G``  : arith, prod_i R(x_i) * A_V(x);
* ``H``  : arith, y0 (A_C(one)-1) + y1 A_C(zero)
                 + y2 (A_C(f) - (1 - (1 - A_C(S0 f)) (1 - A_C(S1 f))));
* ``A_star = H * G`` over inputs (f, y0, y1, y2).

A_star vanishes on all of GF(q)^(m+3) iff C agrees with satisfiability on
every valid encoding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arithmetize import arithmetize_circuit, build_R
from .circuit import ArithBuilder, ArithCircuit, BoolBuilder, BoolCircuit, CircuitError, eval_arith, metrics, to_netlist
from .gf import FieldSpec
from .sat3 import BitString, EncodingProfile, one_n, zero_n


@dataclass
class _Slot:
    active: int
    sign: int
    index: list[int]


class _Layout:
    """Input-node view of an encoding inside a BoolBuilder."""

    def __init__(self, profile: EncodingProfile, bits: list[int]):
        self.profile = profile
        self.bits = bits
        self.tag = bits[0:2]
        self.slots = [
            [self._slot(c, l) for l in range(profile.literal_slots)] for c in range(profile.clause_slots)
        ]

    def _slot(self, c: int, l: int) -> _Slot:
        o = self.profile.literal_offset(c, l)
        w = self.profile.index_width
        return _Slot(self.bits[o], self.bits[o + 1], self.bits[o + 2:o + 2 + w])

    def clause_word(self, c: int) -> list[int]:
        o = self.profile.clause_offset(c)
        return self.bits[o:o + self.profile.clause_width]


def _index_is(b: BoolBuilder, idx: list[int], j: int) -> int:
    """1 iff the index field equals j (implicit index 1 when the field is empty)."""
    if not idx:
        return b.const(1 if j == 1 else 0)
    return b.equals_const(idx, j)


def build_V(n: int, profile: EncodingProfile) -> BoolCircuit:
    """Validity recogniser: output 1 iff the input is encode(n, f) for some f."""
    if profile.n != n:
        raise CircuitError(f"profile is for n={profile.n}, not {n}")
    pr = profile
    b = BoolBuilder(pr.total_length)
    lay = _Layout(pr, b.inputs())
    t0, t1 = lay.tag
    checks = [b.not_(b.and_(t0, t1))]
    is_formula = b.and_(b.not_(t0), b.not_(t1))

    if pr.padded:
        off = pr.padding_offset
        rest = lay.bits[off + 1:]
        checks.append(lay.bits[off])
        if rest:
            checks.append(b.not_(b.any_(rest)))

    clause_active = []
    for c, slots in enumerate(lay.slots):
        for l, s in enumerate(slots):
            # inactive slot must be all zero
            zero_rest = b.not_(b.any_([s.sign] + s.index))
            checks.append(b.or_(s.active, zero_rest))
            if s.index:
                nonzero = b.any_(s.index)
                in_range = b.and_(nonzero, b.less_equal_const(s.index, pr.n))
                checks.append(b.or_(b.not_(s.active), in_range))
            if l:
                prev = slots[l - 1]
                checks.append(b.or_(b.not_(s.active), prev.active))
                if s.index:
                    checks.append(b.or_(b.not_(s.active), b.less_than(prev.index, s.index)))
        clause_active.append(slots[0].active)
        if c:
            checks.append(b.or_(b.not_(slots[0].active), clause_active[c - 1]))
            lt = b.less_than(lay.clause_word(c - 1), lay.clause_word(c))
            checks.append(b.or_(b.not_(slots[0].active), lt))

    any_clause = b.any_(clause_active)
    # formula tag needs a clause; constant tags need none
    checks.append(b.or_(b.not_(is_formula), clause_active[0]))
    checks.append(b.or_(is_formula, b.not_(any_clause)))
    return b.build([b.all_(checks)])


def _sort_words(b: BoolBuilder, words: list[list[int]]) -> list[list[int]]:
    """Odd-even transposition sort: active words ascending, all-zero words last."""
    words = [list(w) for w in words]
    k = len(words)
    for rnd in range(k):
        for i in range(rnd % 2, k - 1, 2):
            lo, hi = words[i], words[i + 1]
            swap = b.and_(hi[0], b.or_(b.not_(lo[0]), b.less_than(hi, lo)))
            words[i] = [b.mux(swap, y, x) for x, y in zip(lo, hi)]
            words[i + 1] = [b.mux(swap, x, y) for x, y in zip(lo, hi)]
    return words


def build_S(n: int, profile: EncodingProfile, value: int) -> BoolCircuit:
    """Substitution circuit: encode(f) -> encode(substitute(f, value)).

    Relies on the canonical layout: the lowest occurring variable can only sit
    in literal slot 0 of any clause, so removing it is a one-slot shift.
    Constant instances pass through unchanged.
    """
    if profile.n != n:
        raise CircuitError(f"profile is for n={profile.n}, not {n}")
    if value not in (0, 1):
        raise CircuitError("substitution value must be 0 or 1")
    pr = profile
    b = BoolBuilder(pr.total_length)
    lay = _Layout(pr, b.inputs())
    t0, t1 = lay.tag
    is_formula = b.and_(b.not_(t0), b.not_(t1))

    occurs = []
    for j in range(1, pr.n + 1):
        occurs.append(b.any_([b.and_(s.active, _index_is(b, s.index, j)) for cl in lay.slots for s in cl]))
    lowest = []
    for j in range(pr.n):
        earlier = b.any_(occurs[:j]) if j else None
        lowest.append(occurs[j] if earlier is None else b.and_(occurs[j], b.not_(earlier)))

    zero = b.const(0)
    words, empties = [], []
    for c, slots in enumerate(lay.slots):
        first = slots[0]
        hits_lowest = b.any_([b.and_(lowest[j - 1], _index_is(b, first.index, j)) for j in range(1, pr.n + 1)])
        target = b.and_(first.active, hits_lowest)
        agrees = first.sign if value else b.not_(first.sign)
        satisfied = b.and_(target, agrees)
        falsified = b.and_(target, b.not_(agrees))
        if len(slots) > 1:
            empties.append(b.and_(falsified, b.not_(slots[1].active)))
        else:
            empties.append(falsified)
        word = lay.clause_word(c)
        shifted = word[pr.literal_width:] + [zero] * pr.literal_width
        keep = b.not_(satisfied)
        words.append([b.and_(keep, b.mux(falsified, s, w)) for w, s in zip(word, shifted)])

    words = _sort_words(b, words)
    # drop adjacent duplicates, then sort again to close the gaps
    deduped = [words[0]]
    for c in range(1, len(words)):
        dup = b.and_(words[c][0], b.equal(words[c], words[c - 1]))
        deduped.append([b.and_(b.not_(dup), w) for w in words[c]])
    words = _sort_words(b, deduped) if len(words) > 1 else deduped

    any_empty = b.any_(empties)
    no_clause = b.not_(words[0][0])
    keep_clauses = b.and_(is_formula, b.not_(any_empty))
    out = [
        b.mux(is_formula, any_empty, t0),
        b.mux(is_formula, b.and_(b.not_(any_empty), no_clause), t1),
    ]
    for c in range(pr.clause_slots):
        o = pr.clause_offset(c)
        for i, w in enumerate(words[c]):
            out.append(b.mux(is_formula, b.and_(keep_clauses, w), lay.bits[o + i]))
    out += lay.bits[pr.padding_offset:]
    return b.build(out)


def build_G(n: int, profile: EncodingProfile, field: FieldSpec, V: BoolCircuit | None = None) -> ArithCircuit:
    """R(x_1) ... R(x_m) * A_V(x): nonzero exactly on valid encodings."""
    V = V if V is not None else build_V(n, profile)
    A_V, _ = arithmetize_circuit(V, field)
    R = build_R(field)
    b = ArithBuilder(field, profile.total_length)
    rs = [b.inline(R, [i])[0] for i in range(profile.total_length)]
    (av,) = b.inline(A_V, b.inputs())
    return b.build([b.mul(b.product(rs), av)])


def _fold(A_C: ArithCircuit, s: BitString):
    f = A_C.field
    return eval_arith(A_C, [f.element(bit) for bit in s.bits])[0]


def build_H(
    decider: BoolCircuit,
    n: int,
    profile: EncodingProfile,
    field: FieldSpec,
    S0: BoolCircuit | None = None,
    S1: BoolCircuit | None = None,
) -> ArithCircuit:
    """Recursion checker over inputs (f_1..f_m, y0, y1, y2)."""
    m = profile.total_length
    if decider.n_inputs != m or decider.n_outputs != 1:
        raise CircuitError(f"decider must map {m} bits to 1 bit, got {decider.n_inputs} -> {decider.n_outputs}")
    S0 = S0 if S0 is not None else build_S(n, profile, 0)
    S1 = S1 if S1 is not None else build_S(n, profile, 1)
    A_C, _ = arithmetize_circuit(decider, field)
    A_S0, _ = arithmetize_circuit(S0, field)
    A_S1, _ = arithmetize_circuit(S1, field)

    b = ArithBuilder(field, m + 3)
    f = list(range(m))
    y0, y1, y2 = m, m + 1, m + 2
    at_one = b.const(_fold(A_C, one_n(profile)))
    at_zero = b.const(_fold(A_C, zero_n(profile)))
    term0 = b.mul(y0, b.sub(at_one, b.const(1)))
    term1 = b.mul(y1, at_zero)

    (a_f,) = b.inline(A_C, f)
    (a_0,) = b.inline(A_C, b.inline(A_S0, f))
    (a_1,) = b.inline(A_C, b.inline(A_S1, f))
    either = b.one_minus(b.mul(b.one_minus(a_0), b.one_minus(a_1)))
    term2 = b.mul(y2, b.sub(a_f, either))
    return b.build([b.add(b.add(term0, term1), term2)])


@dataclass(frozen=True, eq=False)
class ReductionBundle:
    n: int
    profile: EncodingProfile
    field: FieldSpec
    decider: BoolCircuit
    V: BoolCircuit
    S0: BoolCircuit
    S1: BoolCircuit
    G: ArithCircuit
    H: ArithCircuit
    A_star: ArithCircuit
    one: BitString
    zero: BitString

    @property
    def m(self) -> int:
        return self.profile.total_length

    def circuits(self) -> dict:
        return {"V": self.V, "S0": self.S0, "S1": self.S1, "G": self.G, "H": self.H, "A_star": self.A_star}

    def manifest(self) -> dict:
        out = {
            "n": self.n,
            "profile": self.profile.name,
            "m": self.m,
            "field": self.field.literal,
            "modulus": list(self.field.modulus),
            "circuits": {},
        }
        for name, c in self.circuits().items():
            mt = metrics(c)
            out["circuits"][name] = {"inputs": c.n_inputs, "outputs": c.n_outputs, "size": mt.size, "depth": mt.depth}
        dm = metrics(self.decider)
        out["decider"] = {"size": dm.size, "depth": dm.depth}
        return out

    def export(self, directory) -> Path:
        """Write one canonical netlist per circuit plus ``manifest.json``."""
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        for name, c in self.circuits().items():
            (d / f"{name}.net").write_text(to_netlist(c))
        (d / "manifest.json").write_text(json.dumps(self.manifest(), indent=2, sort_keys=True) + "\n")
        return d

    def point(self, f: BitString, y: tuple[int, int, int]) -> np.ndarray:
        """Element-index row for A_star at (f, y)."""
        return np.asarray(list(f.bits) + [self.field.element(v).index for v in y], dtype=np.int64)


def build_A_star(decider: BoolCircuit, n: int, profile: EncodingProfile, field: FieldSpec) -> ReductionBundle:
    m = profile.total_length
    if decider.n_inputs != m:
        raise CircuitError(f"decider has {decider.n_inputs} inputs, encodings have {m} bits")
    V = build_V(n, profile)
    S0 = build_S(n, profile, 0)
    S1 = build_S(n, profile, 1)
    G = build_G(n, profile, field, V)
    H = build_H(decider, n, profile, field, S0, S1)
    b = ArithBuilder(field, m + 3)
    (g,) = b.inline(G, list(range(m)))
    (h,) = b.inline(H, b.inputs())
    A_star = b.build([b.mul(h, g)])
    return ReductionBundle(n, profile, field, decider, V, S0, S1, G, H, A_star, one_n(profile), zero_n(profile))
