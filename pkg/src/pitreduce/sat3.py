"""Normalized 3SAT instances and their fixed-length binary encodings.

A literal is ``(index, sign)`` with ``sign = 1`` for ``x_i`` and ``0`` for
its negation.  Clauses are stored with literals sorted by index and formulas
with clauses sorted by :func:`clause_key`, so two instances are equal exactly
when they denote the same normalized formula.

Bit layout of an encoding (``paper`` profile)::

    tag(2) | clause slot 0 | ... | clause slot N_c-1 | 1 0 0 ... 0
    tag: 00 formula, 01 TRUE, 10 FALSE, 11 forbidden
    clause slot = 3 literal slots of (active, sign, index[w]), index big-endian

The ``mini`` profile (n = 1, 6 bits) drops the index field (always x1), uses
one literal slot per clause, two clause slots and no padding.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

Literal = tuple[int, int]
Clause = tuple[Literal, ...]

TAG_FORMULA = (0, 0)
TAG_TRUE = (0, 1)
TAG_FALSE = (1, 0)

ENUMERATION_CAP = 2
SAT_VARIABLE_CAP = 20


class EncodingError(ValueError):
    pass


class DecodeError(ValueError):
    def __init__(self, field: str, msg: str):
        super().__init__(f"{field}: {msg}")
        self.field = field


def clause_key(clause: Clause, width: int = 3) -> tuple[int, ...]:
    """Sort key matching the big-endian order of the clause's bit slot."""
    key: list[int] = []
    for idx, sign in clause:
        key += [1, sign, idx]
    key += [0, 0, 0] * (width - len(clause))
    return tuple(key)


def _canon_clause(lits: Iterable[Literal]) -> Clause:
    return tuple(sorted((int(i), int(s)) for i, s in lits))


@dataclass(frozen=True)
class ThreeSatInstance:
    n: int
    body: str  # "FORMULA" | "TRUE" | "FALSE"
    clauses: tuple[Clause, ...] = ()

    @classmethod
    def formula(cls, n: int, clauses: Iterable[Iterable[Literal]]) -> ThreeSatInstance:
        """Build a formula, canonicalizing literal and clause order (duplicates kept)."""
        cs = [_canon_clause(c) for c in clauses]
        return cls(n, "FORMULA", tuple(sorted(cs, key=clause_key)))

    @classmethod
    def true(cls, n: int) -> ThreeSatInstance:
        return cls(n, "TRUE")

    @classmethod
    def false(cls, n: int) -> ThreeSatInstance:
        return cls(n, "FALSE")

    @classmethod
    def from_ints(cls, n: int, clauses: Iterable[Iterable[int]]) -> ThreeSatInstance:
        """DIMACS-style signed integers: ``[[1, -2], [3]]``."""
        return cls.formula(n, [[(abs(v), int(v > 0)) for v in c] for c in clauses])

    def variables(self) -> list[int]:
        return sorted({i for c in self.clauses for i, _ in c})

    def __str__(self) -> str:
        if self.body != "FORMULA":
            return self.body
        def lit(l):
            return f"x{l[0]}" if l[1] else f"~x{l[0]}"
        return " & ".join("(" + " | ".join(lit(l) for l in c) + ")" for c in self.clauses)


def validate_instance(f: ThreeSatInstance) -> list[str]:
    """Names of violated normalization conditions; empty means valid."""
    problems: list[str] = []
    if f.body in ("TRUE", "FALSE"):
        if f.clauses:
            problems.append("constant_with_clauses")
        return problems
    if f.body != "FORMULA":
        return ["unknown_body"]
    if not f.clauses:
        problems.append("empty_formula")
    seen: set[frozenset] = set()
    for c in f.clauses:
        if not 1 <= len(c) <= 3:
            problems.append("clause_width")
        if len({i for i, _ in c}) != len(c):
            problems.append("duplicate_variable")
        if any(not 1 <= i <= f.n for i, _ in c) or any(s not in (0, 1) for _, s in c):
            problems.append("index_range")
        key = frozenset(c)
        if key in seen:
            problems.append("duplicate_clause")
        seen.add(key)
    return list(dict.fromkeys(problems))


def is_valid_instance(f: ThreeSatInstance) -> bool:
    return not validate_instance(f)


# ---------------------------------------------------------------------------
# encoding profiles


def all_clauses(n: int) -> list[Clause]:
    """Every normalized clause over x1..xn, in canonical order."""
    out = []
    for width in (1, 2, 3):
        for idxs in itertools.combinations(range(1, n + 1), width):
            for signs in itertools.product((0, 1), repeat=width):
                out.append(tuple(zip(idxs, signs)))
    return sorted(out, key=clause_key)


@dataclass(frozen=True)
class EncodingProfile:
    name: str
    n: int
    total_length: int
    clause_slots: int
    literal_slots: int
    index_width: int
    padded: bool

    @property
    def literal_width(self) -> int:
        return 2 + self.index_width

    @property
    def clause_width(self) -> int:
        return self.literal_slots * self.literal_width

    def clause_offset(self, c: int) -> int:
        return 2 + c * self.clause_width

    def literal_offset(self, c: int, l: int) -> int:
        return self.clause_offset(c) + l * self.literal_width

    @property
    def padding_offset(self) -> int:
        return 2 + self.clause_slots * self.clause_width

    @property
    def m(self) -> int:
        return self.total_length


def paper_profile(n: int) -> EncodingProfile:
    """Length 8*max(n,2)^4, as many clause slots as fit before a 1-then-0s pad."""
    if n < 1:
        raise EncodingError("paper profile needs n >= 1")
    total = 8 * max(n, 2) ** 4
    w = math.ceil(math.log2(n + 1))
    slots = (total - 3) // (3 * (2 + w))
    needed = len(all_clauses(n))
    if slots < needed:
        raise EncodingError(f"paper profile at n={n} holds {slots} clauses, needs {needed}")
    return EncodingProfile("paper", n, total, slots, 3, w, True)


def mini_profile() -> EncodingProfile:
    return EncodingProfile("mini", 1, 6, 2, 1, 0, False)


def make_profile(name: str, n: int) -> EncodingProfile:
    if name == "paper":
        return paper_profile(n)
    if name == "mini":
        if n != 1:
            raise EncodingError("mini profile is defined for n = 1 only")
        return mini_profile()
    raise EncodingError(f"unknown profile {name!r}")


@dataclass(frozen=True)
class BitString:
    bits: tuple[int, ...]
    profile: EncodingProfile

    def __post_init__(self):
        if len(self.bits) != self.profile.total_length:
            raise EncodingError(f"bit string has length {len(self.bits)}, profile needs {self.profile.total_length}")
        if any(b not in (0, 1) for b in self.bits):
            raise EncodingError("bit string entries must be 0 or 1")

    @classmethod
    def parse(cls, text: str, profile: EncodingProfile) -> BitString:
        text = text.strip()
        if set(text) - {"0", "1"}:
            raise EncodingError("encoding text must contain only 0 and 1")
        return cls(tuple(int(ch) for ch in text), profile)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __len__(self) -> int:
        return len(self.bits)


def _int_bits(value: int, width: int) -> list[int]:
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


def encode(n: int, f: ThreeSatInstance, profile: EncodingProfile | None = None) -> BitString:
    profile = profile or paper_profile(n)
    if profile.n != n:
        raise EncodingError(f"profile is for n={profile.n}, encode called with n={n}")
    problems = validate_instance(f)
    if problems:
        raise EncodingError(f"invalid instance: {', '.join(problems)}")
    if any(i > n for i in f.variables()):
        raise EncodingError(f"instance uses variables beyond x{n}")
    if f.body == "TRUE":
        bits = list(TAG_TRUE)
    elif f.body == "FALSE":
        bits = list(TAG_FALSE)
    else:
        bits = list(TAG_FORMULA)
    if len(f.clauses) > profile.clause_slots:
        raise EncodingError(f"{len(f.clauses)} clauses exceed {profile.clause_slots} slots")
    for c in range(profile.clause_slots):
        clause = f.clauses[c] if c < len(f.clauses) else ()
        if len(clause) > profile.literal_slots:
            raise EncodingError(f"clause {clause} wider than {profile.literal_slots} literal slots")
        for l in range(profile.literal_slots):
            if l < len(clause):
                idx, sign = clause[l]
                bits += [1, sign] + _int_bits(idx, profile.index_width)
            else:
                bits += [0] * profile.literal_width
    if profile.padded:
        bits += [1] + [0] * (profile.total_length - len(bits) - 1)
    return BitString(tuple(bits), profile)


def decode(s: BitString) -> ThreeSatInstance:
    """Inverse of :func:`encode`; rejects anything ``encode`` cannot produce."""
    pr = s.profile
    b = s.bits
    tag = (b[0], b[1])
    if tag == (1, 1):
        raise DecodeError("tag", "tag 11 is forbidden")
    if pr.padded:
        off = pr.padding_offset
        if b[off] != 1 or any(b[off + 1:]):
            raise DecodeError("padding", "padding must be a single 1 followed by 0s")
    clauses: list[Clause] = []
    ended = False
    for c in range(pr.clause_slots):
        name = f"clause[{c}]"
        lits: list[Literal] = []
        lit_ended = False
        for l in range(pr.literal_slots):
            o = pr.literal_offset(c, l)
            active, sign = b[o], b[o + 1]
            idx_bits = b[o + 2:o + 2 + pr.index_width]
            lname = f"{name}.literal[{l}]"
            if not active:
                if sign or any(idx_bits):
                    raise DecodeError(lname, "inactive literal slot must be all zero")
                lit_ended = True
                continue
            if lit_ended:
                raise DecodeError(lname, "active literal after an inactive slot")
            idx = int("".join(map(str, idx_bits)), 2) if pr.index_width else 1
            if not 1 <= idx <= pr.n:
                raise DecodeError(lname + ".index", f"index {idx} outside 1..{pr.n}")
            if lits and idx <= lits[-1][0]:
                raise DecodeError(lname + ".index", "literal indices must be strictly increasing")
            lits.append((idx, sign))
        if not lits:
            ended = True
            continue
        if ended:
            raise DecodeError(name, "active clause after an inactive slot")
        if tag != TAG_FORMULA:
            raise DecodeError(name, "constant instance with an active clause")
        clause = tuple(lits)
        if clauses and clause_key(clause) <= clause_key(clauses[-1]):
            raise DecodeError(name, "clauses must be strictly increasing")
        clauses.append(clause)
    if tag == TAG_TRUE:
        return ThreeSatInstance.true(pr.n)
    if tag == TAG_FALSE:
        return ThreeSatInstance.false(pr.n)
    if not clauses:
        raise DecodeError("clause[0]", "formula tag with no active clause")
    return ThreeSatInstance(pr.n, "FORMULA", tuple(clauses))


def is_valid_encoding(s: BitString) -> bool:
    try:
        f = decode(s)
    except DecodeError:
        return False
    return encode(s.profile.n, f, s.profile) == s


def one_n(profile: EncodingProfile) -> BitString:
    return encode(profile.n, ThreeSatInstance.true(profile.n), profile)


def zero_n(profile: EncodingProfile) -> BitString:
    return encode(profile.n, ThreeSatInstance.false(profile.n), profile)


# ---------------------------------------------------------------------------
# semantics


def substitute(f: ThreeSatInstance, value: int) -> ThreeSatInstance:
    """Fix the lowest-indexed occurring variable to ``value`` and simplify."""
    if f.body != "FORMULA":
        return f
    v = min(i for c in f.clauses for i, _ in c)
    kept: set[Clause] = set()
    for c in f.clauses:
        hit = [s for i, s in c if i == v]
        if not hit:
            kept.add(c)
        elif hit[0] == value:
            continue
        else:
            rest = tuple(l for l in c if l[0] != v)
            if not rest:
                return ThreeSatInstance.false(f.n)
            kept.add(rest)
    if not kept:
        return ThreeSatInstance.true(f.n)
    return ThreeSatInstance(f.n, "FORMULA", tuple(sorted(kept, key=clause_key)))


def brute_force_sat(f: ThreeSatInstance, cap: int = SAT_VARIABLE_CAP) -> bool:
    """Exhaustive satisfiability over the occurring variables (True = SAT).

    Assignments are enumerated bit-parallel: assignment ``a`` is bit ``a`` of
    a 2^k-bit integer, so each clause becomes one mask.
    """
    if f.body == "TRUE":
        return True
    if f.body == "FALSE":
        return False
    var = f.variables()
    k = len(var)
    if k > cap:
        raise ValueError(f"{k} variables exceed the enumeration cap {cap}")
    full = (1 << (1 << k)) - 1
    pos = {v: t for t, v in enumerate(var)}
    # ones[t]: assignments in which variable t is 1
    ones = []
    for t in range(k):
        half = 1 << t
        block = ((1 << half) - 1) << half
        ones.append(block * (full // ((1 << (2 * half)) - 1)))
    sat = full
    for c in f.clauses:
        cm = 0
        for i, s in c:
            m = ones[pos[i]]
            cm |= m if s else full ^ m
        sat &= cm
        if not sat:
            return False
    return True


def evaluate(f: ThreeSatInstance, assignment: dict[int, int]) -> bool:
    if f.body != "FORMULA":
        return f.body == "TRUE"
    return all(any(assignment[i] == s for i, s in c) for c in f.clauses)


def enumerate_instances(n: int, cap: int = ENUMERATION_CAP) -> Iterator[ThreeSatInstance]:
    """TRUE, FALSE, then every nonempty set of distinct clauses over x1..xn."""
    if n > cap:
        raise ValueError(f"full enumeration at n={n} exceeds cap {cap}")
    yield ThreeSatInstance.true(n)
    yield ThreeSatInstance.false(n)
    pool = all_clauses(n)
    for r in range(1, len(pool) + 1):
        for subset in itertools.combinations(pool, r):
            yield ThreeSatInstance(n, "FORMULA", subset)


# ---------------------------------------------------------------------------
# text formats


def to_dimacs(f: ThreeSatInstance) -> str:
    if f.body != "FORMULA":
        return f"c CONST {f.body}\np cnf {f.n} 0\n"
    lines = [f"p cnf {f.n} {len(f.clauses)}"]
    for c in f.clauses:
        lines.append(" ".join(str(i if s else -i) for i, s in c) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> ThreeSatInstance:
    n = None
    const = None
    clauses: list[list[int]] = []
    cur: list[int] = []
    for no, raw in enumerate(text.splitlines(), 1):
        ln = raw.strip()
        if not ln:
            continue
        if ln.startswith("c"):
            parts = ln.split()
            if len(parts) == 3 and parts[1] == "CONST":
                if parts[2] not in ("TRUE", "FALSE"):
                    raise ValueError(f"line {no}: CONST must be TRUE or FALSE")
                const = parts[2]
            continue
        if ln.startswith("p"):
            parts = ln.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {no}: bad problem line {ln!r}")
            n = int(parts[2])
            continue
        if n is None:
            raise ValueError(f"line {no}: clause before the 'p cnf' header")
        for tok in ln.split():
            try:
                v = int(tok)
            except ValueError:
                raise ValueError(f"line {no}: bad literal {tok!r}") from None
            if v == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(v)
    if cur:
        clauses.append(cur)
    if n is None:
        raise ValueError("missing 'p cnf' header")
    if const is not None:
        if clauses:
            raise ValueError("CONST instance must not list clauses")
        return ThreeSatInstance(n, const)
    return ThreeSatInstance.from_ints(n, clauses)


def read_encodings(text: str, profile: EncodingProfile) -> list[BitString]:
    return [BitString.parse(ln, profile) for ln in text.splitlines() if ln.strip()]


def write_encodings(strings: Sequence[BitString]) -> str:
    return "".join(str(s) + "\n" for s in strings)


# ---------------------------------------------------------------------------
# bit-parallel formulas: bit t of a mask selects all_clauses(n)[t]

KIND_FORMULA, KIND_TRUE, KIND_FALSE = 0, 1, 2


class ClauseSetSpace:
    """Vectorised sat/substitute over formulas given as clause-set bitmasks.

    Every nonempty mask below ``2**len(clauses)`` is a normalized formula over
    x1..xn, which makes exhaustive sweeps at n = 3 (2^26 formulas) feasible.
    """

    def __init__(self, n: int):
        self.n = n
        self.clauses = all_clauses(n)
        if len(self.clauses) > 62:
            raise ValueError(f"{len(self.clauses)} clauses do not fit a 64-bit mask")
        self.index = {c: t for t, c in enumerate(self.clauses)}
        bit = [np.uint64(1) << np.uint64(t) for t in range(len(self.clauses))]
        self.occurs = []
        for v in range(1, n + 1):
            m = 0
            for t, c in enumerate(self.clauses):
                if any(i == v for i, _ in c):
                    m |= 1 << t
            self.occurs.append(np.uint64(m))
        self.falsified_by = []
        for alpha in itertools.product((0, 1), repeat=n):
            m = 0
            for t, c in enumerate(self.clauses):
                if not any(alpha[i - 1] == s for i, s in c):
                    m |= 1 << t
            self.falsified_by.append(np.uint64(m))
        self._bit = bit

    @property
    def size(self) -> int:
        return 1 << len(self.clauses)

    def to_mask(self, f: ThreeSatInstance) -> int:
        return sum(1 << self.index[c] for c in f.clauses)

    def to_instance(self, kind: int, mask: int) -> ThreeSatInstance:
        if kind == KIND_TRUE:
            return ThreeSatInstance.true(self.n)
        if kind == KIND_FALSE:
            return ThreeSatInstance.false(self.n)
        return ThreeSatInstance(self.n, "FORMULA", tuple(c for t, c in enumerate(self.clauses) if mask >> t & 1))

    def sat(self, masks: np.ndarray) -> np.ndarray:
        """Brute force over all 2^n assignments for every mask at once."""
        masks = np.asarray(masks, dtype=np.uint64)
        out = np.zeros(masks.shape, dtype=bool)
        for fal in self.falsified_by:
            out |= (masks & fal) == 0
        return out

    def sat_kind(self, kinds: np.ndarray, masks: np.ndarray) -> np.ndarray:
        return np.where(kinds == KIND_FORMULA, self.sat(masks), kinds == KIND_TRUE)

    def substitute(self, masks: np.ndarray, value: int) -> tuple[np.ndarray, np.ndarray]:
        """Vector form of :func:`substitute` for nonempty masks; returns (kinds, masks)."""
        masks = np.asarray(masks, dtype=np.uint64)
        kinds = np.full(masks.shape, KIND_FORMULA, dtype=np.int8)
        out = np.zeros_like(masks)
        done = np.zeros(masks.shape, dtype=bool)
        zero = np.uint64(0)
        for v in range(1, self.n + 1):
            rows = ~done & ((masks & self.occurs[v - 1]) != zero)
            done |= rows
            if not rows.any():
                continue
            sub = masks[rows]
            res = sub & ~self.occurs[v - 1]
            killed = np.zeros(sub.shape, dtype=bool)
            for t, c in enumerate(self.clauses):
                lit = next((s for i, s in c if i == v), None)
                if lit is None or lit == value:
                    continue
                present = (sub & self._bit[t]) != zero
                rest = tuple(l for l in c if l[0] != v)
                if not rest:
                    killed |= present
                else:
                    res |= np.where(present, self._bit[self.index[rest]], zero)
            k = np.where(killed, KIND_FALSE, np.where(res == zero, KIND_TRUE, KIND_FORMULA)).astype(np.int8)
            res = np.where(k == KIND_FORMULA, res, zero)
            kinds[rows] = k
            out[rows] = res
        return kinds, out
