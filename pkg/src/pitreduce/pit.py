"""Identity testing for arithmetic circuits over GF(q).

"Zero" means zero as a function on GF(q)^inputs.  Three deciders:

* :func:`exhaustive_test` walks every point (complete, lexicographic).
* :func:`sample_test` draws points, uniformly or from (valid encoding,
  unit y) pairs of a reduction bundle; it never claims zero except in the
  structured F(2) full-coverage case.
* :func:`symbolic_canonical` expands the circuit into a sparse polynomial
  reduced modulo x_i^q = x_i, whose zeroness is functional zeroness.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .circuit import ArithCircuit, eval_arith, eval_arith_batch
from .gf import FieldElement, FieldSpec

if TYPE_CHECKING:
    from .reduction import ReductionBundle

EXHAUSTIVE_BUDGET = 2**24
TERM_BUDGET = 10**6
CHUNK = 1 << 14


class PitError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """Internal disagreement (e.g. a witness that does not re-verify); always a bug."""


@dataclass(frozen=True)
class IdenticallyZero:
    method: str  # exhaustive | symbolic | structured
    note: str = ""

    def to_dict(self) -> dict:
        return {"outcome": "IdenticallyZero", "method": self.method, "note": self.note}


@dataclass(frozen=True)
class NonzeroWitness:
    assignment: tuple[FieldElement, ...]
    value: FieldElement

    def to_dict(self) -> dict:
        return {
            "outcome": "NonzeroWitness",
            "assignment": [list(a.coeffs) for a in self.assignment],
            "value": list(self.value.coeffs),
        }


@dataclass(frozen=True)
class Inconclusive:
    trials: int
    strategy: str

    def to_dict(self) -> dict:
        return {"outcome": "Inconclusive", "trials": self.trials, "strategy": self.strategy}


PitVerdict = IdenticallyZero | NonzeroWitness | Inconclusive


def verify_witness(c: ArithCircuit, w: Sequence[FieldElement]) -> FieldElement:
    """Re-evaluate ``c`` at ``w`` element by element (no lookup tables)."""
    if len(w) != c.n_inputs:
        raise PitError(f"witness has {len(w)} entries, circuit has {c.n_inputs} inputs")
    return eval_arith(c, list(w), order=range(len(c.gates)))[0]


def _witness(c: ArithCircuit, row: np.ndarray, value_index: int) -> NonzeroWitness:
    f = c.field
    w = NonzeroWitness(tuple(f.from_index(int(v)) for v in row), f.from_index(int(value_index)))
    check_witness(c, w)
    return w


def check_witness(c: ArithCircuit, w: NonzeroWitness) -> None:
    value = verify_witness(c, w.assignment)
    if value != w.value or value.is_zero():
        raise InconsistencyError(f"witness claims {w.value!r} but evaluates to {value!r}")


def _single_output(c: ArithCircuit) -> None:
    if c.n_outputs != 1:
        raise PitError("identity testing needs a single-output circuit")


def _grid(q: int, n: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic grid GF(q)^n (x0 most significant)."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), n), dtype=np.int64)
    for col in range(n - 1, -1, -1):
        out[:, col] = idx % q
        idx //= q
    return out


def exhaustive_test(c: ArithCircuit, budget: int = EXHAUSTIVE_BUDGET) -> PitVerdict:
    _single_output(c)
    q, n = c.field.q, c.n_inputs
    total = q**n
    if total > budget:
        raise PitError(f"{q}^{n} = {total} evaluations exceed the budget {budget}")
    for start in range(0, total, CHUNK):
        pts = _grid(q, n, start, min(total, start + CHUNK))
        vals = eval_arith_batch(c, pts)[:, 0]
        hit = np.flatnonzero(vals)
        if hit.size:
            i = hit[0]
            return _witness(c, pts[i], vals[i])
    return IdenticallyZero("exhaustive")


def uniform_point(seed: int, trial: int, q: int, n: int) -> np.ndarray:
    """The point used by trial ``trial`` of a seeded uniform run."""
    return np.random.default_rng([seed, trial]).integers(0, q, size=n, dtype=np.int64)


def sample_test(
    c: ArithCircuit,
    strategy: str = "uniform",
    trials: int = 1000,
    seed: int = 0,
    bundle: ReductionBundle | None = None,
) -> PitVerdict:
    """Randomized (``uniform``) or structured (``valid_encodings``) search for a witness.

    The structured strategy tries every (encode(f), unit y) pair when there
    are at most ``trials`` of them; otherwise it samples ``trials`` pairs.
    Only full coverage over GF(2) yields ``IdenticallyZero("structured")``.
    """
    _single_output(c)
    if trials < 1:
        raise PitError("sample_test needs at least one trial")
    q, n = c.field.q, c.n_inputs
    if strategy == "uniform":
        for start in range(0, trials, CHUNK):
            stop = min(trials, start + CHUNK)
            pts = np.stack([uniform_point(seed, t, q, n) for t in range(start, stop)]) if n else np.zeros((stop - start, 0), dtype=np.int64)
            vals = eval_arith_batch(c, pts)[:, 0]
            hit = np.flatnonzero(vals)
            if hit.size:
                return _witness(c, pts[hit[0]], vals[hit[0]])
        return Inconclusive(trials, "uniform")
    if strategy == "valid_encodings":
        if bundle is None:
            raise PitError("valid_encodings strategy needs a reduction bundle")
        if bundle.m + 3 != n or bundle.field != c.field:
            raise PitError("circuit does not match the bundle's A_star arity/field")
        return _structured(c, bundle, trials, seed)
    raise PitError(f"unknown sampling strategy {strategy!r}")


def _structured(c: ArithCircuit, bundle: ReductionBundle, trials: int, seed: int) -> PitVerdict:
    from .sat3 import ENUMERATION_CAP, encode, enumerate_instances

    units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    insts = []
    if bundle.n <= ENUMERATION_CAP:
        insts = list(islice(enumerate_instances(bundle.n), trials // 3 + 1))
    full = bool(insts) and len(insts) * 3 <= trials and _enumeration_complete(bundle.n, len(insts))
    if full:
        pairs = [(f, y) for f in insts for y in units]
    else:
        from .sat3 import all_clauses, ThreeSatInstance

        rng = np.random.default_rng(seed)
        pool = all_clauses(bundle.n)
        pairs = []
        for _ in range(trials):
            r = rng.integers(0, len(pool) + 2)
            if r == 0:
                f = ThreeSatInstance.true(bundle.n)
            elif r == 1:
                f = ThreeSatInstance.false(bundle.n)
            else:
                mask = rng.integers(0, 2, size=len(pool))
                if not mask.any():
                    mask[rng.integers(0, len(pool))] = 1
                f = ThreeSatInstance(bundle.n, "FORMULA", tuple(cl for cl, bit in zip(pool, mask) if bit))
            pairs.append((f, units[int(rng.integers(0, 3))]))
    pts = np.stack([bundle.point(encode(bundle.n, f, bundle.profile), y) for f, y in pairs])
    for start in range(0, len(pts), CHUNK):
        chunk = pts[start:start + CHUNK]
        vals = eval_arith_batch(c, chunk)[:, 0]
        hit = np.flatnonzero(vals)
        if hit.size:
            return _witness(c, chunk[hit[0]], vals[hit[0]])
    if full and c.field.q == 2:
        note = (
            f"all {len(insts)} valid encodings x 3 unit y-vectors evaluate to 0; "
            "A_star is linear in y and every other binary point is a non-encoding"
        )
        return IdenticallyZero("structured", note)
    return Inconclusive(len(pairs), "valid_encodings")


def _enumeration_complete(n: int, count: int) -> bool:
    from .sat3 import all_clauses

    return count == 2 + 2 ** len(all_clauses(n)) - 1


# ---------------------------------------------------------------------------
# symbolic canonical form


class _Arith:
    """Plain-int element arithmetic on indices for the polynomial code."""

    def __init__(self, field: FieldSpec):
        self.field = field
        q = field.q
        if field.k == 1:
            p = field.p
            self.add = lambda a, b: (a + b) % p
            self.sub = lambda a, b: (a - b) % p
            self.mul = lambda a, b: (a * b) % p
        else:
            els = field.elements()
            at = [[(x + y).index for y in els] for x in els]
            st = [[(x - y).index for y in els] for x in els]
            mt = [[(x * y).index for y in els] for x in els]
            self.add = lambda a, b: at[a][b]
            self.sub = lambda a, b: st[a][b]
            self.mul = lambda a, b: mt[a][b]
        self.q = q


def reduce_exponent(e: int, q: int) -> int:
    """Canonical exponent under x^q = x."""
    return e if e < q else (e - 1) % (q - 1) + 1


@dataclass(frozen=True, eq=False)
class SparsePoly:
    """Sparse multivariate polynomial; ``terms`` maps exponent tuples to nonzero element indices."""

    field: FieldSpec
    nvars: int
    terms: dict

    def __post_init__(self):
        for exps, coeff in self.terms.items():
            if len(exps) != self.nvars:
                raise PitError("exponent vector arity mismatch")
            if not coeff:
                raise PitError("zero coefficient stored")

    @classmethod
    def constant(cls, field: FieldSpec, nvars: int, value: int) -> SparsePoly:
        return cls(field, nvars, {(0,) * nvars: value} if value else {})

    @classmethod
    def variable(cls, field: FieldSpec, nvars: int, i: int) -> SparsePoly:
        exps = [0] * nvars
        exps[i] = 1
        return cls(field, nvars, {tuple(exps): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, SparsePoly) and self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def coefficient(self, exps: tuple[int, ...]) -> FieldElement:
        return self.field.from_index(self.terms.get(tuple(exps), 0))

    def is_canonical(self) -> bool:
        q = self.field.q
        return all(e < q for exps in self.terms for e in exps)

    def canonical(self) -> SparsePoly:
        """Reduce every exponent modulo x^q = x and merge colliding terms."""
        ar = _Arith(self.field)
        q = self.field.q
        out: dict = {}
        for exps, c in self.terms.items():
            key = tuple(reduce_exponent(e, q) for e in exps)
            v = ar.add(out.get(key, 0), c)
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return SparsePoly(self.field, self.nvars, out)

    def evaluate(self, point: Sequence[FieldElement]) -> FieldElement:
        f = self.field
        total = f.zero
        for exps, c in self.terms.items():
            term = f.from_index(c)
            for x, e in zip(point, exps):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
            coeff = repr(self.field.from_index(self.terms[exps]))
            parts.append(coeff if not mono else (mono if coeff == "1" else f"{coeff}*{mono}"))
        return " + ".join(parts)


def _combine(ar: _Arith, a: dict, b: dict, op) -> dict:
    out = dict(a)
    for k, v in b.items():
        r = op(out.get(k, 0), v)
        if r:
            out[k] = r
        else:
            out.pop(k, None)
    return out


def _multiply(ar: _Arith, a: dict, b: dict, q: int | None, budget: int) -> dict:
    if q is None and len(a) * len(b) > 64 * budget:
        raise PitError("symbolic expansion exceeds the term budget")
    out: dict = {}
    add, mul = ar.add, ar.mul
    for ea, ca in a.items():
        for eb, cb in b.items():
            if q is None:
                key = tuple(x + y for x, y in zip(ea, eb))
            else:
                key = tuple(reduce_exponent(x + y, q) for x, y in zip(ea, eb))
            v = add(out.get(key, 0), mul(ca, cb))
            if v:
                out[key] = v
            else:
                del out[key]
    return out


def symbolic_canonical(c: ArithCircuit, reduce: bool = True, budget: int = TERM_BUDGET) -> SparsePoly:
    """Expand ``c`` bottom-up.  With ``reduce`` (default) exponents are folded by
    x^q = x at every step, giving the functional canonical form; without it the
    result is the formal polynomial."""
    _single_output(c)
    f = c.field
    ar = _Arith(f)
    n = c.n_inputs
    q = f.q if reduce else None
    polys: list = [SparsePoly.variable(f, n, i).terms for i in range(n)]
    for g in c.gates:
        if g.kind == "CONST":
            v = g.const.index
            p = {(0,) * n: v} if v else {}
        else:
            a, b = polys[g.args[0]], polys[g.args[1]]
            if g.kind == "ADD":
                p = _combine(ar, a, b, ar.add)
            elif g.kind == "SUB":
                p = _combine(ar, a, b, ar.sub)
            else:
                p = _multiply(ar, a, b, q, budget)
        if len(p) > budget:
            raise PitError(f"symbolic expansion exceeds {budget} terms")
        polys.append(p)
    return SparsePoly(f, n, dict(polys[c.outputs[0]]))


def symbolic_test(c: ArithCircuit, budget: int = TERM_BUDGET) -> PitVerdict:
    """Complete decision from the canonical form; witnesses come from the grid."""
    poly = symbolic_canonical(c, budget=budget)
    if poly.is_zero():
        return IdenticallyZero("symbolic")
    if c.field.q ** c.n_inputs <= EXHAUSTIVE_BUDGET:
        v = exhaustive_test(c)
    else:
        v = sample_test(c, "uniform", trials=10**5, seed=0)
    if isinstance(v, IdenticallyZero):
        raise InconsistencyError("nonzero canonical form but the circuit vanishes everywhere")
    return v
