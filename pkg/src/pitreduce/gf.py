"""Exact arithmetic in finite fields GF(p^k).

Elements are stored as coefficient vectors of a polynomial modulo a fixed
monic irreducible of degree k over GF(p).  Every element also has an integer
*index* ``sum(c_i * p**i)`` which is what the vectorised helpers at the bottom
of the module operate on (numpy arrays of indices).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

# Field-size ceiling for precomputed q x q lookup tables.
TABLE_LIMIT = 4096


class FieldError(ValueError):
    """Raised for malformed field descriptions or illegal element operations."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


# -- polynomials over GF(p), coefficient lists low -> high ------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int):
    """All monic polynomials of the given degree, ordered by index of the lower part."""
    for low in itertools.product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(modulus: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg/2."""
    k = len(modulus) - 1
    if k < 1 or modulus[-1] % p != 1:
        return False
    for d in range(1, k // 2 + 1):
        for divisor in _monic_polys(p, d):
            if not _poly_mod(list(modulus), divisor, p):
                return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k over GF(p).

    Candidates are scanned in increasing order of ``sum(c_i p^i)`` over the
    non-leading coefficients, so for k = 1 the answer is ``x``.
    """
    for idx in range(p**k):
        low = [(idx // p**i) % p for i in range(k)]
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """Description of GF(p^k); ``modulus`` lists coefficients low -> high."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"

    @property
    def literal(self) -> str:
        """The ``p^k`` form used in netlists and on the command line."""
        return f"{self.p}^{self.k}"

    @property
    def has_default_modulus(self) -> bool:
        return self.modulus == default_modulus(self.p, self.k)

    # element constructors

    def element(self, value) -> FieldElement:
        """Build an element from an int (taken mod p), a coefficient sequence or an element."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, (int, np.integer)):
            coeffs = [int(value) % self.p] + [0] * (self.k - 1)
        else:
            coeffs = [int(c) for c in value]
            if len(coeffs) > self.k:
                coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
            coeffs = [c % self.p for c in coeffs] + [0] * (self.k - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def from_index(self, index: int) -> FieldElement:
        if not 0 <= index < self.q:
            raise FieldError(f"index {index} outside GF({self.q})")
        return FieldElement(self, tuple((index // self.p**i) % self.p for i in range(self.k)))

    @property
    def zero(self) -> FieldElement:
        return self.from_index(0)

    @property
    def one(self) -> FieldElement:
        return self.from_index(1)

    def generator_x(self) -> FieldElement:
        """The class of ``x`` (equals the constant ``-modulus[0]`` when k = 1)."""
        return self.element([0, 1])

    def elements(self) -> list[FieldElement]:
        return [self.from_index(i) for i in range(self.q)]

    def parse_element(self, text: str) -> FieldElement:
        parts = [t for t in text.replace(" ", "").split(",") if t != ""]
        if not parts or len(parts) > self.k:
            raise FieldError(f"bad element literal {text!r} for {self}")
        try:
            coeffs = [int(t) for t in parts]
        except ValueError:
            raise FieldError(f"bad element literal {text!r} for {self}") from None
        if any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"coefficient out of range in {text!r} for {self}")
        return self.element(coeffs)

    # vectorised index arithmetic

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        els = self.elements()
        q = self.q
        add = np.empty((q, q), dtype=np.int64)
        sub = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in els:
            for b in els:
                add[a.index, b.index] = (a + b).index
                sub[a.index, b.index] = (a - b).index
                mul[a.index, b.index] = (a * b).index
        return add, sub, mul

    def vec_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a + b) % self.p
        if self.q <= TABLE_LIMIT:
            return self._tables[0][a, b]
        return self._fallback(a, b, lambda x, y: x + y)

    def vec_sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a - b) % self.p
        if self.q <= TABLE_LIMIT:
            return self._tables[1][a, b]
        return self._fallback(a, b, lambda x, y: x - y)

    def vec_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a * b) % self.p
        if self.q <= TABLE_LIMIT:
            return self._tables[2][a, b]
        return self._fallback(a, b, lambda x, y: x * y)

    def _fallback(self, a, b, op) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.empty(a.shape, dtype=np.int64)
        for pos in np.ndindex(a.shape):
            out[pos] = op(self.from_index(int(a[pos])), self.from_index(int(b[pos]))).index
        return out


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        p = self.field.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        if self.field.k == 1:
            return str(self.coeffs[0])
        return "[" + ",".join(map(str, self.coeffs)) + "]"

    @property
    def literal(self) -> str:
        """Comma-separated coefficient residues, trailing zeros dropped."""
        coeffs = list(self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        return ",".join(map(str, coeffs))

    def _check(self, other) -> FieldElement:
        if isinstance(other, int):
            return self.field.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldError(f"mixed fields: {self.field} and {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        f = self.field
        prod = [0] * (2 * f.k - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return f.element(_poly_mod(prod, list(f.modulus), f.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def order(self) -> int:
        """Least r >= 1 with a^r = 1."""
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.field.q - 1
        r = n
        for prime in _prime_factors(n):
            while r % prime == 0 and (self ** (r // prime)) == self.field.one:
                r //= prime
        return r


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def make_field(p: int, k: int = 1, modulus=None) -> FieldSpec:
    """Build GF(p^k); without a modulus the smallest irreducible is chosen."""
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise FieldError(f"characteristic {p} is not prime")
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    p, k = int(p), int(k)
    if modulus is None:
        mod = default_modulus(p, k)
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != k + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {k}")
        if not is_irreducible(list(mod), p):
            raise FieldError(f"modulus {mod} is reducible over GF({p})")
    return FieldSpec(p, k, mod)


_FIELD_RE = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_field(text: str, modulus=None) -> FieldSpec:
    """Parse a ``p^k`` literal (``"2^2"``, ``"3"``)."""
    m = _FIELD_RE.match(text)
    if not m:
        raise FieldError(f"bad field literal {text!r}, expected p^k")
    return make_field(int(m.group(1)), int(m.group(2) or 1), modulus)


def order(a: FieldElement) -> int:
    return a.order()


def inverse(a: FieldElement) -> FieldElement:
    return a.inverse()


def elements(spec: FieldSpec) -> list[FieldElement]:
    return spec.elements()


def ring_op(a: FieldElement, b: FieldElement | None, which: str) -> FieldElement:
    """Dispatch ``add``/``sub``/``mul``/``neg`` by name (``b`` is ignored for neg)."""
    if which == "neg":
        return -a
    if b is None or a.field != b.field:
        raise FieldError("ring operation needs two elements of the same field")
    if which == "add":
        return a + b
    if which == "sub":
        return a - b
    if which == "mul":
        return a * b
    raise FieldError(f"unknown ring operation {which!r}")


def power(a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise FieldError("negative exponent")
    return a**e
