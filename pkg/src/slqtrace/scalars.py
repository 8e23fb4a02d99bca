"""Exact arithmetic in Z[hq, hq^-1].

Everything in the library is built over the Laurent ring in one variable
``hq``. The deformation parameter is ``q = hq^(2 n^2)``, so a fractional
power ``q^(a/b)`` is representable exactly when ``2 n^2 a / b`` is an
integer. This module also holds the weight lattice of SL_n with its
rational pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .kernels import laurent_mul


class LaurentScalar:
    """Immutable Laurent polynomial in ``hq`` with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[int(e)] = int(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentScalar":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentScalar":
        return cls._raw({exponent: coeff} if coeff else {})

    @classmethod
    def from_int(cls, value: int) -> "LaurentScalar":
        return cls.monomial(0, value)

    @property
    def terms(self) -> dict:
        """A copy of the exponent -> coefficient map."""
        return dict(self._terms)

    def raw_terms(self) -> dict:
        # shared reference, callers must not mutate
        return self._terms

    def items(self):
        return sorted(self._terms.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_unit(self) -> bool:
        """True for ``+-hq^e``, the units of the ring."""
        if len(self._terms) != 1:
            return False
        (c,) = self._terms.values()
        return c in (1, -1)

    def inverse(self) -> "LaurentScalar":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        ((e, c),) = self._terms.items()
        return LaurentScalar._raw({-e: c})

    def shift(self, exponent: int) -> "LaurentScalar":
        """Multiply by ``hq^exponent``."""
        if not exponent:
            return self
        return LaurentScalar._raw({e + exponent: c for e, c in self._terms.items()})

    def reflect(self) -> "LaurentScalar":
        return LaurentScalar._raw({-e: c for e, c in self._terms.items()})

    def at_one(self) -> int:
        return sum(self._terms.values())

    def evaluate(self, value) -> Fraction:
        v = Fraction(value)
        return sum((c * v**e for e, c in self._terms.items()), Fraction(0))

    def min_degree(self) -> int:
        return min(self._terms)

    def max_degree(self) -> int:
        return max(self._terms)

    def _coerce(self, other) -> "LaurentScalar":
        if isinstance(other, LaurentScalar):
            return other
        if isinstance(other, int):
            return LaurentScalar.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentScalar._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentScalar._raw(laurent_mul(self._terms, other._terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentScalar.from_int(other)
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def to_json(self) -> list:
        return [[e, c] for e, c in self.items()]

    @classmethod
    def from_json(cls, data: Iterable) -> "LaurentScalar":
        out: dict = {}
        for e, c in data:
            out[int(e)] = out.get(int(e), 0) + int(c)
        return cls(out)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            elif mag == 1:
                body = f"hq^{e}"
            else:
                body = f"{mag} hq^{e}"
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self):
        return f"LaurentScalar({str(self)!r})"


ZERO = LaurentScalar()
ONE = LaurentScalar.from_int(1)


def hq(exponent: int = 1) -> LaurentScalar:
    return LaurentScalar.monomial(exponent)


def q_exponent(n: int, num: int, den: int = 1) -> int:
    """The hq-exponent of ``q^(num/den)``; raises if it is not integral."""
    if n < 1:
        raise ValueError("n must be positive")
    if den == 0:
        raise ValueError("zero denominator")
    top = 2 * n * n * num
    if top % den:
        raise ValueError(f"q^({num}/{den}) is not an integral power of hq for n={n}")
    return top // den


def q_power(n: int, num: int, den: int = 1) -> LaurentScalar:
    return LaurentScalar.monomial(q_exponent(n, num, den))


def quantum_int(n: int, m: int) -> LaurentScalar:
    """``[m] = q^(m-1) + q^(m-3) + ... + q^(1-m)``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    step = q_exponent(n, 1)
    return LaurentScalar({step * (m - 1 - 2 * t): 1 for t in range(m)})


def quantum_factorial(n: int, m: int) -> LaurentScalar:
    out = ONE
    for t in range(1, m + 1):
        out = out * quantum_int(n, t)
    return out


def minus_q_power(n: int, k: int) -> LaurentScalar:
    """``(-q)^k`` for an integer k."""
    return LaurentScalar.monomial(k * q_exponent(n, 1), -1 if k % 2 else 1)


@dataclass(frozen=True)
class Constants:
    t: LaurentScalar
    a: LaurentScalar
    c: tuple  # c[0] is c_1

    def c_(self, i: int) -> LaurentScalar:
        return self.c[i - 1]


def constants(n: int) -> Constants:
    sign = -1 if (n - 1) % 2 else 1
    t = LaurentScalar.monomial(q_exponent(n, n * n - 1, n), sign)
    a = q_power(n, (1 - n) * (2 * n + 1), 4)
    base = q_power(n, n - 1, 2 * n)
    c = tuple(base * minus_q_power(n, n - i) for i in range(1, n + 1))
    return Constants(t=t, a=a, c=c)


def reflect(s: LaurentScalar) -> LaurentScalar:
    return s.reflect()


class WeightVector:
    """Element of Z^n / Z(1,...,1), stored with last coordinate 0."""

    __slots__ = ("n", "coords")

    def __init__(self, n: int, coords: Iterable[int]):
        coords = [int(c) for c in coords]
        if len(coords) != n:
            raise ValueError(f"expected {n} coordinates, got {len(coords)}")
        last = coords[-1]
        self.n = n
        self.coords = tuple(c - last for c in coords)

    @classmethod
    def basis(cls, n: int, i: int) -> "WeightVector":
        """The weight ``w_i`` (1-based)."""
        if not 1 <= i <= n:
            raise ValueError(f"w_{i} undefined for n={n}")
        return cls(n, [1 if t == i - 1 else 0 for t in range(n)])

    @classmethod
    def fundamental(cls, n: int, i: int) -> "WeightVector":
        """``varpi_i = w_1 + ... + w_i``; ``varpi_0 = varpi_n = 0``."""
        if not 0 <= i <= n:
            raise ValueError(f"varpi_{i} undefined for n={n}")
        return cls(n, [1 if t < i else 0 for t in range(n)])

    @classmethod
    def zero(cls, n: int) -> "WeightVector":
        return cls(n, [0] * n)

    def __add__(self, other: "WeightVector") -> "WeightVector":
        return WeightVector(self.n, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "WeightVector") -> "WeightVector":
        return WeightVector(self.n, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "WeightVector":
        return WeightVector(self.n, [-a for a in self.coords])

    def __rmul__(self, k: int) -> "WeightVector":
        return WeightVector(self.n, [k * a for a in self.coords])

    def involution(self) -> "WeightVector":
        """Linear extension of ``w_i -> -w_(n+1-i)``."""
        return WeightVector(self.n, [-a for a in reversed(self.coords)])

    def __eq__(self, other):
        return isinstance(other, WeightVector) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"WeightVector({self.n}, {list(self.coords)})"


def weight_pairing(n: int, u: WeightVector, v: WeightVector) -> Fraction:
    """Bilinear extension of ``<w_i, w_j> = delta_ij - 1/n``."""
    if u.n != n or v.n != n:
        raise ValueError("weight vectors of the wrong rank")
    dot = sum(a * b for a, b in zip(u.coords, v.coords))
    return Fraction(dot) - Fraction(sum(u.coords) * sum(v.coords), n)
