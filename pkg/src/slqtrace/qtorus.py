"""Quantum tori T(Q) and their elements.

A presentation is an ordered index set with an antisymmetric integer
matrix Q, giving generators with ``x_u x_v = hq^(2 Q(u,v)) x_v x_u``.
Elements are stored as sums of Weyl-normalized monomials ``x^k`` with
Laurent coefficients; products use ``x^k x^l = hq^<k,l> x^(k+l)`` where
``<k,l> = sum_ij Q_ij k_i l_j``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .kernels import BilinearForm, torus_mul
from .scalars import ONE, LaurentScalar

INHOMOGENEOUS = "inhomogeneous"


class PresentationError(ValueError):
    pass


class TorusPresentation:
    """Index set plus antisymmetric matrix. Immutable."""

    def __init__(self, index: Sequence[Hashable], Q):
        self.index = tuple(index)
        self.pos = {v: i for i, v in enumerate(self.index)}
        if len(self.pos) != len(self.index):
            raise PresentationError("duplicate vertex identifiers")
        d = len(self.index)
        rows = _as_rows(Q, self.index)
        if len(rows) != d or any(len(r) != d for r in rows):
            raise PresentationError("Q has the wrong shape")
        for i in range(d):
            if rows[i][i]:
                raise PresentationError(f"Q({self.index[i]},{self.index[i]}) != 0")
            for j in range(i + 1, d):
                if rows[i][j] != -rows[j][i]:
                    raise PresentationError(
                        f"Q not antisymmetric at ({self.index[i]},{self.index[j]})"
                    )
        self.Q = rows
        self.form = BilinearForm(rows)

    @property
    def dim(self) -> int:
        return len(self.index)

    def q(self, u, v) -> int:
        return self.Q[self.pos[u]][self.pos[v]]

    def pair(self, k: tuple, l: tuple) -> int:
        return self.form.pair(k, l)

    def exponent(self, k) -> tuple:
        """Normalize a mapping or a sequence into a dense exponent tuple."""
        if isinstance(k, Mapping):
            out = [0] * self.dim
            for v, c in k.items():
                if v not in self.pos:
                    raise PresentationError(f"unknown vertex {v!r}")
                out[self.pos[v]] += int(c)
            return tuple(out)
        k = tuple(int(c) for c in k)
        if len(k) != self.dim:
            raise PresentationError(f"exponent of length {len(k)} for a {self.dim}-dim torus")
        return k

    def exponent_dict(self, k: tuple) -> dict:
        return {self.index[i]: c for i, c in enumerate(k) if c}

    def zero(self) -> "TorusElement":
        return TorusElement(self, {})

    def one(self) -> "TorusElement":
        return self.monomial((0,) * self.dim)

    def monomial(self, k, coeff: LaurentScalar | int = 1) -> "TorusElement":
        k = self.exponent(k)
        if isinstance(coeff, int):
            coeff = LaurentScalar.from_int(coeff)
        return TorusElement(self, {k: coeff} if coeff else {})

    def generator(self, v) -> "TorusElement":
        return self.monomial({v: 1})

    def ordered_product(self, k) -> "TorusElement":
        """The raw product ``x_1^k_1 ... x_r^k_r`` in index order."""
        k = self.exponent(k)
        return self.monomial(k, LaurentScalar.monomial(self.form.lower_half(k)))

    def restrict(self, subset: Sequence[Hashable]) -> "TorusPresentation":
        idx = [self.pos[v] for v in subset]
        return TorusPresentation(subset, [[self.Q[i][j] for j in idx] for i in idx])

    def __eq__(self, other):
        return (
            isinstance(other, TorusPresentation)
            and self.index == other.index
            and self.Q == other.Q
        )

    def __hash__(self):
        return hash((self.index, self.Q))

    def __repr__(self):
        return f"TorusPresentation(dim={self.dim})"


def _as_rows(Q, index) -> tuple:
    if isinstance(Q, Mapping):
        return tuple(tuple(int(Q.get(u, {}).get(v, 0)) for v in index) for u in index)
    return tuple(tuple(int(x) for x in row) for row in Q)


def block_sum(presentations: Sequence[TorusPresentation], tags: Sequence[Hashable]) -> TorusPresentation:
    """Tensor-product torus: disjoint union of index sets, block-diagonal Q.

    Vertex ``v`` of the ``t``-th factor becomes ``(tags[t], v)``.
    """
    index = []
    for tag, p in zip(tags, presentations):
        index.extend((tag, v) for v in p.index)
    d = len(index)
    rows = [[0] * d for _ in range(d)]
    off = 0
    for p in presentations:
        for i in range(p.dim):
            for j in range(p.dim):
                rows[off + i][off + j] = p.Q[i][j]
        off += p.dim
    return TorusPresentation(index, rows)


def vertex_key(v) -> str:
    """JSON key for a vertex: barycentric triples print as ``i,j,k``."""
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    return str(v)


class TorusElement:
    """Finite sum of Weyl-normalized monomials over one presentation."""

    __slots__ = ("pres", "_terms")

    def __init__(self, pres: TorusPresentation, terms: Mapping[tuple, LaurentScalar]):
        self.pres = pres
        self._terms = {k: c for k, c in terms.items() if c}

    # basic access

    def terms(self) -> list:
        """Terms in canonical (lexicographic exponent) order."""
        return sorted(self._terms.items())

    def coefficient(self, k) -> LaurentScalar:
        return self._terms.get(self.pres.exponent(k), LaurentScalar())

    def exponents(self) -> list:
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_normalized_monomial(self) -> bool:
        """A single term ``x^k`` with coefficient exactly 1."""
        return self.is_monomial() and next(iter(self._terms.values())) == ONE

    def monomial_exponent(self) -> tuple:
        if not self.is_monomial():
            raise ValueError("element is not a single monomial")
        return next(iter(self._terms))

    def __len__(self):
        return len(self._terms)

    # arithmetic

    def _check(self, other: "TorusElement"):
        if other.pres is not self.pres and other.pres != self.pres:
            raise PresentationError("elements live in different tori")

    def _lift(self, other):
        if isinstance(other, TorusElement):
            self._check(other)
            return other
        if isinstance(other, (int, LaurentScalar)):
            return self.pres.monomial((0,) * self.pres.dim, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return TorusElement(self.pres, out)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement(self.pres, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s: LaurentScalar | int) -> "TorusElement":
        if isinstance(s, int):
            s = LaurentScalar.from_int(s)
        return TorusElement(self.pres, {k: c * s for k, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, LaurentScalar)):
            return self.scale(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._check(other)
        left = [(k, c.raw_terms()) for k, c in self._terms.items()]
        right = [(k, c.raw_terms()) for k, c in other._terms.items()]
        raw = torus_mul(self.pres.form, left, right)
        return TorusElement(self.pres, {k: LaurentScalar._raw(v) for k, v in raw.items()})

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentScalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.pres.one()
        for _ in range(e):
            out = out * self
        return out

    def inverse(self) -> "TorusElement":
        """Inverse of a unit monomial ``c x^k``, namely ``c^-1 x^-k``."""
        if not self.is_monomial():
            raise ZeroDivisionError("only monomials with unit coefficients are invertible")
        ((k, c),) = self._terms.items()
        if not c.is_unit():
            raise ZeroDivisionError(f"coefficient {c} is not a unit")
        return TorusElement(self.pres, {tuple(-a for a in k): c.inverse()})

    def __eq__(self, other):
        if isinstance(other, (int, LaurentScalar)):
            other = self._lift(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.pres == other.pres and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # structure

    def reflect(self) -> "TorusElement":
        return TorusElement(self.pres, {k: c.reflect() for k, c in self._terms.items()})

    def degree_in(self, v):
        """Common exponent of ``x_v`` over all terms, or ``INHOMOGENEOUS``.

        The zero element has no terms and returns None.
        """
        i = self.pres.pos[v]
        degs = {k[i] for k in self._terms}
        if not degs:
            return None
        if len(degs) > 1:
            return INHOMOGENEOUS
        return degs.pop()

    def specialize_classical(self, assignment: Mapping | None = None) -> Fraction:
        """Evaluate at ``hq = 1`` with ``x_v`` set to ``assignment[v]`` (default 1)."""
        assignment = assignment or {}
        vals = [Fraction(assignment.get(v, 1)) for v in self.pres.index]
        total = Fraction(0)
        for k, c in self._terms.items():
            term = Fraction(c.at_one())
            for val, e in zip(vals, k):
                if e:
                    term *= val**e
            total += term
        return total

    def map_exponents(
        self, target: TorusPresentation, fn: Callable[[tuple], tuple | None]
    ) -> "TorusElement":
        """Apply ``x^k -> x^fn(k)`` termwise, dropping terms where fn gives None."""
        out: dict = {}
        for k, c in self._terms.items():
            new = fn(k)
            if new is None:
                continue
            new = target.exponent(new)
            s = out.get(new)
            out[new] = c if s is None else s + c
        return TorusElement(target, out)

    # serialization

    def to_json(self) -> dict:
        return {
            "terms": [
                {"exp": {vertex_key(v): e for v, e in self.pres.exponent_dict(k).items()},
                 "coeff": c.to_json()}
                for k, c in self.terms()
            ]
        }

    @classmethod
    def from_json(cls, pres: TorusPresentation, data: Mapping) -> "TorusElement":
        out: dict = {}
        keys = {vertex_key(v): v for v in pres.index}
        for term in data.get("terms", []):
            try:
                k = pres.exponent({keys[v]: e for v, e in term["exp"].items()})
            except KeyError as exc:
                raise PresentationError(f"unknown vertex {exc.args[0]!r}") from None
            c = LaurentScalar.from_json(term["coeff"])
            out[k] = out[k] + c if k in out else c
        return cls(pres, out)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in self.terms():
            mono = " ".join(f"x[{vertex_key(v)}]^{e}" for v, e in self.pres.exponent_dict(k).items())
            parts.append(f"({c})" + (f" * {mono}" if mono else ""))
        return "\n+ ".join(parts)

    def __repr__(self):
        return f"TorusElement({self.to_text()})"


def weyl_product(*factors: TorusElement) -> TorusElement:
    """Weyl-normalized product of monomials ``c_i x^(k_i)``: ``prod(c_i) x^(sum k_i)``."""
    if not factors:
        raise ValueError("empty product")
    pres = factors[0].pres
    coeff = ONE
    total = [0] * pres.dim
    for f in factors:
        if not f.is_monomial():
            raise ValueError("Weyl normalization needs monomial factors")
        ((k, c),) = f._terms.items()
        coeff = coeff * c
        total = [a + b for a, b in zip(total, k)]
    return pres.monomial(tuple(total), coeff)


def commutation_exponent(a: TorusElement, b: TorusElement) -> int:
    """For monomials, the e with ``a b = hq^e b a``."""
    ka, kb = a.monomial_exponent(), b.monomial_exponent()
    return 2 * a.pres.pair(ka, kb)


def monomial(pres: TorusPresentation, k) -> TorusElement:
    return pres.monomial(k)


def mul(a: TorusElement, b: TorusElement) -> TorusElement:
    return a * b


def reflect(a: TorusElement) -> TorusElement:
    return a.reflect()


def degree_in(a: TorusElement, v):
    return a.degree_in(v)


def specialize_classical(a: TorusElement, assignment: Mapping | None = None) -> Fraction:
    return a.specialize_classical(assignment)


class CompatibilityError(ValueError):
    pass


class PsiH:
    """Multiplicatively linear map ``x^k -> x^(kH)`` from T(Q) to T(Q').

    Construction checks ``H Q' H^t = Q`` exactly.
    """

    def __init__(self, source: TorusPresentation, target: TorusPresentation, H):
        rows = tuple(tuple(int(x) for x in r) for r in H)
        if len(rows) != source.dim or any(len(r) != target.dim for r in rows):
            raise CompatibilityError("H has the wrong shape")
        self.source, self.target, self.H = source, target, rows
        HQ = [[target.form.pair(rows[i], _unit(target.dim, j)) for j in range(target.dim)]
              for i in range(source.dim)]
        for i in range(source.dim):
            for j in range(source.dim):
                val = sum(a * b for a, b in zip(HQ[i], rows[j]))
                if val != source.Q[i][j]:
                    raise CompatibilityError(
                        f"H Q' H^t != Q at ({source.index[i]!r},{source.index[j]!r}):"
                        f" {val} vs {source.Q[i][j]}"
                    )

    def image_exponent(self, k: tuple) -> tuple:
        d = self.target.dim
        out = [0] * d
        for a, row in zip(k, self.H):
            if a:
                for j in range(d):
                    out[j] += a * row[j]
        return tuple(out)

    def __call__(self, element: TorusElement) -> TorusElement:
        if element.pres != self.source:
            raise PresentationError("argument is not in the source torus")
        return element.map_exponents(self.target, self.image_exponent)


def psi_H(source: TorusPresentation, target: TorusPresentation, H) -> PsiH:
    return PsiH(source, target, H)


def _unit(d: int, j: int) -> tuple:
    return tuple(1 if t == j else 0 for t in range(d))


class LatticeMembership:
    """Membership predicate for the integer row span of a generator matrix.

    Uses the Hermite normal form of the generators; coordinates with respect
    to the HNF basis are solved on a set of independent rows and checked
    against the full vector.
    """

    def __init__(self, generators: Sequence[Sequence[int]], dim: int | None = None):
        from sympy import Matrix
        from sympy.matrices.normalforms import hermite_normal_form

        gens = [list(map(int, g)) for g in generators if any(g)]
        self.dim = dim if dim is not None else (len(gens[0]) if gens else 0)
        if not gens:
            self.basis: list = []
            self._pivots: list = []
            self._inv: list = []
            return
        H = hermite_normal_form(Matrix(gens).T)  # columns span the lattice
        self.basis = [[int(H[i, j]) for i in range(H.rows)] for j in range(H.cols)]
        _, piv = H.T.rref()
        self._pivots = list(piv)
        sub = Matrix([[H[p, j] for j in range(H.cols)] for p in self._pivots])
        inv = sub.inv()
        self._inv = [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(inv.cols)]
                     for i in range(inv.rows)]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, k: Sequence[int]) -> list | None:
        """Integer coordinates on the HNF basis, or None if k is not in the lattice."""
        k = list(k)
        if not self.basis:
            return [] if not any(k) else None
        rhs = [k[p] for p in self._pivots]
        coords = []
        for row in self._inv:
            val = sum(a * b for a, b in zip(row, rhs))
            if val.denominator != 1:
                return None
            coords.append(int(val))
        recon = [0] * len(k)
        for c, b in zip(coords, self.basis):
            if c:
                for i, x in enumerate(b):
                    recon[i] += c * x
        return coords if recon == k else None

    def __contains__(self, k) -> bool:
        return self.coordinates(k) is not None


def in_subalgebra(element: TorusElement, predicate: Callable[[tuple], bool]) -> bool:
    """True when every exponent of the element satisfies the predicate."""
    return all(predicate(k) for k in element._terms)
