"""Matrices with quantum-torus entries.

Relation checks for q-quantum matrices, quantum determinants and minors
(literal ordered products, no commutativity assumed), the adjugate
identity and Cramer's rule for matrices with a unit determinant.

Rows and columns are 1-based in the public API, matching the usual
notation ``u_ij``.
"""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

from .qtorus import TorusElement, TorusPresentation
from .scalars import LaurentScalar, minus_q_power, q_exponent
from .structmat import Report


class QMatrixError(ValueError):
    pass


def inversions(perm: Sequence[int]) -> int:
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


class QMatrix:
    """Rectangular matrix of TorusElements over one presentation.

    ``n`` is the rank fixing ``q = hq^(2 n^2)``; ``q_sign = -1`` switches
    every formula to ``q^-1``.
    """

    def __init__(self, entries: Sequence[Sequence[TorusElement]], n: int, q_sign: int = 1):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise QMatrixError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise QMatrixError("ragged matrix")
        pres = rows[0][0].pres
        for r in rows:
            for e in r:
                if e.pres != pres:
                    raise QMatrixError("entries live in different tori")
        self.entries = rows
        self.pres: TorusPresentation = pres
        self.n = n
        self.q_sign = q_sign
        self.q_exp = q_sign * q_exponent(n, 1)

    @property
    def shape(self):
        return len(self.entries), len(self.entries[0])

    def __getitem__(self, ij) -> TorusElement:
        i, j = ij
        return self.entries[i - 1][j - 1]

    def q(self) -> LaurentScalar:
        return LaurentScalar.monomial(self.q_exp)

    def mq(self, k: int) -> LaurentScalar:
        """(-q)^k with the matrix's q."""
        return LaurentScalar.monomial(k * self.q_exp, -1 if k % 2 else 1)

    def with_q_inverse(self) -> "QMatrix":
        return QMatrix(self.entries, self.n, -self.q_sign)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        return QMatrix([[self[i, j] for j in cols] for i in rows], self.n, self.q_sign)

    def transpose(self) -> "QMatrix":
        r, c = self.shape
        return QMatrix([[self[i, j] for i in range(1, r + 1)] for j in range(1, c + 1)], self.n, self.q_sign)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        r, m = self.shape
        m2, c = other.shape
        if m != m2:
            raise QMatrixError("shape mismatch")
        out = []
        for i in range(1, r + 1):
            row = []
            for j in range(1, c + 1):
                acc = self.pres.zero()
                for t in range(1, m + 1):
                    acc = acc + self[i, t] * other[t, j]
                row.append(acc)
            out.append(row)
        return QMatrix(out, self.n, self.q_sign)

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.entries == other.entries

    def to_json(self) -> dict:
        return {"rows": [[e.to_json() for e in r] for r in self.entries]}

    def to_text(self) -> str:
        r, c = self.shape
        lines = []
        for i in range(1, r + 1):
            for j in range(1, c + 1):
                lines.append(f"[{i},{j}] = {self[i, j].to_text()}")
        return "\n".join(lines)


def zero_matrix(pres: TorusPresentation, size: int, n: int) -> QMatrix:
    return QMatrix([[pres.zero() for _ in range(size)] for _ in range(size)], n)


def identity_matrix(pres: TorusPresentation, size: int, n: int) -> QMatrix:
    return QMatrix(
        [[pres.one() if i == j else pres.zero() for j in range(size)] for i in range(size)], n
    )


def is_q_quantum(M: QMatrix, n_param: int | None = None) -> Report:
    """Check every 2x2 submatrix against the six q-quantum relations."""
    if n_param is not None and n_param != M.n:
        M = QMatrix(M.entries, n_param, M.q_sign)
    rep = Report()
    r, c = M.shape
    q = M.q()
    qi = q.inverse()
    failures = []
    for i in range(1, r + 1):
        for k in range(i + 1, r + 1):
            for j in range(1, c + 1):
                for l in range(j + 1, c + 1):
                    a, b, cc, d = M[i, j], M[i, l], M[k, j], M[k, l]
                    rels = (
                        ("ab=qba", a * b, (b * a) * q),
                        ("ac=qca", a * cc, (cc * a) * q),
                        ("bd=qdb", b * d, (d * b) * q),
                        ("cd=qdc", cc * d, (d * cc) * q),
                        ("bc=cb", b * cc, cc * b),
                        ("ad-da=(q-q^-1)bc", a * d - d * a, (b * cc) * (q - qi)),
                    )
                    for name, lhs, rhs in rels:
                        if lhs != rhs:
                            failures.append(f"rows {i},{k} cols {j},{l}: {name}")
    rep.add("q-quantum relations", not failures, "; ".join(failures[:5]))
    return rep


def qdet(M: QMatrix, by: str = "rows") -> TorusElement:
    """Quantum determinant with the row-ordered (default) or column-ordered formula."""
    r, c = M.shape
    if r != c:
        raise QMatrixError("determinant of a non-square matrix")
    total = M.pres.zero()
    for perm in permutations(range(1, r + 1)):
        term = M.pres.one()
        for t in range(r):
            entry = M[t + 1, perm[t]] if by == "rows" else M[perm[t], t + 1]
            if entry.is_zero():
                term = None
                break
            term = term * entry
        if term is None:
            continue
        total = total + term * M.mq(inversions(perm))
    return total


def qminor(M: QMatrix, I: Sequence[int], J: Sequence[int]) -> TorusElement:
    if len(I) != len(J):
        raise QMatrixError("minor with |I| != |J|")
    if not I:
        return M.pres.one()
    return qdet(M.submatrix(sorted(I), sorted(J)))


def adjugate(M: QMatrix) -> QMatrix:
    """``(u^!)_ij = (-q)^(i-j) det_q(u with row j and column i removed)``."""
    r, c = M.shape
    if r != c:
        raise QMatrixError("adjugate of a non-square matrix")
    idx = list(range(1, r + 1))
    out = []
    for i in idx:
        row = []
        for j in idx:
            minor = qminor(M, [t for t in idx if t != j], [t for t in idx if t != i])
            row.append(minor * M.mq(i - j))
        out.append(row)
    return QMatrix(out, M.n, M.q_sign)


def adjugate_check(M: QMatrix) -> Report:
    rep = Report()
    r, _ = M.shape
    d = qdet(M)
    A = adjugate(M)
    target = [[d if i == j else M.pres.zero() for j in range(r)] for i in range(r)]
    rep.add("u^! u = det_q id", (A @ M).entries == target)
    rep.add("u u^! = det_q id", (M @ A).entries == target)
    rep.add("u^! is q^-1-quantum", is_q_quantum(A.with_q_inverse()).ok)
    return rep


def is_unit(e: TorusElement) -> bool:
    if not e.is_monomial():
        return False
    ((_, c),) = e.terms()
    return c.is_unit()


def cramer_solve(Mprime: QMatrix, method: str = "auto") -> list:
    """Solve ``M x = c`` for ``M' = [c | M]`` with ``det_q(M)`` a unit monomial.

    ``method="minors"`` uses ``x_i = (-q)^(i-1) det_q(M)^-1 det_q(M_i)`` (M_i drops
    column i+1 of M'), valid when M' is q-quantum. ``method="adjugate"`` uses
    ``x = det_q(M)^-1 M^! c``, which only needs M to be q-quantum. ``auto`` picks
    the minor formula when M' passes the relation check. The residual is
    always checked.
    """
    r, cols = Mprime.shape
    if cols != r + 1:
        raise QMatrixError("Cramer's rule needs an n x (n+1) matrix")
    idx = list(range(1, r + 1))
    M = Mprime.submatrix(idx, list(range(2, r + 2)))
    d = qdet(M)
    if not is_unit(d):
        raise QMatrixError("det_q(M) is not invertible in the torus")
    dinv = d.inverse()
    if method == "auto":
        method = "minors" if is_q_quantum(Mprime).ok else "adjugate"
    xs = []
    if method == "minors":
        for i in idx:
            Mi = Mprime.submatrix(idx, [t for t in range(1, r + 2) if t != i + 1])
            xs.append(dinv * qdet(Mi) * Mprime.mq(i - 1))
    elif method == "adjugate":
        A = adjugate(M)
        for i in idx:
            acc = Mprime.pres.zero()
            for j in idx:
                acc = acc + A[i, j] * Mprime[j, 1]
            xs.append(dinv * acc)
    else:
        raise QMatrixError(f"unknown method {method!r}")
    for a in idx:
        acc = Mprime.pres.zero()
        for b in idx:
            acc = acc + M[a, b] * xs[b - 1]
        if acc != Mprime[a, 1]:
            raise QMatrixError(f"residual M x - c is nonzero in row {a}")
    return xs


def r_matrix(n: int) -> dict:
    """Entries ``R[(i,j,l,k)]`` of the fundamental R-matrix, keyed as R^{ij}_{lk}."""
    base = -q_exponent(n, 1, n)
    q = LaurentScalar.monomial(q_exponent(n, 1))
    qq = q - q.inverse()
    out = {}
    rng = range(1, n + 1)
    for i in rng:
        for j in rng:
            for l in rng:
                for k in rng:
                    val = LaurentScalar()
                    if j == k and i == l:
                        val = val + (q if i == j else LaurentScalar.from_int(1))
                    if j < k and j == l and i == k:
                        val = val + qq
                    if val:
                        out[(i, j, l, k)] = val.shift(base)
    return out


def minus_q(n: int, k: int) -> LaurentScalar:
    return minus_q_power(n, k)
