"""Structure matrices of the n-triangulation.

For the triangle: the quiver matrix Q, the A-torus matrix P, the
transition matrix K and its inverse-up-to-n H. For a triangulated surface
the same matrices are assembled from the faces (Q), from skeletons (K, P)
and from the boundary structure (H); the extended versions live on the
surface with one triangle attached to each boundary edge.

Matrices are :class:`LabeledMatrix` objects: a numpy integer array with
row and column labels.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Sequence

import numpy as np

from .qtorus import LatticeMembership, PsiH, TorusElement, TorusPresentation
from .surface import (
    SLOTS,
    SurfaceError,
    TriangulatedSurface,
    extend,
    nxt,
    prv,
    rotate,
    slot_point,
    triangle_points,
    vertex_sets,
)

DIRECTIONS = ((1, -1, 0), (0, 1, -1), (-1, 0, 1))


class StructureError(ValueError):
    pass


class LabeledMatrix:
    """Integer matrix with hashable row/column labels."""

    def __init__(self, rows: Sequence[Hashable], cols: Sequence[Hashable], arr=None):
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        self.rpos = {r: i for i, r in enumerate(self.rows)}
        self.cpos = {c: i for i, c in enumerate(self.cols)}
        if arr is None:
            arr = np.zeros((len(self.rows), len(self.cols)), dtype=np.int64)
        self.arr = np.asarray(arr, dtype=np.int64)
        if self.arr.shape != (len(self.rows), len(self.cols)):
            raise StructureError("array shape does not match labels")

    def __getitem__(self, key):
        r, c = key
        return int(self.arr[self.rpos[r], self.cpos[c]])

    def __setitem__(self, key, value):
        r, c = key
        self.arr[self.rpos[r], self.cpos[c]] = value

    def row(self, r) -> tuple:
        return tuple(int(x) for x in self.arr[self.rpos[r]])

    def rows_list(self) -> list:
        return [[int(x) for x in row] for row in self.arr]

    @property
    def T(self) -> "LabeledMatrix":
        return LabeledMatrix(self.cols, self.rows, self.arr.T.copy())

    def __matmul__(self, other: "LabeledMatrix") -> "LabeledMatrix":
        if self.cols != other.rows:
            raise StructureError("label mismatch in matrix product")
        return LabeledMatrix(self.rows, other.cols, self.arr @ other.arr)

    def _same(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise StructureError("label mismatch")

    def __add__(self, other):
        self._same(other)
        return LabeledMatrix(self.rows, self.cols, self.arr + other.arr)

    def __sub__(self, other):
        self._same(other)
        return LabeledMatrix(self.rows, self.cols, self.arr - other.arr)

    def __mul__(self, k: int):
        return LabeledMatrix(self.rows, self.cols, self.arr * int(k))

    __rmul__ = __mul__

    def restrict(self, rows: Sequence[Hashable], cols: Sequence[Hashable]) -> "LabeledMatrix":
        ri = [self.rpos[r] for r in rows]
        ci = [self.cpos[c] for c in cols]
        return LabeledMatrix(rows, cols, self.arr[np.ix_(ri, ci)])

    def copy(self) -> "LabeledMatrix":
        return LabeledMatrix(self.rows, self.cols, self.arr.copy())

    def first_difference(self, other: "LabeledMatrix"):
        """First (row, col, self, other) where the matrices differ, or None."""
        self._same(other)
        diff = np.argwhere(self.arr != other.arr)
        if not len(diff):
            return None
        i, j = diff[0]
        return (self.rows[i], self.cols[j], int(self.arr[i, j]), int(other.arr[i, j]))

    def equals(self, other: "LabeledMatrix") -> bool:
        return self.first_difference(other) is None

    @classmethod
    def identity(cls, labels, scale: int = 1) -> "LabeledMatrix":
        return cls(labels, labels, np.eye(len(labels), dtype=np.int64) * scale)

    def to_json(self) -> dict:
        entries = [
            [_label(self.rows[i]), _label(self.cols[j]), int(self.arr[i, j])]
            for i, j in zip(*np.nonzero(self.arr))
        ]
        return {
            "rows": [_label(r) for r in self.rows],
            "cols": [_label(c) for c in self.cols],
            "entries": entries,
        }

    def to_text(self) -> str:
        width = max((len(str(int(x))) for x in self.arr.flat), default=1)
        lines = [f"# rows/cols: {', '.join(_label(r) for r in self.rows)}"]
        for row in self.arr:
            lines.append(" ".join(str(int(x)).rjust(width) for x in row))
        return "\n".join(lines)


def _label(x) -> str:
    if isinstance(x, tuple) and len(x) == 3 and all(isinstance(t, int) for t in x):
        return f"{x[0]},{x[1]},{x[2]}"
    return str(x)


# triangle


def _rotations(p):
    out = [p]
    for _ in range(2):
        out.append(rotate(out[-1]))
    return out


def _on_common_slot(u, v) -> bool:
    return any(u[prv(a) - 1] == 0 and v[prv(a) - 1] == 0 for a in SLOTS)


def triangle_Q(n: int) -> dict:
    pts = set(triangle_points(n))
    Q: dict = {p: Counter() for p in pts}
    for p in pts:
        for d in DIRECTIONS:
            w = (p[0] + d[0], p[1] + d[1], p[2] + d[2])
            if w in pts:
                weight = 1 if _on_common_slot(p, w) else 2
                Q[p][w] += weight
                Q[w][p] -= weight
    return Q


def triangle_P_entry(n: int, u, v) -> int:
    vals = set()
    for ru, rv in zip(_rotations(u), _rotations(v)):
        i, j, _ = ru
        i2, j2, _ = rv
        if (i <= i2 and j <= j2) or (i >= i2 and j >= j2):
            vals.add(n * (i * j2 - j * i2))
    if len(vals) != 1:
        raise StructureError(f"P({u},{v}) ambiguous or undefined: {vals}")
    return vals.pop()


def triangle_K_entry(n: int, u, v) -> int:
    vals = set()
    for ru, rv in zip(_rotations(u), _rotations(v)):
        i, j, k = ru
        i2, j2, k2 = rv
        if i2 <= i and j2 >= j:
            vals.add(j * k2 + k * i2 + i2 * j)
    if len(vals) != 1:
        raise StructureError(f"K({u},{v}) ambiguous or undefined: {vals}")
    return vals.pop()


def _H_from_Q(labels, Q: LabeledMatrix, same_edge, arrow) -> LabeledMatrix:
    H = LabeledMatrix(labels, labels)
    for u in labels:
        for v in labels:
            if same_edge(u, v):
                # boundary block: +1 on the diagonal, -1 along an arrow u -> v
                if u == v:
                    H[u, v] = 1
                elif arrow(u, v):
                    H[u, v] = -1
            else:
                q = Q[u, v]
                if q % 2:
                    raise StructureError(f"odd Q entry {q} off the boundary at ({u},{v})")
                H[u, v] = -q // 2
    return H


@dataclass
class TriangleMatrices:
    n: int
    V: tuple
    Q: LabeledMatrix
    P: LabeledMatrix
    K: LabeledMatrix
    H: LabeledMatrix

    def interior(self) -> list:
        return [p for p in self.V if min(p) > 0]


@lru_cache(maxsize=None)
def triangle_matrices(n: int) -> TriangleMatrices:
    if n < 2:
        raise StructureError("n must be at least 2")
    V = tuple(triangle_points(n))
    Qd = triangle_Q(n)
    Q = LabeledMatrix(V, V)
    for u in V:
        for v, w in Qd[u].items():
            Q[u, v] = w
    P = LabeledMatrix(V, V, [[triangle_P_entry(n, u, v) for v in V] for u in V])
    K = LabeledMatrix(V, V, [[triangle_K_entry(n, u, v) for v in V] for u in V])
    H = _H_from_Q(V, Q, _on_common_slot, lambda u, v: Q[u, v] == 1)
    return TriangleMatrices(n, V, Q, P, K, H)


def balanced_generators_triangle(n: int) -> list:
    """The vectors k_1, k_2, k_3 as dicts over triangle points."""
    pts = triangle_points(n)
    return [{p: p[a] for p in pts} for a in range(3)]


# skeletons


def _require_skeleton_ok(S: TriangulatedSurface):
    if S.has_self_gluing():
        raise SurfaceError("a face glued to itself is not supported for skeletons")
    if S.has_interior_puncture():
        raise SurfaceError("surfaces with interior punctures have no skeleton matrices")


def skeleton(S: TriangulatedSurface, n: int, v, face=None) -> dict:
    """Skeleton of a small vertex: face -> Counter of points in that face.

    ``face`` selects the representative used as the main segment; by
    default the first one. When given with ``face=None`` the mapping for all
    faces is returned.
    """
    _require_skeleton_ok(S)
    if face is None:
        nu, p = v.reps[0]
    else:
        cand = v.in_face(face)
        if not cand:
            raise SurfaceError(f"vertex {v.id} is not in face {face}")
        nu, p = face, cand[0]
    out: dict = {nu: Counter({p: 1})}
    cap = 3 * len(S.faces) + 3
    for a in SLOTS:
        w = p[a - 1]
        if not w:
            continue
        cur, exit_slot = nu, a
        for _step in range(cap + 1):
            nb = S.partner(cur, exit_slot)
            if nb is None:
                break
            g, b = nb
            y = [0, 0, 0]
            y[b - 1] = n - w
            y[nxt(b) - 1] = w
            out.setdefault(g, Counter())[tuple(y)] += 1
            cur, exit_slot = g, nxt(b)
        else:
            raise StructureError(f"elongation of {v.id} did not terminate")
    return out


def _face_sum(counter: Counter, fn) -> int:
    return sum(m * fn(p) for p, m in counter.items())


@dataclass
class ReducedMatrices:
    """Q, P, K, H on all small vertices of a surface."""

    labels: tuple
    Q: LabeledMatrix
    P: LabeledMatrix | None
    K: LabeledMatrix | None
    H: LabeledMatrix | None
    skeletons: dict = field(default_factory=dict)
    interior: tuple = ()
    on_edge: dict = field(default_factory=dict)  # vertex id -> boundary slots containing it

    def same_boundary_edge(self, a, b) -> bool:
        return bool(self.on_edge.get(a, set()) & self.on_edge.get(b, set()))


def reduced_matrices(S: TriangulatedSurface, n: int, with_PK: bool = True) -> ReducedMatrices:
    tri = triangle_matrices(n)
    verts = S.small_vertices(n)
    labels = tuple(v.id for v in verts)
    look = {rep: v.id for v in verts for rep in v.reps}
    Q = LabeledMatrix(labels, labels)
    for f in S.faces:
        for u in tri.V:
            for w in tri.V:
                q = tri.Q[u, w]
                if q:
                    a, b = look[(f, u)], look[(f, w)]
                    Q[a, b] = Q[a, b] + q
    bverts = S.boundary_vertices(n)
    on_edge: dict = {}
    for slot, vs in bverts.items():
        for v in vs:
            on_edge.setdefault(v.id, set()).add(slot)
    interior = tuple(v.id for v in verts if v.id not in on_edge)
    if not with_PK:
        return ReducedMatrices(labels, Q, None, None, None, {}, interior, on_edge)
    _require_skeleton_ok(S)
    sk = {v.id: skeleton(S, n, v) for v in verts}
    K = LabeledMatrix(labels, labels)
    for u in verts:
        sku = sk[u.id]
        for v in verts:
            vals = set()
            for f, p in v.reps:
                vals.add(_face_sum(sku.get(f, Counter()), lambda z: tri.K[z, p]))
            if len(vals) != 1:
                raise StructureError(f"K({u.id},{v.id}) depends on the face: {sorted(vals)}")
            K[u.id, v.id] = vals.pop()
    P = LabeledMatrix(labels, labels)
    for u in verts:
        for v in verts:
            total = 0
            for f, cu in sk[u.id].items():
                cv = sk[v.id].get(f)
                if not cv:
                    continue
                for z, m in cu.items():
                    for z2, m2 in cv.items():
                        total += m * m2 * tri.P[z, z2]
            P[u.id, v.id] = total

    def same_edge(a, b):
        return bool(on_edge.get(a, set()) & on_edge.get(b, set()))

    H = _H_from_Q(labels, Q, same_edge, lambda a, b: Q[a, b] == 1)
    return ReducedMatrices(labels, Q, P, K, H, sk, interior, on_edge)


@dataclass
class SurfaceMatrices:
    n: int
    surface: TriangulatedSurface
    extended_surface: TriangulatedSurface
    V_reduced: tuple
    V: tuple
    V_prime: tuple
    V_ext_all: tuple
    reduced: ReducedMatrices
    ext_reduced: ReducedMatrices
    Q: LabeledMatrix
    P: LabeledMatrix
    K: LabeledMatrix
    H: LabeledMatrix
    C: LabeledMatrix
    CK: LabeledMatrix

    @property
    def Qbar(self):
        return self.reduced.Q

    @property
    def Pbar(self):
        return self.reduced.P

    @property
    def Kbar(self):
        return self.reduced.K

    @property
    def Hbar(self):
        return self.reduced.H


def surface_matrices(S: TriangulatedSurface, n: int) -> SurfaceMatrices:
    _require_skeleton_ok(S)
    ext = extend(S)
    sets = vertex_sets(S, n)
    red = reduced_matrices(S, n)
    ered = reduced_matrices(ext, n)
    Vr = tuple(v.id for v in sets.reduced)
    # ids agree between S and its extension because base faces come first
    if set(Vr) != set(red.labels):
        raise StructureError("reduced vertex labels disagree between surface and extension")
    Vr = red.labels
    V = tuple(v.id for v in sets.x_set)
    Vp = tuple(v.id for v in sets.a_set)
    Vall = ered.labels
    C = LabeledMatrix(Vp, Vall)
    vr_set = set(Vr)
    look = ext.vertex_lookup(n)
    for v in sets.a_set:
        C[v.id, v.id] = 1
        if v.id in vr_set:
            continue
        (f, p), = [(f, p) for f, p in v.reps if f in ext.attached]
        if p[2] == 0:
            raise StructureError(f"{v.id} should not lie on the attaching edge")
        target = look[(f, (0, n - p[2], p[2]))].id
        C[v.id, target] = C[v.id, target] - 1
    CK = C @ ered.K
    P = C @ ered.P @ C.T
    K = CK.restrict(Vp, V)
    H = ered.H.restrict(V, Vp)
    Q = ered.Q.restrict(V, V)
    return SurfaceMatrices(n, S, ext, Vr, V, Vp, Vall, red, ered, Q, P, K, H, C, CK)


# verification


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"check": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class Report:
    checks: list = field(default_factory=list)

    def add(self, name, ok, detail=""):
        self.checks.append(CheckResult(name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(CheckResult(prefix + c.name, c.ok, c.detail))

    def to_json(self):
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}

    def to_text(self):
        return "\n".join(
            f"{'PASS' if c.ok else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else "")
            for c in self.checks
        )


def _diff_detail(d) -> str:
    if d is None:
        return ""
    r, c, a, b = d
    return f"first mismatch at ({_label(r)}, {_label(c)}): {a} != {b}"


def _check_eq(report: Report, name: str, lhs: LabeledMatrix, rhs: LabeledMatrix):
    d = lhs.first_difference(rhs)
    report.add(name, d is None, _diff_detail(d))


def verify_square(n: int, Q, P, K, H, interior, tag: str = "") -> Report:
    """The identity family on one set of square matrices."""
    rep = Report()
    labels = Q.rows
    _check_eq(rep, f"{tag}n(K-K^t)=P", (K - K.T) * n, P)
    _check_eq(rep, f"{tag}H^t-H=Q", H.T - H, Q)
    _check_eq(rep, f"{tag}HK=nId", H @ K, LabeledMatrix.identity(labels, n))
    _check_eq(rep, f"{tag}KQK^t=P", K @ Q @ K.T, P)
    PQ = P @ Q
    bad = None
    for v in interior:
        for u in labels:
            want = -4 * n * n if u == v else 0
            if PQ[u, v] != want:
                bad = (u, v, PQ[u, v], want)
                break
        if bad:
            break
    rep.add(f"{tag}PQ compatibility blocks", bad is None, _diff_detail(bad))
    return rep


def verify_identities(M, n: int | None = None) -> Report:
    """Check the matrix identities for a triangle or a surface."""
    if isinstance(M, TriangleMatrices):
        n = M.n
        return verify_square(n, M.Q, M.P, M.K, M.H, M.interior(), "triangle: ")
    if isinstance(M, SurfaceMatrices):
        n = M.n
        rep = Report()
        r = M.reduced
        rep.extend(verify_square(n, r.Q, r.P, r.K, r.H, r.interior, "reduced: "))
        _check_eq(rep, "extended: HK=nId", M.H @ M.K, LabeledMatrix.identity(M.V, n))
        _check_eq(rep, "extended: KQK^t=P", M.K @ M.Q @ M.K.T, M.P)
        zero_block = M.CK.restrict(M.V_prime, [v for v in M.V_ext_all if v not in set(M.V)])
        zb = LabeledMatrix(zero_block.rows, zero_block.cols)
        _check_eq(rep, "extended: CK vanishes off V", zero_block, zb)
        Vr = M.V_reduced
        # glued boundary arrows cancel, so Q only agrees off boundary-edge pairs
        Qr = M.Q.restrict(Vr, Vr)
        Qmask = Qr.copy()
        for a in Vr:
            for b in Vr:
                if r.same_boundary_edge(a, b):
                    Qmask[a, b] = r.Q[a, b]
        _check_eq(rep, "restriction: Q|=Qbar off boundary edges", Qmask, r.Q)
        _check_eq(rep, "restriction: P|=Pbar", M.P.restrict(Vr, Vr), r.P)
        _check_eq(rep, "restriction: K|=Kbar", M.K.restrict(Vr, Vr), r.K)
        return rep
    raise TypeError("expected TriangleMatrices or SurfaceMatrices")


def matrices_for(S: TriangulatedSurface, n: int):
    """Triangle matrices for a single unglued face, surface matrices otherwise."""
    return surface_matrices(S, n)


# balanced lattice


class BalancedLattice:
    """Balanced vectors over a vertex set with a per-face mod-n test.

    ``extended`` selects V (the X-vertex set of the extended surface)
    instead of the reduced vertex set.
    """

    def __init__(self, S: TriangulatedSurface, n: int, extended: bool = False,
                 matrices: SurfaceMatrices | None = None):
        self.S, self.n, self.extended = S, n, extended
        self.M = matrices or surface_matrices(S, n)
        surf = self.M.extended_surface if extended else S
        self.labels = self.M.V if extended else self.M.V_reduced
        self.K = self.M.K if extended else self.M.Kbar
        self.H = self.M.H if extended else self.M.Hbar
        self._look = surf.vertex_lookup(n)
        self._faces = surf.faces
        self._pos = {v: i for i, v in enumerate(self.labels)}
        self._row_lattice = None

    def face_vector(self, k: Sequence[int], face) -> dict:
        n = self.n
        out = {}
        for p in triangle_points(n):
            vid = self._look[(face, p)].id
            i = self._pos.get(vid)
            out[p] = k[i] if i is not None else 0
        return out

    def violation(self, k: Sequence[int]):
        """None if balanced, else (face, point) where the face test fails."""
        n = self.n
        for f in self._faces:
            kv = self.face_vector(k, f)
            a = -kv[(n - 1, 0, 1)]
            b = kv[(n - 1, 1, 0)] + a
            for p, val in kv.items():
                if (val - a * p[0] - b * p[1]) % n:
                    return (f, p)
        return None

    def is_balanced(self, k: Sequence[int]) -> bool:
        return self.violation(k) is None

    def kH(self, k: Sequence[int]) -> list:
        return [int(x) for x in np.asarray(k, dtype=np.int64) @ self.H.arr]

    def h_test(self, k: Sequence[int]) -> bool:
        return all(x % self.n == 0 for x in self.kH(k))

    def in_row_span(self, k: Sequence[int]) -> bool:
        """Integer row span of K, via Hermite normal form (independent of H)."""
        if self._row_lattice is None:
            self._row_lattice = LatticeMembership(self.K.rows_list(), len(self.labels))
        return list(k) in self._row_lattice

    def solve(self, k: Sequence[int]) -> list:
        """c with cK = k; raises with the offending vertex when k is unbalanced."""
        kh = self.kH(k)
        for v, x in zip(self.H.cols, kh):
            if x % self.n:
                raise StructureError(f"vector is not balanced: (kH)({v}) = {x} is not divisible by {self.n}")
        c = [x // self.n for x in kh]
        back = [int(x) for x in np.asarray(c, dtype=np.int64) @ self.K.arr]
        if back != list(k):
            raise StructureError("internal error: cK != k")
        return c

    def face_generators(self) -> list:
        """Per-face k_1, k_2 pulled onto the vertex set (values summed over reps)."""
        gens = []
        n = self.n
        for f in self._faces:
            for a in (0, 1):
                vec = [0] * len(self.labels)
                for p in triangle_points(n):
                    i = self._pos.get(self._look[(f, p)].id)
                    if i is not None:
                        vec[i] = p[a]
                gens.append(vec)
        return gens

    def basis(self) -> list:
        """Generators of the balanced lattice: rows of K."""
        return self.K.rows_list()


def balanced(S: TriangulatedSurface, n: int, extended: bool = False) -> BalancedLattice:
    return BalancedLattice(S, n, extended)


# transition maps


class Transition:
    """The map a^k -> x^(kK) with its inverse on balanced monomials."""

    def __init__(self, S: TriangulatedSurface, n: int, reduced: bool = True,
                 matrices: SurfaceMatrices | None = None):
        M = matrices or surface_matrices(S, n)
        self.n = n
        self.M = M
        if reduced:
            self.K, self.H = M.Kbar, M.Hbar
            self.x_pres = TorusPresentation(M.V_reduced, M.Qbar.rows_list())
            self.a_pres = TorusPresentation(M.V_reduced, M.Pbar.rows_list())
        else:
            self.K, self.H = M.K, M.H
            self.x_pres = TorusPresentation(M.V, M.Q.rows_list())
            self.a_pres = TorusPresentation(M.V_prime, M.P.rows_list())
        self.psi = PsiH(self.a_pres, self.x_pres, self.K.rows_list())

    def __call__(self, element: TorusElement) -> TorusElement:
        return self.psi(element)

    def inverse_exponent(self, k: tuple) -> tuple:
        kh = np.asarray(k, dtype=np.int64) @ self.H.arr
        if any(int(x) % self.n for x in kh):
            raise StructureError(f"exponent {self.x_pres.exponent_dict(k)} is not balanced")
        return tuple(int(x) // self.n for x in kh)

    def inverse(self, element: TorusElement) -> TorusElement:
        return element.map_exponents(self.a_pres, self.inverse_exponent)


def transition_psi(S: TriangulatedSurface, n: int, reduced: bool = True) -> Transition:
    return Transition(S, n, reduced)
