"""Quantum traces of stated arcs.

Triangle layer: compatible paths in the dual graph of the n-triangulation,
corner-arc traces, transport matrices and the frame elements ``g_v``.
Surface layer: the extended counit, cutting along edges, traces of simple
stated arcs (reduced and extended) and the A-version.

Small triangles are named by their lowest-sum barycentric data:
``("U", i, j, k)`` with ``i+j+k = n-1`` has corners ``(i+1,j,k)``,
``(i,j+1,k)``, ``(i,j,k+1)``; ``("D", a, b, c)`` with ``a+b+c = n-2`` has
corners ``(a,b+1,c+1)``, ``(a+1,b,c+1)``, ``(a+1,b+1,c)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .qmatrix import QMatrix, is_q_quantum, qdet, qminor, r_matrix
from .qtorus import TorusElement, TorusPresentation, weyl_product
from .scalars import LaurentScalar, constants
from .structmat import Report, triangle_matrices
from .surface import rotate, triangle_points


class TraceError(ValueError):
    pass


CCW, CW = "C", "Cbar"
ORIENTATIONS = (CCW, CW)


@dataclass(frozen=True)
class StatedCornerArc:
    corner: int
    orientation: str
    i: int
    j: int

    def __post_init__(self):
        if self.corner not in (1, 2, 3):
            raise TraceError(f"corner must be 1, 2 or 3, got {self.corner}")
        if self.orientation not in ORIENTATIONS:
            raise TraceError(f"orientation must be one of {ORIENTATIONS}")

    @property
    def bad(self) -> bool:
        return self.i < self.j


@dataclass(frozen=True)
class CompatiblePath:
    """Dual-graph walk at corner v1: small triangles visited, step tags,
    and the boundary small edges where it enters and leaves."""

    nodes: tuple
    steps: tuple
    start_edge: frozenset
    end_edge: frozenset

    def crossed_edges(self) -> list:
        out = [self.start_edge]
        for a, b in zip(self.nodes, self.nodes[1:]):
            out.append(shared_edge(a, b))
        out.append(self.end_edge)
        return out


# small triangles


def corners_of(t) -> tuple:
    kind, a, b, c = t
    if kind == "U":
        return ((a + 1, b, c), (a, b + 1, c), (a, b, c + 1))
    return ((a, b + 1, c + 1), (a + 1, b, c + 1), (a + 1, b + 1, c))


def shared_edge(s, t) -> frozenset:
    e = frozenset(corners_of(s)) & frozenset(corners_of(t))
    if len(e) != 2:
        raise TraceError(f"{s} and {t} are not adjacent")
    return e


def _left_edge(u) -> frozenset:
    a, _, c = corners_of(u)
    return frozenset((a, c))


def _right_edge(u) -> frozenset:
    a, b, _ = corners_of(u)
    return frozenset((a, b))


# paths at v1; other corners by rotation


def _paths_v1(n: int, orientation: str, i: int, j: int) -> list:
    if not (1 <= i <= n and 1 <= j <= n):
        raise TraceError(f"states must lie in 1..{n}")
    out = []
    if orientation == CCW:
        start = ("U", n - i, 0, i - 1)
        goal = ("U", n - j, j - 1, 0)

        def moves(u):
            _, a, b, c = u
            if c == 0:
                return []
            d = ("D", a, b, c - 1)
            return [("R", d, ("U", a, b + 1, c - 1)), ("V", d, ("U", a + 1, b, c - 1))]

        start_edge, end_edge = _left_edge(start), _right_edge(goal)
    else:
        start = ("U", j - 1, n - j, 0)
        goal = ("U", i - 1, 0, n - i)

        def moves(u):
            _, a, b, c = u
            if b == 0:
                return []
            d = ("D", a, b - 1, c)
            return [("L", d, ("U", a, b - 1, c + 1)), ("V", d, ("U", a + 1, b - 1, c))]

        start_edge, end_edge = _right_edge(start), _left_edge(goal)

    def walk(u, nodes, steps):
        if u == goal:
            out.append(CompatiblePath(tuple(nodes), tuple(steps), start_edge, end_edge))
            return
        for tag, d, nu in moves(u):
            if nu[1] + nu[2] + nu[3] == n - 1 and min(nu[1:]) >= 0:
                walk(nu, nodes + [d, nu], steps + [tag])

    walk(start, [start], [])
    return out


def _rotate_edge(e: frozenset, times: int) -> frozenset:
    return frozenset(_rot(p, times) for p in e)


def _rot(p: tuple, times: int) -> tuple:
    for _ in range(times % 3):
        p = rotate(p)
    return p


def _rot_tri(t, times: int):
    cs = tuple(_rot(p, times) for p in corners_of(t))
    kind = t[0]
    low = tuple(min(p[a] for p in cs) for a in range(3))
    return (kind,) + low


def compatible_paths(n: int, arc: StatedCornerArc) -> list:
    """All paths compatible with the arc, in lexicographic step order."""
    base = _paths_v1(n, arc.orientation, arc.i, arc.j)
    r = arc.corner - 1
    if r:
        base = [
            CompatiblePath(
                tuple(_rot_tri(t, r) for t in p.nodes),
                p.steps,
                _rotate_edge(p.start_edge, r),
                _rotate_edge(p.end_edge, r),
            )
            for p in base
        ]
    return sorted(base, key=lambda p: p.steps)


def _unit_edges(n: int):
    pts = [(i, j, n - i - j) for i in range(n + 1) for j in range(n + 1 - i)]
    ptset = set(pts)
    adj = {p: [] for p in pts}
    for p in pts:
        for d in ((1, -1, 0), (0, 1, -1), (-1, 0, 1)):
            w = (p[0] + d[0], p[1] + d[1], p[2] + d[2])
            if w in ptset:
                adj[p].append(w)
                adj[w].append(p)
    return adj


@lru_cache(maxsize=None)
def _adjacency(n: int):
    return _unit_edges(n)


def region_left_of(n: int, path: CompatiblePath, arc: StatedCornerArc) -> set:
    """Lattice points (corners included) on the left of the directed path."""
    cut = set(path.crossed_edges())
    adj = _adjacency(n)
    corner = [(n, 0, 0), (0, n, 0), (0, 0, n)][arc.corner - 1]
    seen = {corner}
    stack = [corner]
    while stack:
        p = stack.pop()
        for w in adj[p]:
            if w not in seen and frozenset((p, w)) not in cut:
                seen.add(w)
                stack.append(w)
    if arc.orientation == CCW:
        return seen
    return set(adj) - seen


def path_exponent(n: int, path: CompatiblePath, arc: StatedCornerArc) -> dict:
    """``k_p`` over the non-corner points of the triangle."""
    left = region_left_of(n, path, arc)
    r = arc.corner - 1
    out = {}
    for v in triangle_points(n):
        w = _rot(v, -r)  # coordinates seen from v1
        kp = (n if v in left else 0) - (w[0] if arc.orientation == CCW else w[1] + w[2])
        out[v] = kp
    for c in ((n, 0, 0), (0, n, 0), (0, 0, n)):
        w = _rot(c, -r)
        val = (n if c in left else 0) - (w[0] if arc.orientation == CCW else w[1] + w[2])
        if val:
            raise TraceError(f"path exponent does not vanish at corner {c}")
    return out


@lru_cache(maxsize=None)
def triangle_presentation(n: int) -> TorusPresentation:
    tm = triangle_matrices(n)
    return TorusPresentation(tm.V, [[tm.Q[u, v] for v in tm.V] for u in tm.V])


@lru_cache(maxsize=None)
def trace_corner(n: int, arc: StatedCornerArc) -> TorusElement:
    """Sum of ``x^(k_p)`` over compatible paths."""
    pres = triangle_presentation(n)
    total = {}
    for p in compatible_paths(n, arc):
        k = pres.exponent(path_exponent(n, p, arc))
        total[k] = total.get(k, LaurentScalar()) + LaurentScalar.from_int(1)
    return TorusElement(pres, total)


def transport_matrix(n: int, m: int, orientation: str = CCW) -> QMatrix:
    """``(M_m)_ij`` traces C(v_m)_ij; ``(Mbar_m)_ij`` traces Cbar(v_m)_ji."""
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if orientation == CCW:
                arc = StatedCornerArc(m, CCW, i, j)
            else:
                arc = StatedCornerArc(m, CW, j, i)
            row.append(trace_corner(n, arc))
        rows.append(row)
    return QMatrix(rows, n)


def antidiagonal_C(n: int) -> QMatrix:
    pres = triangle_presentation(n)
    c = constants(n)
    rows = [
        [pres.monomial((0,) * pres.dim, c.c_(j)) if i + j == n + 1 else pres.zero() for j in range(1, n + 1)]
        for i in range(1, n + 1)
    ]
    return QMatrix(rows, n)


def transport_report(n: int) -> Report:
    rep = Report()
    for m in (1, 2, 3):
        for o in ORIENTATIONS:
            M = transport_matrix(n, m, o)
            name = f"M{m}" if o == CCW else f"Mbar{m}"
            rep.add(f"{name} is q-quantum", is_q_quantum(M).ok)
            rep.add(f"{name} row/column det agree", qdet(M) == qdet(M, by="cols"))
    M1, M3 = transport_matrix(n, 1), transport_matrix(n, 3)
    Mb2 = transport_matrix(n, 2, CW)
    rep.add("Mbar2 = M3 C M1", (M3 @ antidiagonal_C(n) @ M1) == Mb2)
    rep.extend(exchange_relation_check(n))
    return rep


def exchange_relation_check(n: int, R: dict | None = None) -> Report:
    """``(M1)_ij (Mbar2)_kl = sum R^{j'l'}_{jl} (Mbar2)_kl' (M1)_ij'`` for all indices."""
    R = r_matrix(n) if R is None else R
    M1 = transport_matrix(n, 1)
    Mb2 = transport_matrix(n, 2, CW)
    pres = M1.pres
    rng = range(1, n + 1)
    bad = []
    for i in rng:
        for j in rng:
            for k in rng:
                for l in rng:
                    lhs = M1[i, j] * Mb2[k, l]
                    rhs = pres.zero()
                    for jp in rng:
                        for lp in rng:
                            coeff = R.get((jp, lp, j, l))
                            if coeff:
                                rhs = rhs + (Mb2[k, lp] * M1[i, jp]) * coeff
                    if lhs != rhs:
                        bad.append((i, j, k, l))
    rep = Report()
    rep.add("exchange relation", not bad, f"{len(bad)} failing quadruples, first {bad[:3]}" if bad else "")
    return rep


# frame elements g_v


def _triangle_K_row(n: int, v) -> dict:
    tm = triangle_matrices(n)
    return {u: tm.K[v, u] for u in tm.V}


def g_minor_factors(n: int, v) -> tuple:
    """The minors ``M_1(i,k)`` (of Mbar_1) and ``M_2(j)`` (principal, of M_2) whose
    Weyl product traces ``g_v``."""
    i, j, k = v
    pres = triangle_presentation(n)
    Mb1 = transport_matrix(n, 1, CW)
    M2 = transport_matrix(n, 2, CCW)
    m1 = qminor(Mb1, range(i + 1, i + k + 1), range(n + 1 - k, n + 1)) if k else pres.one()
    m2 = qminor(M2, range(n + 1 - j, n + 1), range(n + 1 - j, n + 1)) if j else pres.one()
    return m1, m2


def trace_g_triangle(n: int, v, cross_check: bool = True) -> TorusElement:
    pres = triangle_presentation(n)
    out = pres.monomial(_triangle_K_row(n, v))
    if cross_check:
        m1, m2 = g_minor_factors(n, v)
        if not (m1.is_monomial() and m2.is_monomial()):
            raise TraceError(f"minor factors of g_{v} are not monomials")
        if weyl_product(m1, m2) != out:
            raise TraceError(f"minor decomposition of g_{v} disagrees with K")
    return out


def trace_g(S, n: int, v, reduced: bool = True) -> TorusElement:
    """``x^(K(v,.))`` in the reduced or extended X-torus of S."""
    if S is None:
        return trace_g_triangle(n, v)
    ctx = surface_context(S, n)
    vid = getattr(v, "id", v)
    if reduced:
        if vid not in ctx.reduced_pres.pos:
            raise TraceError(f"{vid} is not a reduced small vertex")
        K = ctx.M.Kbar
        return ctx.reduced_pres.monomial({u: K[vid, u] for u in K.cols})
    if vid not in set(ctx.M.V_prime):
        raise TraceError(f"{vid} is not in the extended A-vertex set")
    K = ctx.M.K
    return ctx.extended_pres.monomial({u: K[vid, u] for u in K.cols})


# attached-triangle monoid and the extended counit


def _balanced_triangle(n: int, k: dict) -> bool:
    a = -k.get((n - 1, 0, 1), 0)
    b = k.get((n - 1, 1, 0), 0) + a
    return all((val - a * p[0] - b * p[1]) % n == 0 for p, val in k.items())


class AttachMonoid:
    """B and its subgroup Bbar inside the balanced lattice of one triangle."""

    def __init__(self, n: int):
        self.n = n
        self.points = triangle_points(n)

    def _full(self, k) -> dict:
        if isinstance(k, dict):
            return {p: k.get(p, 0) for p in self.points}
        return dict(zip(self.points, k))

    def _check(self, k: dict, strict: bool) -> bool:
        if not _balanced_triangle(self.n, k):
            return False
        if any(val for p, val in k.items() if p[1] == 0):
            return False
        for p, val in k.items():
            for p2, val2 in k.items():
                if p2[1] == p[1] and p2[2] >= p[2]:
                    if val2 > val or (strict and val2 != val):
                        return False
        return True

    def in_B(self, k) -> bool:
        return self._check(self._full(k), strict=False)

    def in_Bbar(self, k) -> bool:
        return self._check(self._full(k), strict=True)

    def b(self, v) -> dict:
        """Generator ``b_ijk``: n on the points with the same j and k' >= k."""
        _, j, k = v
        return {p: (self.n if p[1] == j and p[2] >= k else 0) for p in self.points}

    def k2(self) -> dict:
        return {p: p[1] for p in self.points}

    def generators(self) -> tuple:
        """(group generators of Bbar, monoid generators of the complement)."""
        n = self.n
        bbar = [self.k2()] + [self.b((n - j, j, 0)) for j in range(2, n)]
        extra = [
            {p: -x for p, x in self.b(v).items()}
            for v in self.points
            if v[1] != 0 and v[2] != 0
        ]
        return bbar, extra


def epsilon_X(n: int, e: TorusElement) -> LaurentScalar:
    mono = AttachMonoid(n)
    total = LaurentScalar()
    for k, c in e.terms():
        kd = dict(zip(e.pres.index, k))
        if not mono.in_B(kd):
            raise TraceError(f"exponent {e.pres.exponent_dict(k)} lies outside B")
        if mono.in_Bbar(kd):
            total = total + c
    return total


# surfaces


@dataclass
class SurfaceContext:
    S: object
    n: int
    M: object
    ext: object
    reduced_pres: TorusPresentation
    extended_pres: TorusPresentation
    ext_all_pres: TorusPresentation


_CONTEXTS: dict = {}


def surface_context(S, n: int) -> SurfaceContext:
    from .structmat import surface_matrices

    key = (json.dumps(S.to_json(), sort_keys=True), n)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        M = surface_matrices(S, n)
        red = TorusPresentation(M.V_reduced, M.Qbar.rows_list())
        ext = TorusPresentation(M.V, M.Q.rows_list())
        allp = TorusPresentation(M.ext_reduced.labels, M.ext_reduced.Q.rows_list())
        ctx = SurfaceContext(S, n, M, M.extended_surface, red, ext, allp)
        _CONTEXTS[key] = ctx
    return ctx


@dataclass(frozen=True)
class SimpleArcSpec:
    """Passes ``(face, entry_slot, exit_slot)`` in arc order, with the states
    at the start (first entry) and at the end (last exit)."""

    passes: tuple
    start_state: int
    end_state: int

    @classmethod
    def from_json(cls, data: dict) -> "SimpleArcSpec":
        try:
            passes = tuple((str(f), int(a), int(b)) for f, a, b in data["passes"])
            s, t = int(data["start_state"]), int(data["end_state"])
        except (KeyError, TypeError, ValueError) as exc:
            raise TraceError(f"malformed arc: {exc}") from exc
        orient = data.get("orientation", "fwd")
        if orient not in ("fwd", "rev"):
            raise TraceError(f"orientation must be 'fwd' or 'rev', got {orient!r}")
        arc = cls(passes, s, t)
        return arc.reversed() if orient == "rev" else arc

    def to_json(self) -> dict:
        return {
            "passes": [list(p) for p in self.passes],
            "start_state": self.start_state,
            "end_state": self.end_state,
            "orientation": "fwd",
        }

    def reversed(self) -> "SimpleArcSpec":
        return SimpleArcSpec(
            tuple((f, b, a) for f, a, b in reversed(self.passes)), self.end_state, self.start_state
        )

    @property
    def start_edge(self) -> tuple:
        return (self.passes[0][0], self.passes[0][1])

    @property
    def end_edge(self) -> tuple:
        return (self.passes[-1][0], self.passes[-1][2])


def validate_arc(S, n: int, arc: SimpleArcSpec) -> None:
    if not arc.passes:
        raise TraceError("arc has no passes")
    for s in (arc.start_state, arc.end_state):
        if not 1 <= s <= n:
            raise TraceError(f"state {s} outside 1..{n}")
    used = set()
    for idx, (f, a, b) in enumerate(arc.passes):
        if f not in S.faces:
            raise TraceError(f"unknown face {f!r}")
        if a not in (1, 2, 3) or b not in (1, 2, 3) or a == b:
            raise TraceError(f"pass {idx} must enter and leave through different slots")
        for slot in (a, b):
            if (f, slot) in used:
                raise TraceError(f"arc is not simple: slot {slot} of {f!r} is crossed twice")
            used.add((f, slot))
        if idx + 1 < len(arc.passes):
            nf, na, _ = arc.passes[idx + 1]
            if S.partner(f, b) != (nf, na):
                raise TraceError(f"passes {idx} and {idx + 1} do not share a glued edge")
    if S.partner(*arc.start_edge) is not None:
        raise TraceError("the arc must start on a boundary edge")
    if S.partner(*arc.end_edge) is not None:
        raise TraceError("the arc must end on a boundary edge")


def pass_corner_arc(a: int, b: int, s_in: int, s_out: int) -> StatedCornerArc:
    """The stated corner arc traced by a pass entering slot a and leaving slot b."""
    if b == a % 3 + 1:
        return StatedCornerArc(b, CCW, s_in, s_out)
    return StatedCornerArc(a, CW, s_out, s_in)


def _fold_terms(S, n: int, pres: TorusPresentation, per_face: list) -> TorusElement:
    """Combine per-face elements (distinct faces) into the glued torus,
    asserting the matching condition on shared vertices."""
    look = S.vertex_lookup(n)
    pts = triangle_points(n)
    visited = {f for f, _ in per_face}
    out: dict = {}

    def rec(idx, acc: dict, coeff):
        if idx == len(per_face):
            for f in S.faces:
                if f in visited:
                    continue
                for p in pts:
                    vid = look[(f, p)].id
                    if acc.get(vid, 0):
                        raise TraceError(f"matching condition fails at {vid}")
            k = pres.exponent({v: e for v, e in acc.items() if e})
            out[k] = out.get(k, LaurentScalar()) + coeff
            return
        f, elem = per_face[idx]
        for k, c in elem.terms():
            nxt_acc = dict(acc)
            ok = True
            for p, e in zip(elem.pres.index, k):
                vid = look[(f, p)].id
                if vid in nxt_acc and nxt_acc[vid] != e:
                    ok = False
                    break
                nxt_acc[vid] = e
            if not ok:
                raise TraceError(f"matching condition fails in face {f!r}")
            rec(idx + 1, nxt_acc, coeff * c)

    rec(0, {}, LaurentScalar.from_int(1))
    return TorusElement(pres, out)


def _trace_passes(S, n: int, passes, s0: int, s1: int, pres: TorusPresentation) -> TorusElement:
    from itertools import product

    m = len(passes)
    total = pres.zero()
    for inner in product(range(1, n + 1), repeat=m - 1):
        states = (s0,) + inner + (s1,)
        per_face = []
        dead = False
        for idx, (f, a, b) in enumerate(passes):
            elem = trace_corner(n, pass_corner_arc(a, b, states[idx], states[idx + 1]))
            if elem.is_zero():
                dead = True
                break
            per_face.append((f, elem))
        if dead:
            continue
        total = total + _fold_terms(S, n, pres, per_face)
    return total


def extended_passes(S, arc: SimpleArcSpec) -> tuple:
    """Prepend and append the attached-triangle passes of the embedding."""
    from .surface import attached_name

    first = (attached_name(*arc.start_edge), 2, 1)
    last = (attached_name(*arc.end_edge), 1, 2)
    return (first,) + tuple(arc.passes) + (last,)


def trace_arc(S, n: int, arc: SimpleArcSpec, extended: bool = False) -> TorusElement:
    validate_arc(S, n, arc)
    ctx = surface_context(S, n)
    if not extended:
        return _trace_passes(S, n, arc.passes, arc.start_state, arc.end_state, ctx.reduced_pres)
    full = _trace_passes(
        ctx.ext, n, extended_passes(S, arc), arc.start_state, arc.end_state, ctx.ext_all_pres
    )
    keep = set(ctx.M.V)

    def to_V(k):
        d = full.pres.exponent_dict(k)
        stray = [v for v in d if v not in keep]
        if stray:
            raise TraceError(f"extended trace has exponents off V at {stray[:3]}")
        return ctx.extended_pres.exponent(d)

    return full.map_exponents(ctx.extended_pres, to_V)


# projection to the reduced torus


def _attached_pullback(ctx: SurfaceContext, k: dict, face) -> dict:
    look = ctx.ext.vertex_lookup(ctx.n)
    return {p: k.get(look[(face, p)].id, 0) for p in triangle_points(ctx.n)}


def projection_pr(S, n: int, e: TorusElement) -> TorusElement:
    ctx = surface_context(S, n)
    if e.pres != ctx.extended_pres:
        raise TraceError("argument is not in the extended X-torus")
    mono = AttachMonoid(n)
    red = ctx.reduced_pres
    out: dict = {}
    for k, c in e.terms():
        kd = e.pres.exponent_dict(k)
        keep = True
        for face in ctx.ext.attached:
            pb = _attached_pullback(ctx, kd, face)
            if not mono.in_B(pb):
                raise TraceError(f"exponent outside B on attached face {face!r}")
            keep = keep and mono.in_Bbar(pb)
        if keep:
            rk = red.exponent({v: x for v, x in kd.items() if v in red.pos})
            out[rk] = out.get(rk, LaurentScalar()) + c
    return TorusElement(red, out)


# boundary degrees


def boundary_degree_prediction(S, n: int, arc: SimpleArcSpec, extended: bool = False) -> dict:
    """Predicted exponent ``n <d_e(arc), varpi_i>`` at every boundary small vertex."""
    from .scalars import WeightVector, weight_pairing
    from .surface import attached_name, slot_point

    ctx = surface_context(S, n)
    surf = ctx.ext if extended else S
    look = surf.vertex_lookup(n)
    degs: dict = {}
    for f, a in S.boundary_slots():
        edge = (attached_name(f, a), 2) if extended else (f, a)
        d = WeightVector.zero(n)
        if (f, a) == arc.start_edge:
            d = d - WeightVector.basis(n, arc.start_state)
        if (f, a) == arc.end_edge:
            d = d + WeightVector.basis(n, n + 1 - arc.end_state)
        for i in range(1, n):
            vid = look[(edge[0], slot_point(n, edge[1], i))].id
            val = n * weight_pairing(n, d, WeightVector.fundamental(n, i))
            if val.denominator != 1:
                raise TraceError("non-integral boundary degree")
            degs[vid] = int(val)
    return degs


# cutting


class CutMap:
    """``x_v -> [x_v' x_v'']_Weyl`` from the torus of S to that of S cut along c."""

    def __init__(self, S, n: int, edge: tuple):
        from .surface import TriangulatedSurface

        f, a = edge
        other = S.partner(f, a)
        if other is None:
            raise TraceError(f"{edge} is not an interior edge")
        gl = frozenset(g for g in S.gluings if g != frozenset(((f, a), other)))
        self.S, self.n = S, n
        self.cut = TriangulatedSurface(S.faces, gl)
        self.source = TorusPresentation(*_reduced_q(S, n))
        self.target = TorusPresentation(*_reduced_q(self.cut, n))
        look_s = S.vertex_lookup(n)
        self._img = {}
        for v in self.cut.small_vertices(n):
            f0, p0 = v.reps[0]
            self._img[v.id] = look_s[(f0, p0)].id

    def image_exponent(self, k: tuple) -> tuple:
        d = dict(zip(self.source.index, k))
        return self.target.exponent({w: d[v] for w, v in self._img.items()})

    def __call__(self, e: TorusElement) -> TorusElement:
        return e.map_exponents(self.target, self.image_exponent)

    def in_image(self, k: tuple) -> bool:
        groups: dict = {}
        for w, x in zip(self.target.index, k):
            groups.setdefault(self._img[w], set()).add(x)
        return all(len(g) == 1 for g in groups.values())


def _reduced_q(S, n: int):
    from .structmat import reduced_matrices

    red = reduced_matrices(S, n, with_PK=False)
    return red.labels, red.Q.rows_list()


def cut_map(S, n: int, edge: tuple) -> CutMap:
    return CutMap(S, n, edge)


# A-version


def trace_A(S, n: int, arc_or_vertex) -> TorusElement:
    """``psi^-1`` of the reduced X-trace of an arc, or ``a_v`` for a vertex."""
    from .structmat import Transition

    ctx = surface_context(S, n)
    T = Transition(S, n, reduced=True, matrices=ctx.M)
    if isinstance(arc_or_vertex, SimpleArcSpec):
        return T.inverse(trace_arc(S, n, arc_or_vertex))
    return T.inverse(trace_g(S, n, arc_or_vertex, reduced=True))
