"""Triangulated punctured bordered surfaces and their small vertices.

A surface is a list of faces, each with edge slots 1, 2, 3, plus a set of
gluings between slots. Slot ``a`` runs from corner ``a`` to corner ``a+1``
(indices mod 3). In the standard picture ``v1`` is the top corner, ``v2``
the bottom right and ``v3`` the bottom left. Gluings are orientation
reversing.

Small vertices of the n-triangulation are barycentric triples ``(i,j,k)``
with ``i+j+k = n``, corners excluded. Position ``t`` on slot ``a`` (counted
along the positive boundary direction of the face) is the point with
coordinate ``a`` equal to ``t``, coordinate ``a+1`` equal to ``n-t`` and the
remaining coordinate 0. Gluing matches position ``t`` with ``n-t``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

SLOTS = (1, 2, 3)


class SurfaceError(ValueError):
    pass


def nxt(a: int) -> int:
    return a % 3 + 1


def prv(a: int) -> int:
    return (a - 2) % 3 + 1


def triangle_points(n: int) -> list:
    """Non-corner barycentric points in a fixed order (i descending, then j)."""
    pts = []
    for i in range(n, -1, -1):
        for j in range(n - i, -1, -1):
            k = n - i - j
            if max(i, j, k) < n:
                pts.append((i, j, k))
    return pts


def slot_point(n: int, a: int, t: int) -> tuple:
    c = [0, 0, 0]
    c[a - 1] = t
    c[nxt(a) - 1] = n - t
    return tuple(c)


def slot_of(n: int, p: tuple) -> list:
    """Slots containing the point p, with positions: [(slot, t), ...]."""
    out = []
    for a in SLOTS:
        if p[prv(a) - 1] == 0:
            out.append((a, p[a - 1]))
    return out


def rotate(p: tuple) -> tuple:
    """Rotation ``(i,j,k) -> (k,i,j)``, sending v1 to v2 to v3."""
    i, j, k = p
    return (k, i, j)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass(frozen=True)
class SmallVertex:
    """Identification class of small-vertex representatives ``(face, (i,j,k))``."""

    id: str
    reps: tuple

    @property
    def face(self):
        return self.reps[0][0]

    @property
    def coords(self):
        return self.reps[0][1]

    def in_face(self, face) -> list:
        return [p for f, p in self.reps if f == face]


@dataclass(frozen=True)
class VertexSets:
    reduced: tuple  # V-bar of the original surface
    x_set: tuple  # V
    a_set: tuple  # V'
    all_extended: tuple  # V-bar of the extended surface


@dataclass
class TriangulatedSurface:
    faces: tuple
    gluings: frozenset
    attached: dict = field(default_factory=dict)  # attached face -> (face, slot) of the base
    n: int | None = None

    def __post_init__(self):
        self.faces = tuple(self.faces)
        if not self.faces:
            raise SurfaceError("a surface needs at least one face")
        if len(set(self.faces)) != len(self.faces):
            raise SurfaceError("duplicate face identifiers")
        fset = set(self.faces)
        partner: dict = {}
        pairs = []
        for g in self.gluings:
            a, b = tuple(g) if len(g) == 2 else (None, None)
            if a is None:
                raise SurfaceError(f"gluing {g} must join two distinct slots")
            for f, s in (a, b):
                if f not in fset:
                    raise SurfaceError(f"unknown face {f!r} in gluing")
                if s not in SLOTS:
                    raise SurfaceError(f"slot {s!r} is not 1, 2 or 3")
            if a in partner or b in partner:
                raise SurfaceError(f"slot glued twice in {sorted(g)}")
            partner[a] = b
            partner[b] = a
            pairs.append(tuple(sorted((a, b), key=self._slot_key)))
        self.gluings = frozenset(frozenset(p) for p in pairs)
        self._partner = partner
        self._pairs = sorted(pairs, key=lambda p: (self._slot_key(p[0]), self._slot_key(p[1])))
        self._check_not_exceptional()

    def _slot_key(self, fs):
        return (self.faces.index(fs[0]), fs[1])

    # combinatorics

    def partner(self, face, slot):
        return self._partner.get((face, slot))

    def boundary_slots(self) -> list:
        return [(f, a) for f in self.faces for a in SLOTS if (f, a) not in self._partner]

    def interior_edges(self) -> list:
        return list(self._pairs)

    def has_self_gluing(self) -> bool:
        return any(a[0] == b[0] for a, b in self._pairs)

    def is_connected(self) -> bool:
        uf = _UnionFind()
        for f in self.faces:
            uf.add(f)
        for a, b in self._pairs:
            uf.union(a[0], b[0])
        return len({uf.find(f) for f in self.faces}) == 1

    def ideal_vertices(self) -> list:
        """Classes of corners ``(face, m)`` under the gluings."""
        uf = _UnionFind()
        for f in self.faces:
            for m in SLOTS:
                uf.add((f, m))
        for (f, a), (g, b) in self._pairs:
            uf.union((f, a), (g, nxt(b)))
            uf.union((f, nxt(a)), (g, b))
        classes: dict = {}
        for f in self.faces:
            for m in SLOTS:
                classes.setdefault(uf.find((f, m)), []).append((f, m))
        return list(classes.values())

    def interior_punctures(self) -> list:
        bset = set(self.boundary_slots())
        out = []
        for cls in self.ideal_vertices():
            if not any((f, m) in bset or (f, prv(m)) in bset for f, m in cls):
                out.append(cls)
        return out

    def has_interior_puncture(self) -> bool:
        return bool(self.interior_punctures())

    def num_boundary_edges(self) -> int:
        return len(self.boundary_slots())

    def euler_characteristic(self) -> int:
        """Euler characteristic of the punctured bordered surface.

        Boundary ideal points do not change the homotopy type; interior
        punctures each lower it by one.
        """
        F = len(self.faces)
        E = len(self._pairs) + self.num_boundary_edges()
        V = len(self.ideal_vertices())
        return V - E + F - len(self.interior_punctures())

    def boundary_components(self) -> int:
        """Number of boundary circles (cycles of boundary edges)."""
        bslots = self.boundary_slots()
        if not bslots:
            return 0
        corner_class = {}
        for idx, cls in enumerate(self.ideal_vertices()):
            for c in cls:
                corner_class[c] = idx
        uf = _UnionFind()
        for fs in bslots:
            uf.add(fs)
        by_start: dict = {}
        for f, a in bslots:
            by_start.setdefault(corner_class[(f, a)], []).append((f, a))
        for f, a in bslots:
            end = corner_class[(f, nxt(a))]
            for other in by_start.get(end, []):
                uf.union((f, a), other)
        return len({uf.find(fs) for fs in bslots})

    def _check_not_exceptional(self):
        if not self.is_connected():
            return
        chi = self.euler_characteristic()
        nb = self.num_boundary_edges()
        punct = len(self.interior_punctures())
        if nb == 0 and chi >= 1:
            raise SurfaceError("sphere with at most two punctures is not triangulable")
        if nb and self.boundary_components() == 1 and chi == 1 and punct == 0 and nb <= 2:
            raise SurfaceError("monogon and bigon are not triangulable")

    # small vertices

    def small_vertices(self, n: int) -> list:
        if n < 2:
            raise SurfaceError("n must be at least 2")
        uf = _UnionFind()
        for f in self.faces:
            for p in triangle_points(n):
                uf.add((f, p))
        for (f, a), (g, b) in self._pairs:
            for t in range(1, n):
                uf.union((f, slot_point(n, a, t)), (g, slot_point(n, b, n - t)))
        classes: dict = {}
        for f in self.faces:
            for p in triangle_points(n):
                classes.setdefault(uf.find((f, p)), []).append((f, p))
        out = []
        for reps in classes.values():
            f, p = reps[0]
            out.append(SmallVertex(vertex_id(f, p), tuple(reps)))
        return out

    def vertex_lookup(self, n: int) -> dict:
        """Map ``(face, point) -> SmallVertex``."""
        table = {}
        for v in self.small_vertices(n):
            for rep in v.reps:
                table[rep] = v
        return table

    def boundary_vertices(self, n: int) -> dict:
        """Boundary slot -> list of small vertices at positions 1..n-1."""
        look = self.vertex_lookup(n)
        return {
            (f, a): [look[(f, slot_point(n, a, t))] for t in range(1, n)]
            for f, a in self.boundary_slots()
        }

    # serialization

    @classmethod
    def from_json(cls, data) -> "TriangulatedSurface":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "faces" not in data:
            raise SurfaceError("surface JSON needs a 'faces' list")
        faces = [str(f) for f in data["faces"]]
        gl = []
        for g in data.get("gluings", []):
            try:
                a = (str(g["a"][0]), int(g["a"][1]))
                b = (str(g["b"][0]), int(g["b"][1]))
            except (KeyError, IndexError, TypeError, ValueError) as exc:
                raise SurfaceError(f"malformed gluing {g!r}") from exc
            if a == b:
                raise SurfaceError(f"slot {a} glued to itself")
            gl.append(frozenset((a, b)))
        if len(set(gl)) != len(gl):
            raise SurfaceError("duplicate gluing")
        n = data.get("n")
        return cls(tuple(faces), frozenset(gl), n=int(n) if n is not None else None)

    def to_json(self) -> dict:
        out = {
            "faces": list(self.faces),
            "gluings": [{"a": list(a), "b": list(b)} for a, b in self._pairs],
        }
        if self.n is not None:
            out["n"] = self.n
        return out


def vertex_id(face, p: tuple) -> str:
    return f"{face}:{p[0]},{p[1]},{p[2]}"


def small_vertices(S: TriangulatedSurface, n: int) -> list:
    return S.small_vertices(n)


def attached_name(face, slot) -> str:
    return f"{face}+{slot}"


def extend(S: TriangulatedSurface) -> TriangulatedSurface:
    """Attach one triangle along its slot 1 to every boundary edge."""
    if S.attached:
        raise SurfaceError("surface is already extended")
    faces = list(S.faces)
    gl = set(S.gluings)
    attached = {}
    for f, a in S.boundary_slots():
        name = attached_name(f, a)
        if name in S.faces:
            raise SurfaceError(f"face name {name!r} clashes with an attached face")
        faces.append(name)
        gl.add(frozenset(((name, 1), (f, a))))
        attached[name] = (f, a)
    return TriangulatedSurface(tuple(faces), frozenset(gl), attached=attached, n=S.n)


def vertex_sets(S: TriangulatedSurface, n: int) -> VertexSets:
    ext = extend(S)
    allv = ext.small_vertices(n)
    base = set(S.faces)
    reduced = [v for v in allv if any(f in base for f, _ in v.reps)]

    def on_slot(v, slot):
        for f, p in v.reps:
            if f in ext.attached and p[prv(slot) - 1] == 0:
                return True
        return False

    x_set = [v for v in allv if not on_slot(v, 3)]
    a_set = [v for v in allv if not on_slot(v, 2)]
    return VertexSets(tuple(reduced), tuple(x_set), tuple(a_set), tuple(allv))


# canned surfaces


def triangle() -> TriangulatedSurface:
    return TriangulatedSurface(("t",), frozenset())


def polygon(m: int) -> TriangulatedSurface:
    """Fan triangulation of an ideal m-gon (m >= 3) with faces f0..f(m-3).

    Face ``f_t`` has its slot 3 glued to slot 1 of ``f_(t+1)``.
    """
    if m < 3:
        raise SurfaceError("polygons need at least three sides")
    faces = tuple(f"f{t}" for t in range(m - 2))
    gl = frozenset(frozenset(((faces[t], 3), (faces[t + 1], 1))) for t in range(m - 3))
    return TriangulatedSurface(faces, gl)


def quadrilateral() -> TriangulatedSurface:
    return polygon(4)


def pentagon() -> TriangulatedSurface:
    return polygon(5)


def annulus() -> TriangulatedSurface:
    """Two triangles forming an annulus with one ideal point per boundary circle."""
    return TriangulatedSurface(
        ("f0", "f1"),
        frozenset({frozenset((("f0", 1), ("f1", 1))), frozenset((("f0", 2), ("f1", 2)))}),
    )


def canned(name: str) -> TriangulatedSurface:
    table = {
        "triangle": triangle,
        "quadrilateral": quadrilateral,
        "pentagon": pentagon,
        "annulus": annulus,
    }
    if name not in table:
        raise SurfaceError(f"unknown surface {name!r}")
    return table[name]()


def load_surface(spec: str) -> TriangulatedSurface:
    """A canned surface name or a path to a surface JSON file."""
    try:
        return canned(spec)
    except SurfaceError:
        pass
    try:
        with open(spec, encoding="utf-8") as fh:
            return TriangulatedSurface.from_json(json.load(fh))
    except OSError as exc:
        raise SurfaceError(f"cannot read surface file {spec!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SurfaceError(f"surface file {spec!r} is not valid JSON: {exc}") from exc
