import json
from math import comb

import pytest

from slqtrace.surface import (
    SurfaceError,
    TriangulatedSurface,
    annulus,
    canned,
    extend,
    load_surface,
    polygon,
    quadrilateral,
    slot_of,
    slot_point,
    small_vertices,
    triangle,
    triangle_points,
    vertex_sets,
)

SURFACES = ["triangle", "quadrilateral", "pentagon", "annulus"]


def test_triangle_points_exclude_corners():
    pts = triangle_points(3)
    assert len(pts) == 7
    assert (3, 0, 0) not in pts and (1, 1, 1) in pts


def test_slot_points_round_trip():
    n = 4
    for a in (1, 2, 3):
        for t in range(1, n):
            p = slot_point(n, a, t)
            assert a in [s for s, _ in slot_of(n, p)]


def test_small_vertex_counts():
    assert len(small_vertices(triangle(), 3)) == 7
    assert len(small_vertices(quadrilateral(), 2)) == 5


def test_gluing_identifies_diagonal_vertices():
    S = quadrilateral()
    verts = small_vertices(S, 3)
    shared = [v for v in verts if len(v.reps) == 2]
    assert len(shared) == 2
    assert all({f for f, _ in v.reps} == {"f0", "f1"} for v in shared)


@pytest.mark.parametrize("name", SURFACES)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_vertex_set_sizes(name, n):
    S = canned(name)
    sets = vertex_sets(S, n)
    nb = S.num_boundary_edges()
    assert len(sets.x_set) == (n * n - 1) * (nb - S.euler_characteristic())
    assert len(sets.a_set) == len(sets.x_set)
    assert len(sets.reduced) == len(sets.x_set) - comb(n, 2) * nb


def test_quadrilateral_n3_counts():
    sets = vertex_sets(quadrilateral(), 3)
    assert (len(sets.x_set), len(sets.reduced)) == (24, 12)


def test_topology():
    assert triangle().euler_characteristic() == 1
    assert polygon(6).euler_characteristic() == 1
    A = annulus()
    assert A.euler_characteristic() == 0
    assert A.boundary_components() == 2
    assert A.num_boundary_edges() == 2
    assert not A.has_interior_puncture()


def test_extend_face_counts():
    assert len(extend(triangle()).faces) == 4
    assert len(extend(quadrilateral()).faces) == 6
    E = extend(triangle())
    assert all(E.partner(f, 1) == E.attached[f] for f in E.attached)
    with pytest.raises(SurfaceError):
        extend(E)


def test_closed_surface_extends_to_itself():
    # two faces glued along all three edges: a closed punctured surface
    gl = frozenset(frozenset((("a", s), ("b", s))) for s in (1, 2, 3))
    T = TriangulatedSurface(("a", "b"), gl)
    assert T.num_boundary_edges() == 0
    assert extend(T).faces == T.faces


def test_punctured_bigon_is_accepted():
    # two faces sharing two edges: a bigon with one interior puncture
    gl = frozenset({frozenset((("a", 1), ("b", 1))), frozenset((("a", 2), ("b", 3)))})
    S = TriangulatedSurface(("a", "b"), gl)
    assert S.num_boundary_edges() == 2
    assert len(S.interior_punctures()) == 1
    assert S.euler_characteristic() == 0


def test_self_glued_face_is_flagged():
    S = TriangulatedSurface(("t",), frozenset({frozenset((("t", 1), ("t", 2)))}))
    assert S.has_self_gluing()
    assert S.has_interior_puncture()


def test_bad_json():
    with pytest.raises(SurfaceError):
        TriangulatedSurface.from_json({"gluings": []})
    with pytest.raises(SurfaceError):
        TriangulatedSurface.from_json({"faces": ["a"], "gluings": [{"a": ["a", 1], "b": ["a", 1]}]})
    with pytest.raises(SurfaceError):
        TriangulatedSurface.from_json({"faces": ["a"], "gluings": [{"a": ["a", 4], "b": ["b", 1]}]})
    with pytest.raises(SurfaceError):
        TriangulatedSurface.from_json({"faces": ["a", "b"], "gluings": [{"a": ["a"]}]})
    with pytest.raises(SurfaceError):
        small_vertices(triangle(), 1)


@pytest.mark.parametrize("name", SURFACES)
def test_json_round_trip(name):
    S = canned(name)
    back = TriangulatedSurface.from_json(json.loads(json.dumps(S.to_json())))
    assert back.to_json() == S.to_json()
    assert back.gluings == S.gluings


def test_load_surface_file(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(quadrilateral().to_json()))
    assert load_surface(str(p)).faces == ("f0", "f1")
    with pytest.raises(SurfaceError):
        load_surface(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(SurfaceError):
        load_surface(str(bad))
