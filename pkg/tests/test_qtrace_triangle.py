from itertools import combinations

import pytest

from oracles import dfs_paths
from slqtrace.qmatrix import r_matrix
from slqtrace.qtorus import commutation_exponent, reflect
from slqtrace.qtrace import (
    CCW,
    CW,
    AttachMonoid,
    StatedCornerArc,
    TraceError,
    antidiagonal_C,
    compatible_paths,
    epsilon_X,
    exchange_relation_check,
    g_minor_factors,
    path_exponent,
    trace_corner,
    trace_g,
    trace_g_triangle,
    transport_matrix,
    transport_report,
    triangle_presentation,
)
from slqtrace.scalars import LaurentScalar
from slqtrace.structmat import balanced, triangle_matrices
from slqtrace.surface import rotate, triangle


def _arcs(n):
    for m in (1, 2, 3):
        for o in (CCW, CW):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    yield StatedCornerArc(m, o, i, j)


def test_arc_validation():
    with pytest.raises(TraceError):
        StatedCornerArc(4, CCW, 1, 1)
    with pytest.raises(TraceError):
        StatedCornerArc(1, "sideways", 1, 1)
    assert StatedCornerArc(1, CCW, 1, 2).bad
    assert not StatedCornerArc(1, CW, 2, 1).bad


@pytest.mark.parametrize("n", [2, 3, 4])
def test_diagonal_arcs_have_one_path(n):
    for arc in _arcs(n):
        if arc.i == arc.j:
            assert len(compatible_paths(n, arc)) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bad_arcs_have_no_paths(n):
    for arc in _arcs(n):
        if arc.bad:
            assert compatible_paths(n, arc) == []
            assert trace_corner(n, arc).is_zero()


def test_n2_path_count_against_search():
    arc = StatedCornerArc(1, CCW, 2, 1)
    found, _, _ = dfs_paths(2, 1, CCW, 2, 1)
    assert len(compatible_paths(2, arc)) == len(found) == 1


def test_path_steps_are_tagged():
    for p in compatible_paths(4, StatedCornerArc(1, CCW, 4, 1)):
        assert set(p.steps) <= {"R", "V"}
    for p in compatible_paths(4, StatedCornerArc(1, CW, 4, 1)):
        assert set(p.steps) <= {"L", "V"}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_path_exponents_are_balanced(n):
    B = balanced(triangle(), n)
    pres = triangle_presentation(n)
    for arc in _arcs(n):
        for p in compatible_paths(n, arc):
            k = pres.exponent(path_exponent(n, p, arc))
            assert B.is_balanced(k)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_diagonal_path_formula_at_v2(n):
    mono = AttachMonoid(n)
    for s in range(1, n + 1):
        arc = StatedCornerArc(2, CCW, s, s)
        (p,) = compatible_paths(n, arc)
        want = {q: -q[1] for q in mono.points}
        for j in range(n + 1 - s, n):
            for q, x in mono.b((n - j, j, 0)).items():
                want[q] += x
        got = path_exponent(n, p, arc)
        assert {q: x for q, x in got.items() if x} == {q: x for q, x in want.items() if x}
        assert trace_corner(n, arc).is_normalized_monomial()


def test_leftmost_clockwise_path_exponent():
    # n = 3, C-bar(v1)_{21}: the path runs left along the bottom row and then
    # up. Crossed edges cut off (0,2,1), (0,1,2), (1,0,2) from the top corner;
    # those get k' = 3, everything to the right of the channel gets k' = 0,
    # and k = k' - (j + k) pointwise.
    n = 3
    arc = StatedCornerArc(1, CW, 2, 1)
    paths = {p.steps: p for p in compatible_paths(n, arc)}
    p = paths[("L", "V")]
    want = {
        (0, 2, 1): 0, (0, 1, 2): 0, (1, 0, 2): 1,
        (1, 2, 0): -2, (1, 1, 1): -2, (2, 1, 0): -1, (2, 0, 1): -1,
    }
    assert path_exponent(n, p, arc) == want


@pytest.mark.parametrize("n", [2, 3, 4])
def test_traces_are_reflection_invariant(n):
    for arc in _arcs(n):
        t = trace_corner(n, arc)
        assert reflect(t) == t


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("orientation", [CCW, CW])
def test_rotation_conjugates_corner_traces(n, orientation):
    pres = triangle_presentation(n)
    for m in (1, 2):
        for i in range(1, n + 1):
            for j in range(1, i + 1):
                a = trace_corner(n, StatedCornerArc(m, orientation, i, j))
                b = trace_corner(n, StatedCornerArc(m + 1, orientation, i, j))
                moved = a.map_exponents(
                    pres, lambda k: {rotate(q): x for q, x in pres.exponent_dict(k).items()}
                )
                assert moved == b


@pytest.mark.parametrize("n", [3, 4])
def test_disjoint_paths_commute(n):
    pres = triangle_presentation(n)
    for o in (CCW, CW):
        for m in (1, 2, 3):
            items = []
            for i in range(1, n + 1):
                for j in range(1, i + 1):
                    arc = StatedCornerArc(m, o, i, j)
                    for p in compatible_paths(n, arc):
                        items.append((set(p.nodes), pres.monomial(path_exponent(n, p, arc))))
            pairs = [(x, y) for (a, x), (b, y) in combinations(items, 2) if not a & b]
            assert pairs
            for x, y in pairs:
                assert x * y == y * x


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_transport_matrices_are_lower_triangular(n, m):
    M = transport_matrix(n, m)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            assert M[i, j].is_zero()
        assert M[i, i].is_normalized_monomial()


@pytest.mark.parametrize("n", [2, 3])
def test_transport_report(n):
    rep = transport_report(n)
    assert rep.ok, rep.to_text()


def test_product_relation_fails_without_the_antidiagonal():
    n = 2
    M1, M3 = transport_matrix(n, 1), transport_matrix(n, 3)
    Mb2 = transport_matrix(n, 2, CW)
    assert M3 @ antidiagonal_C(n) @ M1 == Mb2
    assert M3 @ M1 != Mb2


def test_exchange_relation_needs_the_r_matrix():
    n = 2
    assert exchange_relation_check(n).ok
    one = LaurentScalar.from_int(1)
    identity_R = {(i, j, i, j): one for i in (1, 2) for j in (1, 2)}
    assert not exchange_relation_check(n, identity_R).ok
    assert len(r_matrix(n)) > len(identity_R)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_frame_elements(n):
    tm = triangle_matrices(n)
    pres = triangle_presentation(n)
    for v in tm.V:
        g = trace_g_triangle(n, v)
        assert g.is_normalized_monomial()
        assert g == pres.monomial({u: tm.K[v, u] for u in tm.V})
        m1, m2 = g_minor_factors(n, v)
        assert m1.is_monomial() and m2.is_monomial()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_frame_commutation(n):
    tm = triangle_matrices(n)
    gs = {v: trace_g_triangle(n, v, cross_check=False) for v in tm.V}
    for u, v in combinations(tm.V, 2):
        assert commutation_exponent(gs[u], gs[v]) == 2 * tm.P[u, v]


def test_trace_g_on_the_triangle_surface():
    n = 3
    g = trace_g(triangle(), n, "t:1,1,1")
    tm = triangle_matrices(n)
    row = {f"t:{u[0]},{u[1]},{u[2]}": tm.K[(1, 1, 1), u] for u in tm.V}
    assert g.pres.exponent_dict(g.monomial_exponent()) == {k: x for k, x in row.items() if x}
    with pytest.raises(TraceError):
        trace_g(triangle(), n, "nope")
    assert trace_g(None, n, (1, 1, 1)) == trace_g_triangle(n, (1, 1, 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_counit_on_corner_arcs(n):
    for s in range(1, n + 1):
        for t in range(1, s + 1):
            for o in (CCW, CW):
                val = epsilon_X(n, trace_corner(n, StatedCornerArc(2, o, s, t)))
                assert val == LaurentScalar.from_int(1 if s == t else 0)


def test_counit_basics():
    n = 3
    pres = triangle_presentation(n)
    mono = AttachMonoid(n)
    assert epsilon_X(n, pres.one()) == LaurentScalar.from_int(1)
    bbar, extra = mono.generators()
    for g in bbar:
        assert mono.in_Bbar(g)
        assert epsilon_X(n, pres.monomial(g)) == LaurentScalar.from_int(1)
    for g in extra:
        assert mono.in_B(g) and not mono.in_Bbar(g)
        assert epsilon_X(n, pres.monomial(g)).is_zero()
    with pytest.raises(TraceError):
        epsilon_X(n, pres.monomial({p: p[0] for p in mono.points}))


def test_attach_monoid_rejects_unbalanced_and_increasing():
    n = 3
    mono = AttachMonoid(n)
    assert not mono.in_B({(1, 1, 1): 1})
    # -k2 is in the group part; +b_v grows along k and leaves B
    assert mono.in_Bbar({p: -x for p, x in mono.k2().items()})
    assert not mono.in_B(mono.b((1, 1, 1)))
    assert not mono.in_B({(1, 0, 2): 3})
