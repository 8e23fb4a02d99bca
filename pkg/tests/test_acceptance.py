"""Acceptance harness.

Each criterion is a function returning ``(ok, detail)``; results are cached
so the pytest tests, the terminal summary and ``python tests/test_acceptance.py``
all report the same evaluation. Deliberately corrupted inputs live in
``NEGATIVE_CONTROLS`` and are gathered by criterion 10.
"""

from __future__ import annotations

import os
import random
import sys
import time
from collections import Counter
from itertools import product
from math import comb

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from oracles import arc_corpus, corner_trace_oracle, dfs_paths  # noqa: E402
from slqtrace.qmatrix import QMatrix, is_q_quantum  # noqa: E402
from slqtrace.qtorus import INHOMOGENEOUS, commutation_exponent, degree_in  # noqa: E402
from slqtrace.qtrace import (  # noqa: E402
    CCW,
    CW,
    AttachMonoid,
    SimpleArcSpec,
    StatedCornerArc,
    TraceError,
    epsilon_X,
    exchange_relation_check,
    boundary_degree_prediction,
    projection_pr,
    trace_arc,
    trace_corner,
    trace_g,
    trace_g_triangle,
    transport_matrix,
    transport_report,
    triangle_presentation,
)
from slqtrace.scalars import LaurentScalar  # noqa: E402
from slqtrace.structmat import (  # noqa: E402
    Transition,
    balanced,
    surface_matrices,
    triangle_matrices,
    verify_identities,
    verify_square,
)
from slqtrace.surface import canned, vertex_sets  # noqa: E402

SURFACES = ("quadrilateral", "pentagon", "annulus")
ALL_SURFACES = ("triangle",) + SURFACES

TITLES = {
    1: "matrix identities on triangle and glued surfaces",
    2: "vertex-set sizes",
    3: "transport matrices: q-quantum, product and exchange relations",
    4: "frame elements g_v and their commutation",
    5: "counit on corner arcs, multiplicativity on B",
    6: "three balance tests agree, psi round trip",
    7: "bad arcs vanish, traces match the DFS path oracle",
    8: "lifting square pr(extended) = reduced",
    9: "boundary homogeneity of arc traces",
    10: "every negative control is rejected",
}

RESULTS: dict = {}
NEGATIVE_CONTROLS: dict = {}


def _first(items, limit=3):
    items = list(items)
    return f"{len(items)} failures, first {items[:limit]}"


def _stated(S, n):
    for passes in arc_corpus(S):
        for s, t in product(range(1, n + 1), repeat=2):
            yield SimpleArcSpec(passes, s, t)


# 1


def criterion_1():
    start = time.perf_counter()
    bad = []
    checks = 0
    for n in (2, 3, 4):
        rep = verify_identities(triangle_matrices(n))
        checks += len(rep.checks)
        bad += [(f"triangle n={n}", c.name) for c in rep.failures()]
    for name in SURFACES:
        for n in (2, 3):
            rep = verify_identities(surface_matrices(canned(name), n))
            checks += len(rep.checks)
            bad += [(f"{name} n={n}", c.name) for c in rep.failures()]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    return ok, f"{checks} checks in {elapsed:.2f}s" + (f"; {_first(bad)}" if bad else "")


def negative_1():
    tm = triangle_matrices(3)
    K = tm.K.copy()
    K[tm.V[2], tm.V[0]] = K[tm.V[2], tm.V[0]] + 1
    return not verify_square(3, tm.Q, tm.P, K, tm.H, tm.interior()).ok


# 2


def _count_mismatches(sets_for):
    bad = []
    for name in ALL_SURFACES:
        S = canned(name)
        nb, chi = S.num_boundary_edges(), S.euler_characteristic()
        for n in (2, 3, 4):
            x_set, reduced = sets_for(S, n)
            want = (n * n - 1) * (nb - chi)
            if len(x_set) != want or len(reduced) != want - comb(n, 2) * nb:
                bad.append((name, n, len(x_set), len(reduced)))
    return bad


def criterion_2():
    def real(S, n):
        vs = vertex_sets(S, n)
        return vs.x_set, vs.reduced

    bad = _count_mismatches(real)
    return not bad, f"{len(ALL_SURFACES) * 3} (surface, n) cases" + (f"; {_first(bad)}" if bad else "")


def negative_2():
    def dropped(S, n):
        vs = vertex_sets(S, n)
        return vs.x_set[1:], vs.reduced

    return len(_count_mismatches(dropped)) == len(ALL_SURFACES) * 3


# 3


def criterion_3():
    bad = []
    times = {}
    for n in (2, 3):
        start = time.perf_counter()
        rep = transport_report(n)
        times[n] = time.perf_counter() - start
        bad += [(n, c.name) for c in rep.failures()]
    ok = not bad and times[3] < 60
    detail = f"n=2 {times[2]:.2f}s, n=3 {times[3]:.2f}s"
    return ok, detail + (f"; {_first(bad)}" if bad else "")


def negative_3():
    one = LaurentScalar.from_int(1)
    identity_R = {(i, j, i, j): one for i in (1, 2) for j in (1, 2)}
    exchange_rejected = not exchange_relation_check(2, identity_R).ok
    M = transport_matrix(2, 1)
    rows = [list(r) for r in M.entries]
    rows[0][0], rows[1][1] = rows[1][1], rows[0][0]
    swap_rejected = not is_q_quantum(QMatrix(rows, M.n, M.q_sign)).ok
    return exchange_rejected and swap_rejected


# 4


def _frame_check(n, P_override=None):
    S = canned("triangle")
    M = surface_matrices(S, n)
    Kbar, Pbar = M.Kbar, P_override if P_override is not None else M.Pbar
    labels = list(Kbar.rows)
    gs = {}
    bad = []
    for v in labels:
        g = trace_g(S, n, v)
        gs[v] = g
        want = {u: Kbar[v, u] for u in labels if Kbar[v, u]}
        if not g.is_normalized_monomial() or g.pres.exponent_dict(g.monomial_exponent()) != want:
            bad.append(("row", v))
        p = tuple(int(x) for x in v.split(":")[1].split(","))
        try:
            trace_g_triangle(n, p, cross_check=True)
        except TraceError:
            bad.append(("minors", v))
    for u in labels:
        for v in labels:
            if commutation_exponent(gs[u], gs[v]) != 2 * Pbar[u, v]:
                bad.append(("commute", u, v))
    return bad


def criterion_4():
    bad = []
    for n in (2, 3, 4):
        bad += [(n,) + b for b in _frame_check(n)]
    return not bad, "n=2,3,4 rows, minor cross-check, commutation" + (f"; {_first(bad)}" if bad else "")


def negative_4():
    n = 3
    M = surface_matrices(canned("triangle"), n)
    P = M.Pbar.copy()
    u, v = P.rows[0], P.rows[1]
    P[u, v] = P[u, v] + 1
    P[v, u] = P[v, u] - 1
    wrong_P = bool(_frame_check(n, P))
    S = canned("triangle")
    g = trace_g(S, n, u)
    shifted = g.pres.monomial({w: M.Kbar[v, w] for w in M.Kbar.cols})
    wrong_row = g != shifted
    return wrong_P and wrong_row


# 5


def _random_B(mono, rng):
    bbar, extra = mono.generators()
    k = {p: 0 for p in mono.points}
    for g in bbar:
        c = rng.randint(-2, 2)
        for p, x in g.items():
            k[p] += c * x
    for g in extra:
        c = rng.choice((0, 0, 0, 1, 2))
        for p, x in g.items():
            k[p] += c * x
    return k


def criterion_5():
    bad = []
    for n in (2, 3, 4):
        for s in range(1, n + 1):
            for t in range(1, s + 1):
                for o in (CCW, CW):
                    val = epsilon_X(n, trace_corner(n, StatedCornerArc(2, o, s, t)))
                    if val != LaurentScalar.from_int(1 if s == t else 0):
                        bad.append(("delta", n, o, s, t))
    rng = random.Random(2024)
    pairs = 0
    hits = Counter()
    for n in (2, 3, 4):
        mono = AttachMonoid(n)
        pres = triangle_presentation(n)
        for _ in range(200 if n == 3 else 100):
            a, b = _random_B(mono, rng), _random_B(mono, rng)
            xa, xb = pres.monomial(a), pres.monomial(b)
            lhs = epsilon_X(n, xa * xb)
            rhs = epsilon_X(n, xa) * epsilon_X(n, xb)
            hits[lhs.is_zero()] += 1
            pairs += 1
            if lhs != rhs:
                bad.append(("mult", n))
    ok = not bad and hits[True] > 0 and hits[False] > 0
    detail = f"delta_st at n=2,3,4; {pairs} random pairs ({hits[False]} with value 1)"
    return ok, detail + (f"; {_first(bad)}" if bad else "")


def negative_5():
    n = 3
    mono = AttachMonoid(n)
    pres = triangle_presentation(n)
    try:
        epsilon_X(n, pres.monomial(mono.b((1, 1, 1))))
    except TraceError:
        return not mono.in_B(mono.b((1, 1, 1)))
    return False


# 6


def _balance_vectors(B, rng, count):
    rows = B.basis()
    out = []
    for t in range(count):
        if t % 2:
            out.append([rng.randint(-4, 4) for _ in B.labels])
        else:
            vec = [0] * len(B.labels)
            for r in rows:
                c = rng.randint(-2, 2)
                vec = [a + c * b for a, b in zip(vec, r)]
            out.append(vec)
    return out


def criterion_6():
    rng = random.Random(6)
    bad = []
    total = 0
    outcomes = Counter()
    for name in ALL_SURFACES:
        for n in (2, 3):
            B = balanced(canned(name), n)
            for vec in _balance_vectors(B, rng, 100):
                verdict = (B.is_balanced(vec), B.h_test(vec), B.in_row_span(vec))
                total += 1
                outcomes[verdict[0]] += 1
                if len(set(verdict)) != 1:
                    bad.append((name, n, verdict))
            T = Transition(canned(name), n)
            for _ in range(20):
                a = T.a_pres.monomial([rng.randint(-3, 3) for _ in range(T.a_pres.dim)])
                if T.inverse(T(a)) != a:
                    bad.append((name, n, "psi"))
    ok = not bad and outcomes[True] and outcomes[False]
    detail = f"{total} vectors ({outcomes[True]} balanced), psi round trip on 160 monomials"
    return bool(ok), detail + (f"; {_first(bad)}" if bad else "")


def negative_6():
    B = balanced(canned("quadrilateral"), 3)
    H = B.H.copy()
    u, v = H.rows[0], H.cols[0]
    H[u, v] = H[u, v] + 1
    B.H = H
    rng = random.Random(0)
    return any(B.is_balanced(vec) != B.h_test(vec) for vec in _balance_vectors(B, rng, 100))


# 7


def _trace_multiset(t):
    out = Counter()
    for k, c in t.terms():
        key = tuple(sorted((p, x) for p, x in t.pres.exponent_dict(k).items() if x))
        out[key] += c.at_one()
    return out


def _corner_arcs(n):
    for m in (1, 2, 3):
        for o in (CCW, CW):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    yield StatedCornerArc(m, o, i, j)


def criterion_7():
    bad = []
    arcs = 0
    for n in (2, 3, 4):
        for arc in _corner_arcs(n):
            arcs += 1
            t = trace_corner(n, arc)
            if arc.bad and not t.is_zero():
                bad.append(("bad arc", n, arc))
            found, _, _ = dfs_paths(n, arc.corner, arc.orientation, arc.i, arc.j)
            if t.specialize_classical() != len(found):
                bad.append(("count", n, arc))
            if _trace_multiset(t) != corner_trace_oracle(n, arc.corner, arc.orientation, arc.i, arc.j):
                bad.append(("exponents", n, arc))
    return not bad, f"{arcs} corner arcs, counts and exponents" + (f"; {_first(bad)}" if bad else "")


def negative_7():
    n = 3
    for arc in _corner_arcs(n):
        loose, _, _ = dfs_paths(n, arc.corner, arc.orientation, arc.i, arc.j, allow_down=True)
        if trace_corner(n, arc).specialize_classical() != len(loose):
            return True
    return False


# 8


def criterion_8():
    bad = []
    counts = Counter()
    for name in ("triangle", "quadrilateral"):
        S = canned(name)
        for n in (2, 3):
            for arc in _stated(S, n):
                red = trace_arc(S, n, arc)
                ext = trace_arc(S, n, arc, extended=True)
                counts[name] += 1
                counts["nonzero"] += not red.is_zero()
                if projection_pr(S, n, ext) != red:
                    bad.append((name, n, arc.to_json()))
    ok = not bad and counts["quadrilateral"] >= 10 and counts["nonzero"] > 0
    detail = f"{counts['triangle']} triangle and {counts['quadrilateral']} quadrilateral stated arcs"
    return ok, detail + (f"; {_first(bad)}" if bad else "")


def negative_8():
    S = canned("quadrilateral")
    n = 3
    passes = arc_corpus(S)[0]
    ext = trace_arc(S, n, SimpleArcSpec(passes, 1, 1), extended=True)
    other = trace_arc(S, n, SimpleArcSpec(passes, 2, 1))
    return projection_pr(S, n, ext) != other


# 9


def _degree_failures(S, n, arc, el, prediction):
    bad = []
    for v, d in prediction.items():
        got = degree_in(el, v)
        if got is INHOMOGENEOUS or (got is not None and got != d):
            bad.append((v, got, d))
    return bad


def criterion_9():
    bad = []
    checked = 0
    for name in ALL_SURFACES:
        S = canned(name)
        for n in (2, 3):
            for arc in _stated(S, n):
                for extended in (False, True):
                    el = trace_arc(S, n, arc, extended=extended)
                    if el.is_zero():
                        continue
                    pred = boundary_degree_prediction(S, n, arc, extended)
                    checked += len(pred)
                    bad += [(name, n, arc.to_json()) + b for b in _degree_failures(S, n, arc, el, pred)]
    return not bad, f"{checked} (arc, boundary vertex) degrees" + (f"; {_first(bad)}" if bad else "")


def negative_9():
    # feed the prediction the states in the wrong order
    S = canned("quadrilateral")
    n = 3
    for arc in _stated(S, n):
        if arc.start_state == arc.end_state:
            continue
        el = trace_arc(S, n, arc)
        if el.is_zero():
            continue
        swapped = SimpleArcSpec(arc.passes, arc.end_state, arc.start_state)
        if _degree_failures(S, n, arc, el, boundary_degree_prediction(S, n, swapped)):
            return True
    return False


# 10

NEGATIVES = {
    1: negative_1,
    2: negative_2,
    3: negative_3,
    4: negative_4,
    5: negative_5,
    6: negative_6,
    7: negative_7,
    8: negative_8,
    9: negative_9,
}


def criterion_10():
    for k, fn in NEGATIVES.items():
        if k not in NEGATIVE_CONTROLS:
            NEGATIVE_CONTROLS[k] = bool(fn())
    missed = [k for k, v in NEGATIVE_CONTROLS.items() if not v]
    if missed:
        return False, f"controls not rejected for criteria {missed}"
    return True, f"{len(NEGATIVE_CONTROLS)} corrupted inputs rejected"


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 11)}


def evaluate(k):
    if k not in RESULTS:
        try:
            RESULTS[k] = CRITERIA[k]()
        except Exception as exc:  # report crashes as failures, not tracebacks
            RESULTS[k] = (False, f"raised {type(exc).__name__}: {exc}")
    return RESULTS[k]


def summary_lines():
    lines = []
    for k in CRITERIA:
        ok, detail = evaluate(k)
        lines.append(f"{'PASS' if ok else 'FAIL'} criterion {k}: {TITLES[k]} ({detail})")
    return lines


@pytest.mark.parametrize("k", list(CRITERIA))
def test_criterion(k):
    ok, detail = evaluate(k)
    assert ok, detail


@pytest.mark.parametrize("k", list(NEGATIVES))
def test_negative_control(k):
    if k not in NEGATIVE_CONTROLS:
        NEGATIVE_CONTROLS[k] = bool(NEGATIVES[k]())
    assert NEGATIVE_CONTROLS[k]


if __name__ == "__main__":
    lines = summary_lines()
    print("\n".join(lines))
    sys.exit(0 if all(line.startswith("PASS") for line in lines) else 1)
