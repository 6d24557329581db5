import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kinrange.core import GridParams, linear_point
from kinrange.dominance import (
    DominanceEngine, GlobalStructure, Staircase, dominance_query, g_update, staircase_query,
)
from kinrange.kinetic import build_engine
from kinrange.oracle import OracleSet, oracle_dominators

from conftest import event_groups, m2_points, random_linear, random_piecewise, s6_points


def brute(o, t, qx, qy, sx=1, sy=1):
    return {pid for pid, (x, y) in o.positions(t).items() if sx * x >= sx * qx and sy * y >= sy * qy}


def test_s6_queries(s6):
    e = build_engine(*s6)
    de = DominanceEngine(e, d=2)
    assert dominance_query(de, Fraction(5, 2), Fraction(5, 2)) == {2, 3}
    assert dominance_query(de, 7, 7) == set()
    assert dominance_query(de, 0, 0) == set(range(6))


def test_staircase_examples():
    ds = Staircase([(2, 3, 4), (3, 4, 3)])
    assert staircase_query(ds, Fraction(7, 2), 2) == {3}
    assert staircase_query(Staircase(), 1, 1) == set()
    assert staircase_query(ds, 0, 0) == {2, 3}


@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20)), max_size=30),
       st.integers(0, 21), st.integers(0, 21))
def test_staircase_matches_scan(pts, qx, qy):
    trip = [(i, x, y) for i, (x, y) in enumerate(pts)]
    got, seen = Staircase(trip).query(qx, qy)
    assert got == {i for i, x, y in trip if x >= qx and y >= qy}
    assert seen <= len(trip)


def test_g_after_swap(m2):
    pts, g = m2
    e = build_engine(pts, g)
    de = DominanceEngine(e)
    e.advance_to(5)
    assert de.dominance_query(Fraction(21, 2), 0) == {1}
    kx = e.count_lt(0, Fraction(21, 2))
    ids, _ = de.g.report(kx, 0)
    assert {e.ext[i] for i in ids} == {1}


def test_g_insert_delete_inverse():
    rng = random.Random(5)
    pts = random_linear(rng, 40, 500, 10)
    g = GridParams(500, 10)
    e = build_engine(pts, g)
    gs = GlobalStructure(e.rank[0], e.rank[1], xs=list(e.order[0]))
    before = [sorted(gs.report(kx, ky)[0]) for kx in range(0, 40, 3) for ky in range(0, 40, 3)]
    extra = linear_point(99, 0, 250, 0, 250)
    i = e.insert_point(extra)
    g_update(gs, "insert", i)
    g_update(gs, "delete", i)
    e.delete_point(i)
    after = [sorted(gs.report(kx, ky)[0]) for kx in range(0, 40, 3) for ky in range(0, 40, 3)]
    assert before == after


def test_g_random_swaps():
    rng = random.Random(8)
    U, T = 120, 30
    pts = random_piecewise(rng, 60, U, T, pieces=3)
    g = GridParams(U, T)
    e = build_engine(pts, g)
    gs = GlobalStructure(e.rank[0], e.rank[1], xs=list(e.order[0]))

    class L:
        def on_swap(self, axis, p, q, j):
            g_update(gs, "swap_x" if axis == 0 else "swap_y", p, q)

    e.add_listener(L())
    o = OracleSet(pts, g)
    probes = 0
    for t in range(1, T + 1):
        e.advance_to(t)
        for _ in range(40):
            qx, qy = Fraction(rng.randrange(2 * U), 2), Fraction(rng.randrange(2 * U), 2)
            ids, _ = gs.report(e.count_lt(0, qx), e.count_lt(1, qy))
            assert {e.ext[i] for i in ids} == brute(o, t, qx, qy)
            probes += 1
    assert e.n_swaps >= 1000 and probes >= 1000


@pytest.mark.parametrize("sx,sy", [(1, 1), (-1, 1), (1, -1), (-1, -1)])
def test_reflected_quadrants(sx, sy):
    rng = random.Random(11)
    U, T = 300, 12
    pts = random_linear(rng, 150, U, T)
    g = GridParams(U, T)
    e = build_engine(pts, g)
    de = DominanceEngine(e, sx=sx, sy=sy)
    o = OracleSet(pts, g)
    for t in range(1, T + 1):
        e.advance_to(t)
        for _ in range(30):
            qx, qy = Fraction(rng.randrange(2 * U), 2), Fraction(rng.randrange(2 * U), 2)
            assert de.dominance_query(qx, qy) == brute(o, t, qx, qy, sx, sy)


def test_work_dichotomy():
    """Fast path: candidates <= 2d + k.  Fallback: at least d true dominators."""
    for seed in range(4):
        rng = random.Random(seed)
        U, T = 1 << 16, 10
        n = [64, 256, 512, 512][seed]
        pts = random_linear(rng, n, U, T)
        g = GridParams(U, T)
        e = build_engine(pts, g)
        de = DominanceEngine(e)
        o = OracleSet(pts, g)
        for t in range(1, T + 1):
            e.advance_to(t)
            pos = sorted(o.positions(t).values())
            for _ in range(60):
                x, y = rng.choice(pos)
                qx = x + Fraction(rng.randint(-200, 200), 2)
                qy = y + Fraction(rng.randint(-200, 200), 2)
                got = de.dominance_query(qx, qy)
                path, work, k = de.last
                assert got == brute(o, t, qx, qy)
                if path == "fast":
                    assert work <= 2 * de.d + k
                else:
                    assert oracle_dominators(o, qx, qy, t) >= de.d
        assert de.stats["fast"] > 0


def test_differential_512():
    rng = random.Random(21)
    U, T = 1 << 16, 12
    pts = random_linear(rng, 512, U, T)
    g = GridParams(U, T)
    e = build_engine(pts, g)
    de = DominanceEngine(e)
    o = OracleSet(pts, g)
    for t in range(1, T + 1):
        e.advance_to(t)
        pos = o.positions(t)
        for _ in range(150):
            qx, qy = Fraction(rng.randrange(2 * U), 2), Fraction(rng.randrange(2 * U), 2)
            want = {p for p, (x, y) in pos.items() if x >= qx and y >= qy}
            assert de.dominance_query(qx, qy) == want


def test_special_updates_keep_queries_exact():
    rng = random.Random(4)
    U, T = 4096, 5
    pts = random_linear(rng, 100, U, T, vmax=0)
    g = GridParams(U, T)
    e = build_engine(pts, g)
    de = DominanceEngine(e)
    o = OracleSet(pts, g)
    nid = 1000
    for step in range(200):
        xs = [x for x, _ in o.positions(0).values()]
        if step % 3 == 2 and len(o.points) > 10:
            i = e.order[0][0]
            pid = e.ext[i]
            de.delete(i, low_x=True)
            e.delete_point(i)
            o.remove(pid)
        else:
            p = linear_point(nid, 0, min(xs) - 1 - rng.randrange(3), 0, rng.randrange(U))
            nid += 1
            if p.traj_x.pieces[0].b < 0:
                continue
            i = e.insert_point(p)
            o.add(p)
            de.insert(i, low_x=True)
        assert de.audit(o, 0) == []
        for _ in range(5):
            qx, qy = rng.randrange(U), rng.randrange(U)
            assert de.dominance_query(qx, qy) == brute(o, 0, qx, qy)
