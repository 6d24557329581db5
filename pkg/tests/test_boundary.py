import random
from fractions import Fraction

import numpy as np
import pytest

from kinrange.boundary import (
    END, Boundary, Roster, Segment, audit_boundary, build_boundary, default_d,
)
from kinrange.core import GridParams
from kinrange.dominance import DominanceEngine
from kinrange.kinetic import build_engine
from kinrange.oracle import OracleSet

from conftest import event_groups, random_piecewise, s6_points


def static_roster(rng, n):
    xs = rng.sample(range(1000), n)
    ys = rng.sample(range(1000), n)
    rx, ry = [0] * n, [0] * n
    for r, i in enumerate(sorted(range(n), key=xs.__getitem__)):
        rx[i] = r
    for r, i in enumerate(sorted(range(n), key=ys.__getitem__)):
        ry[i] = r
    return Roster(rx, ry, members=range(n))


def antichain_roster(n):
    rx = list(range(n))
    ry = list(range(n - 1, -1, -1))
    return Roster(rx, ry, members=range(n))


def dominators(r, a, c):
    """Members at local x position >= a and local y position >= c."""
    return {p for p in r.X[a:] if r.ly(p) >= c}


def cuts_of(b):
    return [(b.cx(s), None if s.tail else b.cy(s)) for s in b.segs]


def restyle(b, cuts):
    """Replace the staircase by explicit (x cut, y cut) pairs; the last is the tail."""
    r = b.r
    b.segs, b.first_of, b.u_of = [], {}, {}
    for k, (a, c) in enumerate(cuts):
        tail = c is None
        first = None if k == 0 else (r.X[a] if a < len(r.X) else END)
        b._append(Segment(first, None if tail else r.Y[c], dominators(r, a, 0 if tail else c), tail))
    b.epoch += 1


def perturb(rng, cuts, n, times):
    cuts = list(cuts)
    for _ in range(times):
        k = rng.randrange(len(cuts))
        a, c = cuts[k]
        if k > 0:
            lo = cuts[k - 1][0] + 1
            hi = cuts[k + 1][0] - 1 if k + 1 < len(cuts) else n
            if lo <= hi:
                a = rng.randint(lo, hi)
        if c is not None:
            nxt = cuts[k + 1][1] if k + 1 < len(cuts) else None
            lo = nxt + 1 if nxt is not None else 1
            hi = cuts[k - 1][1] - 1 if k > 0 else n - 1
            if lo <= hi:
                c = rng.randint(lo, hi)
        cuts[k] = (a, c)
    return cuts


def left_instance(seed):
    """A clean staircase with one left endpoint at exactly 2d dominators."""
    rng = random.Random(seed)
    d = rng.choice([4, 6, 8])
    n = rng.randint(3 * d, 8 * d)
    r = static_roster(rng, n)
    b = Boundary(r, d)
    if b.empty:
        return None
    restyle(b, perturb(rng, cuts_of(b), n, rng.randint(1, 4)))
    if audit_boundary(b, r.X, r.Y):
        return None
    ks = [k for k, s in enumerate(b.segs) if len(s.dom) == 2 * d]
    return (b, ks[0]) if ks else None


def gap_instance(seed):
    """A staircase whose only defect is one pair spanning exactly d/2 points."""
    rng = random.Random(seed)
    d = rng.choice([4, 6, 8])
    n = rng.randint(3 * d, 10 * d)
    r = static_roster(rng, n)
    b = Boundary(r, d)
    if b.empty or len(b.segs) < 3:
        return None
    cuts = perturb(rng, cuts_of(b), n, rng.randint(0, 3))
    k = rng.randrange(len(cuts) - 2)
    tgt = cuts[k][0] + d // 2
    if not cuts[k + 1][0] < tgt or (k + 3 < len(cuts) and tgt >= cuts[k + 3][0]) or tgt > n:
        return None
    cuts[k + 2] = (tgt, cuts[k + 2][1])
    restyle(b, cuts)
    v = audit_boundary(b, r.X, r.Y)
    if len(v) == 1 and "span" in v[0]:
        return b, k
    return None


def endpoint_problems(b):
    """Audit lines about endpoint dominator counts only."""
    return [m for m in audit_boundary(b, b.r.X, b.r.Y) if "end has" in m or "Dom" in m]


# -- construction ----------------------------------------------------------------

def test_s6_build():
    r = antichain_roster(6)
    b = build_boundary(r, d=2)
    assert not b.empty
    assert audit_boundary(b, r.X, r.Y) == []


def test_small_sets_have_no_boundary():
    r = antichain_roster(3)
    assert build_boundary(r, d=2).empty
    assert build_boundary(antichain_roster(4), d=2).empty
    assert not build_boundary(antichain_roster(5), d=2).empty


def test_antichain_256():
    r = antichain_roster(256)
    b = build_boundary(r, d=8)
    assert audit_boundary(b, r.X, r.Y) == []
    assert b.real_count() < 8 * 256 / 8


@pytest.mark.parametrize("seed", range(30))
def test_build_counts_exact(seed):
    rng = random.Random(seed)
    n = rng.randint(20, 400)
    r = static_roster(rng, n)
    b = build_boundary(r)
    assert b.d == default_d(n)
    assert audit_boundary(b, r.X, r.Y) == []
    A = 3 * b.d // 2
    for k, s in enumerate(b.segs[:-1]):
        assert len(s.dom) == A
        assert len(dominators(r, b.end_cut(k), b.cy(s))) == b.d


def test_cover_spans():
    for seed in range(20):
        rng = random.Random(seed)
        r = static_roster(rng, rng.randint(30, 300))
        b = build_boundary(r)
        for pos in range(len(r)):
            s = b.cover(pos)
            k = b.index(s)
            assert k == 0 or b.cx(s) <= pos
            assert pos < b.end_cut(k)
    assert build_boundary(antichain_roster(3), d=2).cover(0) is None


def test_fault_injection_single_violation():
    r = static_roster(random.Random(1), 200)
    b = build_boundary(r)
    s = b.segs[1]
    s.dom.discard(next(iter(s.dom)))
    assert len(audit_boundary(b, r.X, r.Y)) == 1


# -- repairs on constructed instances ---------------------------------------------

LEFT_SEEDS = {"raise": [11, 14, 63], "split": [44, 155, 290], "shift": [950, 1404, 1570],
              "remove": [1654, 2454, 8624]}
GAP_SEEDS = {"extend_h": [192, 209, 570], "extend_s": [11053], "new": [15888, 18452, 22173]}


@pytest.mark.parametrize("outcome,seed", [(o, s) for o, ss in LEFT_SEEDS.items() for s in ss])
def test_left_endpoint_outcomes(outcome, seed):
    b, k = left_instance(seed)
    s = b.segs[k]
    d, A = b.d, b.A
    before = len(b.segs)
    assert b.repair_left_endpoint(s) == outcome
    assert endpoint_problems(b) == []
    if outcome == "raise":
        assert len(b.segs[k].dom) == A
    elif outcome == "split":
        assert len(b.segs) == before + 1
        assert len(b.segs[k].dom) == A
        assert d <= len(b.segs[k + 1].dom) <= A
    elif outcome == "remove":
        assert len(b.segs) == before - 1
    b.fix(list(b.segs))
    assert audit_boundary(b, b.r.X, b.r.Y) == []


@pytest.mark.parametrize("outcome,seed", [(o, s) for o, ss in GAP_SEEDS.items() for s in ss])
def test_gap_outcomes(outcome, seed):
    b, k = gap_instance(seed)
    h, s = b.segs[k], b.segs[k + 1]
    dom_s = len(s.dom)
    before = len(b.segs)
    assert b.repair_gap(h, s) == outcome
    assert len(b.segs) == before - 1
    assert audit_boundary(b, b.r.X, b.r.Y) == []
    if outcome == "extend_s":
        assert len(b.segs[k].dom) - dom_s < b.d / 2
    if outcome == "new":
        assert len(b.segs[k].dom) == b.A


def test_repairs_sweep():
    """Every constructed precondition, whatever the outcome, ends in a clean audit."""
    seen = set()
    for seed in range(1500):
        inst = left_instance(seed)
        if inst is not None:
            b, k = inst
            seen.add(b.repair_left_endpoint(b.segs[k]))
            assert endpoint_problems(b) == []
            b.fix(list(b.segs))
            assert audit_boundary(b, b.r.X, b.r.Y) == []
        inst = gap_instance(seed)
        if inst is not None:
            b, k = inst
            seen.add(b.repair_gap(b.segs[k], b.segs[k + 1]))
            assert audit_boundary(b, b.r.X, b.r.Y) == []
    assert {"raise", "split", "shift", "extend_h"} <= seen


def test_repair_noops():
    r = static_roster(random.Random(2), 120)
    b = build_boundary(r)
    assert b.repair_left_endpoint(b.segs[0]) == "noop"
    assert b.repair_gap(b.segs[0], b.segs[1]) == "noop"
    assert audit_boundary(b, r.X, r.Y) == []


# -- kinetic maintenance -------------------------------------------------------------

@pytest.mark.parametrize("seed,d", [(0, None), (1, None), (2, 2), (3, 3), (4, 4), (5, 6)])
def test_kinetic_audits(seed, d):
    rng = random.Random(seed)
    U, T = 100, 20
    pts = random_piecewise(rng, 48, U, T, pieces=3)
    g = GridParams(U, T)
    e = build_engine(pts, g)
    de = DominanceEngine(e, d=d)
    o = OracleSet(pts, g)
    assert de.audit(o, 0) == []
    events = 0
    for grp in event_groups(e, T):
        events += len(grp)
        assert de.audit(o, e.now) == []
    assert events > 1000
    repairs = sum(de.boundary.repairs.values())
    assert repairs <= 8 * events / de.d


def test_reflected_boundaries():
    rng = random.Random(7)
    U, T = 100, 15
    pts = random_piecewise(rng, 40, U, T, pieces=2)
    g = GridParams(U, T)
    e = build_engine(pts, g)
    o = OracleSet(pts, g)
    des = [DominanceEngine(e, sx=sx, sy=sy) for sx in (1, -1) for sy in (1, -1)]
    for grp in event_groups(e, T):
        for de in des:
            assert de.audit(o, e.now) == []
