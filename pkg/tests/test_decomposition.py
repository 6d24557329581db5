import random
from fractions import Fraction

import pytest

from kinrange.core import GridParams, linear_point, static_point
from kinrange.decomposition import (
    HDecomposition, PreconditionError, VDecomposition, chunk_sizes, delete_minus_x,
    delete_minus_y, delete_plus_x, delete_plus_y, h_query, insert_minus_x, insert_minus_y,
    insert_plus_x, insert_plus_y, kind_method, lower_bound, upper_bound, v_query,
)
from kinrange.dominance import _key_threshold, oracle_orders
from kinrange.kinetic import build_engine
from kinrange.oracle import OracleSet

from conftest import event_groups, random_linear, s6_points

U = 1 << 20


class Bench:
    """Static points, a decomposition over them, and an oracle kept in step."""

    def __init__(self, cls, pts, sx=1, sy=1, t_max=5):
        self.g = GridParams(U, t_max)
        self.e = build_engine(pts, self.g)
        self.o = OracleSet(pts, self.g)
        self.sx, self.sy = sx, sy
        self.h = cls(self.e.rank[0], self.e.rank[1], sx, sy, members=range(len(pts)))
        self.nid = 10_000

    def coords(self):
        return self.o.positions(self.e.now)

    def new_point(self, rng, kind):
        """A fresh point that is extremal for a coordinate-level kind ('+x', '-y', ...)."""
        pos = self.coords().values()
        axis = 0 if kind[1] == "x" else 1
        vals = [p[axis] for p in pos] or [U // 2]
        v = max(vals) + rng.randint(1, 50) if kind[0] == "+" else min(vals) - rng.randint(1, 50)
        other = rng.randrange(U // 4, 3 * U // 4)
        x, y = (v, other) if axis == 0 else (other, v)
        self.nid += 1
        return static_point(self.nid, x, y)

    def insert(self, rng, kind):
        p = self.new_point(rng, kind)
        i = self.e.insert_point(p)
        self.o.add(p)
        getattr(self.h, kind_method(kind, self.sx, self.sy, "insert"))(i)
        return i

    def extreme(self, kind):
        axis = 0 if kind[1] == "x" else 1
        order = self.e.order[axis]
        live = [i for i in order if i in self.h.where]
        return live[-1] if kind[0] == "+" else live[0]

    def delete(self, kind, i=None):
        i = self.extreme(kind) if i is None else i
        getattr(self.h, kind_method(kind, self.sx, self.sy, "delete"))(i)
        pid = self.e.ext[i]
        self.e.delete_point(i)
        self.o.remove(pid)

    def query(self, qx, qy):
        a = _key_threshold(self.e, 0, qx, self.sx)
        b = _key_threshold(self.e, 1, qy, self.sy)
        return {self.e.ext[i] for i in self.h.query(a, b)[0]}

    def truth(self, qx, qy):
        sx, sy = self.sx, self.sy
        return {p for p, (x, y) in self.coords().items() if sx * x >= sx * qx and sy * y >= sy * qy}

    def full_audit(self):
        mem = set(self.h.where)
        return self.h.audit(*oracle_orders(self.e, self.o, self.e.now, mem, self.sx, self.sy))

    def answers(self, rng, k=20):
        qs = [(rng.randrange(U), rng.randrange(U)) for _ in range(k)]
        return [(q, self.query(*q), self.truth(*q)) for q in qs]


def sizes(h):
    return [len(h._prim(s)) for s in h.sets]


def scatter(rng, n):
    return [static_point(i, rng.randrange(U // 4, 3 * U // 4), rng.randrange(U // 4, 3 * U // 4))
            for i in range(n)]


def test_bounds_and_chunks():
    assert lower_bound(3, False) == 32 and upper_bound(3, False) == 256
    assert lower_bound(3, True) == 16 and upper_bound(3, True) == 320
    assert chunk_sizes(0) == [0]
    assert chunk_sizes(100) == [16, 84]
    assert sum(chunk_sizes(5000)) == 5000
    assert kind_method("+x", 1, 1, "insert") == "insert_plus_x"
    assert kind_method("+x", -1, 1, "insert") == "insert_minus_x"
    assert kind_method("-y", 1, -1, "delete") == "delete_plus_y"


def test_single_set_query():
    rng = random.Random(1)
    b = Bench(HDecomposition, scatter(rng, 12))
    assert len(b.h.sets) == 1
    for q, got, want in b.answers(rng):
        assert got == want


def test_s6_split_query():
    pts = s6_points()
    b = Bench(HDecomposition, pts)
    b.h._resplit(0, 2, width=1)
    assert [sorted(b.e.ext[i] for i in b.h._prim(s)) for s in b.h.sets] == [[4, 5], [0, 1, 2, 3]]
    assert h_query(b.h, b.e.count_lt(0, Fraction(5, 2)), b.e.count_lt(1, Fraction(5, 2))) is not None
    assert b.query(Fraction(5, 2), Fraction(5, 2)) == {2, 3}


def test_s6_two_v_sets():
    b = Bench(VDecomposition, s6_points())
    b.h._resplit(0, 3, width=1)
    assert len(b.h.sets) == 2
    assert b.query(Fraction(5, 2), Fraction(5, 2)) == {2, 3}
    a = b.e.count_lt(0, Fraction(5, 2))
    assert {b.e.ext[i] for i in v_query(b.h, a, a)} == {2, 3}


@pytest.mark.parametrize("cls", [HDecomposition, VDecomposition])
def test_insert_delete_plus_x_inverse(cls):
    rng = random.Random(2)
    b = Bench(cls, scatter(rng, 150))
    before = sizes(b.h)
    probe = [(rng.randrange(U), rng.randrange(U)) for _ in range(30)]
    ans = [b.query(*q) for q in probe]
    i = b.insert(rng, "+x")
    b.delete("+x", i)
    assert sizes(b.h) == before
    assert [b.query(*q) for q in probe] == ans
    assert b.full_audit() == []


def test_insert_minus_y_inverse():
    rng = random.Random(3)
    b = Bench(VDecomposition, scatter(rng, 150))
    before = sizes(b.h)
    probe = [(rng.randrange(U), rng.randrange(U)) for _ in range(30)]
    ans = [b.query(*q) for q in probe]
    i = b.insert(rng, "-y")
    b.delete("-y", i)
    assert sizes(b.h) == before
    assert [b.query(*q) for q in probe] == ans


def test_grow_from_empty_and_split_size():
    """2^8 insertions at the right end; a full non-last H_2 splits back to 2^{2*2}."""
    rng = random.Random(4)
    b = Bench(HDecomposition, [])
    splits = 0
    for _ in range(256):
        prev = sizes(b.h)
        b.insert(rng, "+x")
        assert b.h.audit_conditions() == []
        cur = sizes(b.h)
        if len(prev) > 1 and prev[0] == 2 ** 5:
            assert cur[0] == 2 ** 4
            splits += 1
    assert splits > 0
    assert len(b.h) == 256 and len(b.h.sets) >= 2
    assert b.full_audit() == []
    for q, got, want in b.answers(rng):
        assert got == want


def test_delete_unique_minimum():
    rng = random.Random(5)
    b = Bench(HDecomposition, scatter(rng, 300))
    b.delete("-x")
    assert b.full_audit() == []
    for q, got, want in b.answers(rng, 40):
        assert got == want


def test_merge_last_set():
    rng = random.Random(6)
    b = Bench(HDecomposition, scatter(rng, 100))
    assert sizes(b.h) == [16, 84]
    while len(b.h.sets) == 2:
        b.delete("-x")
        assert b.h.audit_conditions() == []
    # H_3 fell to 15 < 4^2 and 16 + 15 <= 3 * 4^2, so the two sets merged
    assert sizes(b.h) == [31]
    assert b.h.repairs["shrink"] == 1


def test_overlap_drift_split():
    """H_2 points drift left through H_3; the overlap repair keeps cardinalities."""
    rng = random.Random(7)
    n, t_max = 100, 40
    xs = rng.sample(range(1000, 2000), n)
    top = set(sorted(range(n), key=xs.__getitem__)[-16:])
    pts = [linear_point(i, -20 if i in top else 0, xs[i] + 2000, 0, rng.randrange(4000)) for i in range(n)]
    g = GridParams(8000, t_max)
    e = build_engine(pts, g)
    o = OracleSet(pts, g)
    h = HDecomposition(e.rank[0], e.rank[1], members=range(n))
    assert sizes(h) == [16, 84]

    class Disp:
        def on_swap(self, axis, p, q, j):
            h.on_swap(axis, p, q)

    e.add_listener(Disp())
    for _ in event_groups(e, t_max):
        assert h.audit_conditions() == []
        assert sizes(h)[0] == 16
    assert h.repairs["overlap"] > 0
    assert h.audit(*oracle_orders(e, o, e.now, set(range(n)))) == []


@pytest.mark.parametrize("cls", [HDecomposition, VDecomposition])
def test_preconditions_rejected(cls):
    rng = random.Random(8)
    b = Bench(cls, scatter(rng, 40))
    mid = b.e.order[0][20]
    with pytest.raises(PreconditionError):
        b.h.delete_plus_x(mid)
    with pytest.raises(PreconditionError):
        b.h.delete_minus_y(b.e.order[1][20])
    p = static_point(999, U // 2, U // 2)
    i = b.e.insert_point(p)
    with pytest.raises(PreconditionError):
        b.h.insert_plus_x(i)


OPS_H = ["+x", "-x", "-y"]
OPS_V = ["+x", "-x", "+y", "-y"]


@pytest.mark.parametrize("cls,seed", [(c, s) for c in (HDecomposition, VDecomposition) for s in range(3)])
def test_mixed_special_ops(cls, seed):
    rng = random.Random(seed)
    sx, sy = rng.choice([1, -1]), rng.choice([1, -1])
    b = Bench(cls, scatter(rng, rng.choice([0, 30, 200])), sx, sy)
    kinds = OPS_V if cls is VDecomposition else OPS_H
    if cls is HDecomposition:
        # in key space an H-decomposition has no rebuild path for +y
        kinds = [k for k in OPS_V if kind_method(k, sx, sy, "insert") != "insert_plus_y"]
    for step in range(2 ** 7 * 3):
        kind = rng.choice(kinds)
        if len(b.h) == 0 or rng.random() < 0.55:
            b.insert(rng, kind)
        else:
            b.delete(kind)
        assert b.h.audit_conditions() == []
        if step % 32 == 0:
            assert b.full_audit() == []
            for q, got, want in b.answers(rng, 5):
                assert got == want


def test_module_level_wrappers():
    rng = random.Random(9)
    b = Bench(VDecomposition, scatter(rng, 60))
    for kind, ins, dele in (("+x", insert_plus_x, delete_plus_x), ("-x", insert_minus_x, delete_minus_x),
                            ("+y", insert_plus_y, delete_plus_y), ("-y", insert_minus_y, delete_minus_y)):
        p = b.new_point(rng, kind)
        i = b.e.insert_point(p)
        b.o.add(p)
        ins(b.h, i)
        assert b.h.audit_conditions() == []
        dele(b.h, i)
        b.e.delete_point(i)
        b.o.remove(p.id)
    assert b.full_audit() == []


@pytest.mark.parametrize("cls", [HDecomposition, VDecomposition])
def test_kinetic_differential(cls):
    rng = random.Random(10)
    n, Ug, T = 300, 4096, 20
    pts = random_linear(rng, n, Ug, T)
    g = GridParams(Ug, T)
    e = build_engine(pts, g)
    o = OracleSet(pts, g)
    h = cls(e.rank[0], e.rank[1], -1, 1, members=range(n))

    class Disp:
        def on_swap(self, axis, p, q, j):
            h.on_swap(axis, p, q)

    e.add_listener(Disp())
    for t in range(1, T + 1):
        for _ in event_groups(e, t):
            assert h.audit_conditions() == []
        assert h.audit(*oracle_orders(e, o, t, set(range(n)), -1, 1)) == []
        pos = o.positions(t)
        for _ in range(20):
            qx, qy = rng.randrange(Ug), rng.randrange(Ug)
            got = {e.ext[i] for i in h.query(_key_threshold(e, 0, qx, -1), _key_threshold(e, 1, qy, 1))[0]}
            assert got == {p for p, (x, y) in pos.items() if x <= qx and y >= qy}
