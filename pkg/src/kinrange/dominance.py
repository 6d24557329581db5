"""Dominance reporting: boundary fast path, global fallback G, and the combined engine."""
from bisect import bisect_left
from collections import Counter
from typing import List, Optional

import numpy as np

from .boundary import (Boundary, Roster, audit_boundary, default_d, key_fn,
                       stair_report)

NEG = -(1 << 60)


class GlobalStructure:
    """Segment tree over the members in x-key order, each node holding the
    member with the largest y key below it.

    Storing ids rather than keys means rank changes that keep the members'
    relative order need no update at all.
    """

    def __init__(self, rx, ry, sx=1, sy=1, xs=()):
        self.kx = key_fn(rx, sx)
        self.ky = key_fn(ry, sy)
        self.rebuilds = 0
        self.touched = 0
        self._build(list(xs))

    def _build(self, xs):
        n = len(xs)
        cap = 4
        while cap < n + max(4, n // 2):
            cap *= 2
        self.cap = cap
        self.off = (cap - n) // 2
        self.n = n
        ids = np.full(cap, -1, dtype=np.int64)
        keys = np.full(cap, NEG, dtype=np.int64)
        if n:
            ids[self.off:self.off + n] = xs
            ky = self.ky
            keys[self.off:self.off + n] = [ky(i) for i in xs]
        tree = np.full(2 * cap, -1, dtype=np.int64)
        tk = np.full(2 * cap, NEG, dtype=np.int64)
        tree[cap:] = ids
        tk[cap:] = keys
        lo = cap
        while lo > 1:
            half = lo // 2
            a_ids, b_ids = tree[lo:2 * lo:2], tree[lo + 1:2 * lo:2]
            a_k, b_k = tk[lo:2 * lo:2], tk[lo + 1:2 * lo:2]
            pick_b = b_k > a_k
            tree[half:lo] = np.where(pick_b, b_ids, a_ids)
            tk[half:lo] = np.where(pick_b, b_k, a_k)
            lo = half
        self.leaf = ids.tolist()
        self.tree = tree.tolist()
        self.touched += n

    def members(self) -> List[int]:
        return self.leaf[self.off:self.off + self.n]

    def __len__(self):
        return self.n

    def _pos(self, i) -> int:
        k = self.kx(i)
        p = bisect_left(self.leaf, k, self.off, self.off + self.n, key=self.kx)
        return p

    def _fix(self, p):
        t, ky = self.tree, self.ky
        v = (p + self.cap) >> 1
        while v:
            a, b = t[2 * v], t[2 * v + 1]
            if a < 0:
                t[v] = b
            elif b < 0:
                t[v] = a
            else:
                t[v] = b if ky(b) > ky(a) else a
            v >>= 1

    def _set(self, p, i):
        self.leaf[p] = i
        self.tree[p + self.cap] = i
        self._fix(p)

    def swap_x(self, p, q):
        kp, kq = self.kx(p), self.kx(q)
        m = kp if kp < kq else kq
        pos = bisect_left(self.leaf, m, self.off, self.off + self.n, key=self.kx)
        a, b = self.leaf[pos], self.leaf[pos + 1]
        if {a, b} != {p, q}:
            raise RuntimeError("G: swap of non-adjacent members")
        self._set(pos, b)
        self._set(pos + 1, a)

    def swap_y(self, p, q):
        self._fix(self._pos(p))
        self._fix(self._pos(q))

    def insert(self, i):
        p = self._pos(i)
        if p == self.off and self.off > 0:
            self.off -= 1
            self.n += 1
            self._set(self.off, i)
            return
        if p == self.off + self.n and self.off + self.n < self.cap:
            self.n += 1
            self._set(p, i)
            return
        xs = self.members()
        xs.insert(p - self.off, i)
        self.rebuilds += 1
        self._build(xs)

    def delete(self, i):
        p = self._pos(i)
        if self.leaf[p] != i:
            raise KeyError(i)
        if p == self.off:
            self._set(p, -1)
            self.off += 1
            self.n -= 1
            return
        if p == self.off + self.n - 1:
            self._set(p, -1)
            self.n -= 1
            return
        xs = self.members()
        del xs[p - self.off]
        self.rebuilds += 1
        self._build(xs)

    def report(self, kx, ky):
        """Members with x key >= kx and y key >= ky; returns (ids, nodes visited)."""
        lo = bisect_left(self.leaf, kx, self.off, self.off + self.n, key=self.kx)
        hi = self.off + self.n
        if lo >= hi:
            return [], 1
        t, kyf, cap = self.tree, self.ky, self.cap
        out = []
        visited = 0
        stack = [(1, 0, cap)]
        while stack:
            v, l, r = stack.pop()
            visited += 1
            if r <= lo or l >= hi:
                continue
            w = t[v]
            if w < 0 or kyf(w) < ky:
                continue
            if v >= cap:
                out.append(w)
                continue
            m = (l + r) >> 1
            stack.append((2 * v + 1, m, r))
            stack.append((2 * v, l, m))
        return out, visited


def g_update(g: GlobalStructure, change: str, *args):
    """Apply 'swap_x' (p, q), 'swap_y' (p, q), 'insert' (i) or 'delete' (i)."""
    getattr(g, change)(*args)


class DCore:
    """One point set with its roster and boundary (no fallback of its own)."""

    def __init__(self, rx, ry, sx=1, sy=1, members=(), xs=None, ys=None, d=None, stats=None):
        self.roster = Roster(rx, ry, sx, sy, members, xs, ys)
        self.stats = stats if stats is not None else Counter()
        self.d_fixed = d
        self._new_boundary()

    def _new_boundary(self):
        n = len(self.roster)
        d = self.d_fixed if self.d_fixed is not None else default_d(n)
        self.b = Boundary(self.roster, d)
        self.stats["rebuild_points"] += n

    def __len__(self):
        return len(self.roster)

    @property
    def X(self):
        return self.roster.X

    @property
    def Y(self):
        return self.roster.Y

    def _maybe_resize(self):
        n, b = len(self.roster), self.b
        if b.empty != (n <= 2 * b.d):
            self._new_boundary()
            return True
        if self.d_fixed is not None:
            return False
        if n >= 2 * max(b.n_built, 1) or 2 * n <= b.n_built:
            self._new_boundary()
            return True
        return False

    def swap(self, axis, p, q):
        lo, hi, j = self.roster.swap(axis, p, q)
        b = self.b
        b.epoch += 1
        if b.empty:
            return
        if axis == 0:
            touched = b.on_x_swap(lo, hi, j)
        else:
            touched = b.on_y_swap(lo, hi, j)
        if touched:
            b.fix(touched)

    def insert_low(self, i):
        """Insert a point whose x key or y key is below every member's."""
        self.roster.insert(i)
        if self._maybe_resize():
            return
        b = self.b
        if not b.empty:
            b.fix(b.after_insert(i))

    def delete_low(self, i):
        b = self.b
        lx, ly = b.before_delete(i)
        self.roster.delete(i)
        if self._maybe_resize():
            return
        if not b.empty:
            b.fix(b.after_delete(i, lx, ly))

    def insert_any(self, i):
        self.roster.insert(i)
        self._new_boundary()

    def delete_any(self, i):
        self.roster.delete(i)
        self._new_boundary()

    def fast_query(self, kx, ky):
        """Answer from one D_s if the query point lies on or above the staircase.

        Returns (ids, candidates) or None when the fallback is needed.  A set
        with at most 2d members has no boundary and is simply scanned."""
        b = self.b
        r = self.roster
        if b.empty:
            kxf, kyf = r.kx, r.ky
            return [p for p in r.X if kxf(p) >= kx and kyf(p) >= ky], len(r.X)
        cx, cy = r.cut_x(kx), r.cut_y(ky)
        s = b.locate_query(cx, cy)
        if s is None:
            return None
        return stair_report(b.staircase(s), kx, ky, r.kx, r.ky)

    def audit(self, true_x, true_y):
        return audit_boundary(self.b, true_x, true_y)


class DominanceEngine:
    """Boundary with d = log n plus a global fallback G over one point set."""

    def __init__(self, eng, members=None, sx=1, sy=1, d=None, listen=True):
        self.eng = eng
        rx, ry = eng.rank[0], eng.rank[1]
        self.sx, self.sy = sx, sy
        if members is None:
            members = eng.alive()
        self.stats = Counter()
        self.core = DCore(rx, ry, sx, sy, members, d=d, stats=self.stats)
        self.g = GlobalStructure(rx, ry, sx, sy, self.core.X)
        self.members = set(members)
        self.log = []
        if listen:
            eng.add_listener(self)

    @property
    def boundary(self) -> Boundary:
        return self.core.b

    @property
    def d(self) -> int:
        return self.core.b.d

    def on_swap(self, axis, p, q, j):
        m = self.members
        if p in m and q in m:
            self.core.swap(axis, p, q)
            if axis == 0:
                self.g.swap_x(p, q)
            else:
                self.g.swap_y(p, q)

    # key-space query: members with sx*rx >= kx and sy*ry >= ky
    def query_keys(self, kx, ky):
        res = self.core.fast_query(kx, ky)
        if res is not None:
            ids, cand = res
            self.stats["fast"] += 1
            self.last = ("fast", cand, len(ids))
            return ids
        ids, vis = self.g.report(kx, ky)
        self.stats["fallback"] += 1
        self.last = ("fallback", vis, len(ids))
        return ids

    def dominance_query(self, qx, qy, t=None) -> set:
        """Ids of points with x >= qx and y >= qy (in this engine's orientation)."""
        e = self.eng
        if t is not None:
            e._check_time(t)
        kx = _key_threshold(e, 0, qx, self.sx)
        ky = _key_threshold(e, 1, qy, self.sy)
        return {e.ext[i] for i in self.query_keys(kx, ky)}

    # special updates: the point must already be known to the kinetic engine
    def insert(self, i, low_x=False, low_y=False):
        self.members.add(i)
        self.g.insert(i)
        if low_x or low_y:
            self.core.insert_low(i)
        else:
            self.core.insert_any(i)

    def delete(self, i, low_x=False, low_y=False):
        self.members.discard(i)
        self.g.delete(i)
        if low_x or low_y:
            self.core.delete_low(i)
        else:
            self.core.delete_any(i)

    def audit(self, oracle_set, t):
        tx, ty = oracle_orders(self.eng, oracle_set, t, self.members, self.sx, self.sy)
        return self.core.audit(tx, ty)


def _key_threshold(e, axis, q, sign):
    """Key threshold selecting coordinate >= q (sign +1) or <= q (sign -1)."""
    if sign > 0:
        return e.count_lt(axis, q)
    return 1 - e.count_le(axis, q)


def oracle_orders(eng, oracle_set, t, members, sx=1, sy=1):
    """Members in ascending key order computed from exact positions only."""
    out = []
    for axis, s in ((0, sx), (1, sy)):
        ids = oracle_set.sorted_ids(axis, t)
        idx = [eng.index[i] for i in ids]
        sel = [i for i in idx if i in members]
        if s < 0:
            sel.reverse()
        out.append(sel)
    return out


class Staircase:
    """Maxima staircase over explicit (id, x, y) triples.

    Points are kept by descending x with running maxima of y, so a query
    walks a prefix and stops once no remaining point can reach qy.
    """

    def __init__(self, pts=()):
        self.pts = sorted(pts, key=lambda p: (-p[1], -p[2], p[0]))
        # suffix maxima: the best y among points at or after each position
        self.mx = [y for _, _, y in self.pts]
        for i in range(len(self.mx) - 2, -1, -1):
            self.mx[i] = max(self.mx[i], self.mx[i + 1])

    def __len__(self):
        return len(self.pts)

    def query(self, qx, qy):
        out, seen = set(), 0
        for i, (pid, x, y) in enumerate(self.pts):
            if x < qx or self.mx[i] < qy:
                break
            seen += 1
            if y >= qy:
                out.add(pid)
        return out, seen


def staircase_query(ds: Staircase, qx, qy) -> set:
    return ds.query(qx, qy)[0]


def dominance_query(de: DominanceEngine, qx, qy, t=None) -> set:
    return de.dominance_query(qx, qy, t)
