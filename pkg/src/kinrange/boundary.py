"""The d-approximate boundary over one point set.

Everything is expressed in local rank space.  A roster keeps the members in x
and y order (by the kinetic engine's global ranks, possibly negated for a
reflected view).  A segment is anchored at two member ids: first(s), the point
its left end sits just left of (None for the first segment, at -inf), and u(s),
the point its level sits just below.  Its cuts are the local ranks of those
anchors, so Dom(s) = {p : lx(p) >= a_s and ly(p) >= b_s}.

The last entry of the segment list is a tail with level -inf: Dom(tail) is every
point right of the staircase.  It is repaired like any segment when its left
end gets crowded, and it is left out of the span and right-end checks.
"""
from bisect import bisect_left, bisect_right
from collections import Counter
import math
from typing import Dict, List, Optional


def default_d(n: int) -> int:
    return max(2, math.ceil(math.log2(n))) if n > 1 else 2


def key_fn(rank, sign):
    if sign > 0:
        return rank.__getitem__
    return lambda i: -rank[i]


class Roster:
    """Members of a set in ascending key order along both axes."""

    def __init__(self, rx, ry, sx=1, sy=1, members=(), xs=None, ys=None):
        self.rx, self.ry, self.sx, self.sy = rx, ry, sx, sy
        self.kx = key_fn(rx, sx)
        self.ky = key_fn(ry, sy)
        self.X = list(xs) if xs is not None else sorted(members, key=self.kx)
        self.Y = list(ys) if ys is not None else sorted(self.X, key=self.ky)

    def __len__(self):
        return len(self.X)

    def lx(self, i) -> int:
        return bisect_left(self.X, self.kx(i), key=self.kx)

    def ly(self, i) -> int:
        return bisect_left(self.Y, self.ky(i), key=self.ky)

    def cut_x(self, kx) -> int:
        """Members with x key below kx."""
        return bisect_left(self.X, kx, key=self.kx)

    def cut_y(self, ky) -> int:
        return bisect_left(self.Y, ky, key=self.ky)

    def swap(self, axis, p, q):
        """Adjacent members p, q swapped; returns (lo, hi, j) in local terms.

        lo was at local rank j and is now at j + 1.
        """
        lst, key = (self.X, self.kx) if axis == 0 else (self.Y, self.ky)
        kp, kq = key(p), key(q)
        i = bisect_left(lst, kp if kp < kq else kq, key=key)
        lo, hi = lst[i], lst[i + 1]
        if not ((lo == p and hi == q) or (lo == q and hi == p)):
            raise RuntimeError("swap of non-adjacent members")
        lst[i], lst[i + 1] = hi, lo
        return lo, hi, i

    def insert(self, i):
        kx, ky = self.kx, self.ky
        self.X.insert(bisect_left(self.X, kx(i), key=kx), i)
        self.Y.insert(bisect_left(self.Y, ky(i), key=ky), i)

    def delete(self, i):
        del self.X[self.lx(i)]
        del self.Y[self.ly(i)]

    def contains(self, i) -> bool:
        k = self.lx(i)
        return k < len(self.X) and self.X[k] == i


END = -1  # anchor of an empty tail: just right of every point


class Segment:
    __slots__ = ("first", "u", "dom", "tail", "stair", "stair_epoch")

    def __init__(self, first, u, dom, tail=False):
        self.first = first
        self.u = u
        self.dom = dom
        self.tail = tail
        self.stair = None
        self.stair_epoch = -1

    def __repr__(self):
        return f"Segment(first={self.first}, u={self.u}, |dom|={len(self.dom)}, tail={self.tail})"


class BoundaryError(RuntimeError):
    pass


class Boundary:
    def __init__(self, roster: Roster, d: Optional[int] = None):
        self.r = roster
        self.n_built = len(roster)
        self.d = d if d is not None else default_d(len(roster))
        self.A = (3 * self.d) // 2
        self.segs: List[Segment] = []
        self.first_of: Dict[int, Segment] = {}
        self.u_of: Dict[int, Segment] = {}
        self.repairs = Counter()
        self.epoch = 0
        self.build()

    # -- construction -------------------------------------------------------------
    def build(self):
        """Linear-time construction from the roster's sorted lists."""
        r, d, A = self.r, self.d, self.A
        X, Y = r.X, r.Y
        n = len(X)
        self.segs = []
        self.first_of = {}
        self.u_of = {}
        if n <= 2 * d:
            return
        pos_x = {p: k for k, p in enumerate(X)}
        pos_y = {p: k for k, p in enumerate(Y)}
        lyx = [pos_y[p] for p in X]
        lxy = [pos_x[p] for p in Y]
        need = A - d + 1
        b = n - A
        a = 0
        dom = set(Y[b:])
        yp = b - 1
        while True:
            cnt = 0
            i = a
            passed = []
            while True:
                if lyx[i] >= b:
                    cnt += 1
                    if cnt == need:
                        break
                    passed.append(X[i])
                i += 1
            e = i
            seg = Segment(None if a == 0 else X[a], Y[b], dom)
            self._append(seg)
            right = dom.difference(passed)
            new = []
            while yp >= 0 and len(new) < A - d:
                if lxy[yp] >= e:
                    new.append(Y[yp])
                yp -= 1
            if len(new) < A - d or yp < 0:
                # no room for another real level above the tail
                while yp >= 0:
                    if lxy[yp] >= e:
                        new.append(Y[yp])
                    yp -= 1
                right.update(new)
                self._append(Segment(X[e], None, right, tail=True))
                return
            b = yp + 1
            a = e
            right.update(new)
            dom = right

    def _append(self, seg):
        self.segs.append(seg)
        if seg.first is not None:
            self.first_of[seg.first] = seg
        if seg.u is not None:
            self.u_of[seg.u] = seg

    @property
    def empty(self) -> bool:
        return not self.segs

    def real_count(self) -> int:
        return max(0, len(self.segs) - 1)

    # -- cuts ---------------------------------------------------------------------
    def cx(self, seg) -> int:
        if seg.first is None:
            return 0
        if seg.first == END:
            return len(self.r.X)
        return self.r.lx(seg.first)

    def cy(self, seg) -> int:
        return 0 if seg.tail else self.r.ly(seg.u)

    def index(self, seg) -> int:
        return self.segs.index(seg)

    def end_cut(self, k) -> int:
        if k + 1 < len(self.segs):
            return self.cx(self.segs[k + 1])
        return len(self.r.X)

    def cover_index(self, pos) -> int:
        """Index of the segment whose x range holds local x position pos."""
        k = bisect_right(self.segs, pos, key=self.cx) - 1
        return max(k, 0)

    def cover(self, pos):
        if not self.segs:
            return None
        return self.segs[self.cover_index(pos)]

    # -- anchor bookkeeping -------------------------------------------------------
    def _set_first(self, seg, p):
        if seg.first is not None and self.first_of.get(seg.first) is seg:
            del self.first_of[seg.first]
        seg.first = p
        if p is not None and p != END:
            self.first_of[p] = seg

    def _set_u(self, seg, p):
        if seg.u is not None and self.u_of.get(seg.u) is seg:
            del self.u_of[seg.u]
        seg.u = p
        if p is not None:
            self.u_of[p] = seg

    def _drop(self, seg):
        if seg.first is not None and self.first_of.get(seg.first) is seg:
            del self.first_of[seg.first]
        if seg.u is not None and self.u_of.get(seg.u) is seg:
            del self.u_of[seg.u]
        self.segs.remove(seg)

    def _touch(self, seg):
        seg.stair_epoch = -1

    # -- kinetic moves ------------------------------------------------------------
    def on_y_swap(self, P, Q, j):
        """P moved up from local y rank j to j+1, Q moved down from j+1 to j."""
        if not self.segs:
            return []
        s = self.u_of.get(Q)
        t = self.u_of.get(P)
        if s is None:
            if t is not None:
                self._set_u(t, Q)
            return []
        r = self.r
        k = self.index(s)
        a = self.cx(s)
        e = self.end_cut(k)
        lxP, lxQ = r.lx(P), r.lx(Q)
        rP, rQ = lxP >= e, lxQ >= e
        self._touch(s)
        if rP == rQ:
            # cut stays put, the anchor at it changes
            self._set_u(s, P)
            if t is not None:
                self._set_u(t, Q)
            if lxQ >= a:
                s.dom.discard(Q)
            if lxP >= a:
                s.dom.add(P)
            return [s]
        if rQ:
            # level follows Q down to cut j
            if lxP >= a:
                s.dom.add(P)
            nxt = self.segs[k + 1]
            if t is not None or (nxt.tail and j == 0):
                self.repairs["merge_y"] += 1
                if nxt.tail:
                    self._drop(nxt)
                    self._set_u(s, None)
                    s.tail = True
                else:
                    self._drop(nxt)
            return [s]
        # P right of the end, Q not: level skips to cut j+2
        R = r.Y[j + 2]
        if t is not None:
            self._set_u(t, Q)
        if lxQ >= a:
            s.dom.discard(Q)
        if k > 0 and self.segs[k - 1].u == R:
            self.repairs["merge_y"] += 1
            self._drop(s)
            return [self.segs[k - 1]]
        self._set_u(s, R)
        return [s]

    def on_x_swap(self, P, Q, rr):
        """P moved right from local x rank rr to rr+1, Q moved left."""
        if not self.segs:
            return []
        h = self.first_of.get(Q)
        g = self.first_of.get(P)
        if h is None:
            if g is not None:
                self._set_first(g, Q)
            return []
        r = self.r
        k = self.index(h)
        s = self.segs[k - 1]
        bs = self.cy(s)
        bh = self.cy(h)
        lyP, lyQ = r.ly(P), r.ly(Q)
        aP, aQ = lyP >= bs, lyQ >= bs
        self._touch(h)
        if aP == aQ:
            self._set_first(h, P)
            if g is not None:
                self._set_first(g, Q)
            if lyQ >= bh:
                h.dom.discard(Q)
            if lyP >= bh:
                h.dom.add(P)
            return [h]
        if aQ:
            # connector follows Q left to cut rr
            if lyP >= bh:
                h.dom.add(P)
            if g is not None or (s.first is None and rr == 0):
                self.repairs["merge_x"] += 1
                new_first = s.first
                self._drop(s)
                self._set_first(h, new_first if new_first is None else Q)
            return [h]
        # P above y(s), Q not: connector skips to cut rr+2
        n = len(r.X)
        R = r.X[rr + 2] if rr + 2 < n else END
        if g is not None:
            self._set_first(g, Q)
        if lyQ >= bh:
            h.dom.discard(Q)
        if not h.tail:
            nxt = self.segs[k + 1]
            if nxt.first == R:
                self.repairs["merge_x"] += 1
                self._drop(h)
                return [s]
        elif R == END:
            raise BoundaryError("tail emptied by an x-move")
        self._set_first(h, R)
        return [h]

    # -- extremal updates -----------------------------------------------------------
    def after_insert(self, p):
        """p was just added to the roster at the low x end or the low y end."""
        if not self.segs:
            return []
        r = self.r
        lx, ly = r.lx(p), r.ly(p)
        touched = []
        if lx == 0:
            s = self.segs[0]
            if ly >= self.cy(s):
                s.dom.add(p)
                touched.append(s)
        if ly == 0:
            tail = self.segs[-1]
            if tail.first == END:
                if lx == len(r.X) - 1:
                    self._set_first(tail, p)
            if lx >= self.cx(tail):
                tail.dom.add(p)
                if tail not in touched:
                    touched.append(tail)
        if not touched:
            # p sits below the staircase; only spans grew
            touched.append(self.segs[self.cover_index(lx)])
        for s in touched:
            self._touch(s)
        return touched

    def before_delete(self, p):
        """Record p's cuts; call after_delete once the roster dropped it."""
        r = self.r
        return r.lx(p), r.ly(p)

    def after_delete(self, p, lxp, lyp):
        if not self.segs:
            return []
        r = self.r
        touched = []
        for s in self.segs:
            if p in s.dom:
                s.dom.discard(p)
                self._touch(s)
                touched.append(s)
        s = self.first_of.get(p)
        if s is not None:
            n = len(r.X)
            R = r.X[lxp] if lxp < n else END
            k = self.index(s)
            nxt = self.segs[k + 1] if k + 1 < len(self.segs) else None
            if nxt is not None and nxt.first == R:
                self._drop(s)
                if s in touched:
                    touched.remove(s)
                touched.append(self.segs[k - 1] if k > 0 else self.segs[0])
            else:
                self._set_first(s, R)
                touched.append(s)
        s = self.u_of.get(p)
        if s is not None:
            R = r.Y[lyp]
            k = self.index(s)
            if k > 0 and self.segs[k - 1].u == R:
                self._drop(s)
                if s in touched:
                    touched.remove(s)
                touched.append(self.segs[k - 1])
            else:
                self._set_u(s, R)
                touched.append(s)
        if lxp == 0 and len(self.segs) > 1 and self.segs[1].first is not None \
                and self.segs[1].first != END and r.lx(self.segs[1].first) == 0:
            # the first segment lost its whole x range: its successor takes over
            s0, s1 = self.segs[0], self.segs[1]
            self._drop(s0)
            if s0 in touched:
                touched.remove(s0)
            self._set_first(s1, None)
            self._touch(s1)
            touched.append(s1)
        if lyp == 0 and len(self.segs) > 1:
            s = self.segs[-2]
            if r.ly(s.u) == 0:
                # the lowest real level sank to the bottom: s becomes the tail
                tail = self.segs[-1]
                self._drop(tail)
                if tail in touched:
                    touched.remove(tail)
                self._set_u(s, None)
                s.tail = True
                self._touch(s)
                touched.append(s)
        if not touched:
            touched.append(self.segs[self.cover_index(min(lxp, max(len(r.X) - 1, 0)))])
        return touched

    # -- repairs -------------------------------------------------------------------
    def span(self, k) -> int:
        """Points in the x range of the real pair (k, k+1)."""
        return self.end_cut(k + 1) - self.cx(self.segs[k])

    def _gap_bad(self, k) -> bool:
        # pair (k, k+1) of real segments
        if k < 0 or k + 2 >= len(self.segs):
            return False
        return 2 * self.span(k) <= self.d

    def repair_left_endpoint(self, s) -> str:
        """Fig. 2 style fix for a segment whose left end has 2d dominators."""
        d, A, r = self.d, self.A, self.r
        if len(s.dom) < 2 * d:
            return "noop"
        k = self.index(s)
        h = self.segs[k - 1] if k > 0 else None
        bh = self.cy(h) if h is not None else None
        e = self.end_cut(k)
        ly = {p: r.ly(p) for p in s.dom}
        items = sorted(s.dom, key=ly.__getitem__, reverse=True)
        pl = items[A - 1]
        bp = ly[pl]
        self._touch(s)
        if bh is None or bp < bh:
            top = items[:A]
            lx = {p: r.lx(p) for p in s.dom}
            if not s.tail:
                if sum(1 for p in top if lx[p] >= e) >= d:
                    self._set_u(s, pl)
                    s.dom = set(top)
                    self.repairs["left_raise"] += 1
                    return "raise"
            byx = sorted(top, key=lx.__getitem__, reverse=True)
            pr = byx[d - 1]
            c = lx[pr]
            s1 = Segment(None, None, set(top))
            s2 = Segment(None, None, {p for p in s.dom if lx[p] >= c}, tail=s.tail)
            old_first, old_u = s.first, s.u
            self._drop(s)
            self.segs.insert(k, s2)
            self.segs.insert(k, s1)
            self._set_first(s1, old_first)
            self._set_u(s1, pl)
            self._set_first(s2, pr)
            if not s.tail:
                self._set_u(s2, old_u)
            self.repairs["left_split"] += 1
            return "split"
        lx = {p: r.lx(p) for p in s.dom}
        up = [p for p in s.dom if ly[p] >= bh]
        up.sort(key=lx.__getitem__, reverse=True)
        pr = up[d - 1]
        c = lx[pr]
        if not s.tail and c >= e:
            self._drop(s)
            self.repairs["left_remove"] += 1
            return "remove"
        self._set_first(s, pr)
        s.dom = {p for p in s.dom if lx[p] >= c}
        self.repairs["left_shift"] += 1
        return "shift"

    def repair_gap(self, h, s) -> str:
        """Fig. 3 style fix for consecutive segments h, s spanning <= d/2 points."""
        A, r = self.A, self.r
        k = self.index(h)
        if self.segs[k + 1] is not s or s.tail or not self._gap_bad(k):
            return "noop"
        self._touch(h)
        self._touch(s)
        if len(h.dom) >= A:
            self._drop(s)
            self.repairs["gap_extend_h"] += 1
            return "extend_h"
        ah, as_ = self.cx(h), self.cx(s)
        bs = self.cy(s)
        W = [p for p in r.X[ah:as_] if r.ly(p) >= bs]
        if len(s.dom) + len(W) <= A:
            first = h.first
            self._drop(h)
            self._set_first(s, first)
            s.dom.update(W)
            self.repairs["gap_extend_s"] += 1
            return "extend_s"
        pool = list(s.dom) + W
        ly = {p: r.ly(p) for p in pool}
        pool.sort(key=ly.__getitem__, reverse=True)
        m = pool[A - 1]
        g = Segment(None, None, set(pool[:A]))
        first = h.first
        self._drop(h)
        k = self.index(s)
        self._drop(s)
        self.segs.insert(k, g)
        self._set_first(g, first)
        self._set_u(g, m)
        self.repairs["gap_new"] += 1
        return "new"

    def fix(self, touched):
        """Run repairs around the touched segments until nothing is violated."""
        if not self.segs:
            return
        work = list(touched)
        guard = 0
        limit = 50 * (len(self.segs) + 10)
        while work:
            guard += 1
            if guard > limit:
                raise BoundaryError("repair loop did not settle")
            s = work.pop()
            try:
                k = self.index(s)
            except ValueError:
                continue
            if len(s.dom) >= 2 * self.d:
                self.repair_left_endpoint(s)
                work.extend(self._around(k))
                continue
            done = False
            for kk in (k - 2, k - 1, k):
                if self._gap_bad(kk):
                    self.repair_gap(self.segs[kk], self.segs[kk + 1])
                    work.extend(self._around(kk))
                    done = True
                    break
            if done:
                continue

    def _around(self, k):
        lo, hi = max(0, k - 3), min(len(self.segs), k + 4)
        return self.segs[lo:hi]

    # -- queries --------------------------------------------------------------------
    def staircase(self, seg):
        """D_s: members of Dom(s) by descending x key, each with the member of
        largest y key at or after it.  Ids rather than keys are stored, so rank
        shifts that keep the members' order leave the cache valid."""
        if seg.stair_epoch != self.epoch or seg.stair is None:
            kx, ky = self.r.kx, self.r.ky
            pts = sorted(seg.dom, key=kx, reverse=True)
            mx = [0] * len(pts)
            best, bk = None, None
            for i in range(len(pts) - 1, -1, -1):
                v = ky(pts[i])
                if best is None or v > bk:
                    best, bk = pts[i], v
                mx[i] = best
            seg.stair = (pts, mx)
            seg.stair_epoch = self.epoch
        return seg.stair

    def locate_query(self, cx, cy):
        """Segment whose Dom holds every dominator of a query with local cuts (cx, cy)."""
        if not self.segs:
            return None
        k = self.cover_index(max(cx - 1, 0))
        for kk in (k, k + 1):
            if kk < len(self.segs):
                s = self.segs[kk]
                if cx >= self.cx(s) and cy >= self.cy(s):
                    return s
        return None


def stair_report(stair, kx, ky, kxf, kyf):
    """Report staircase members with x key >= kx and y key >= ky.

    Walks by descending x and stops once the x bound fails or no remaining
    member reaches the y bound.  Returns (ids, candidates examined).
    """
    pts, mx = stair
    out = []
    seen = 0
    for i, p in enumerate(pts):
        if kyf(mx[i]) < ky or kxf(p) < kx:
            break
        seen += 1
        if kyf(p) >= ky:
            out.append(p)
    return out, seen


def build_boundary(roster: Roster, d: Optional[int] = None) -> Boundary:
    return Boundary(roster, d)


def audit_boundary(b: Boundary, true_x: List[int], true_y: List[int]):
    """Check a boundary against independently computed member orders.

    true_x / true_y are the members in ascending key order as computed by the
    caller from exact positions.  Returns a list of violation strings.
    """
    out = []
    r = b.r
    if list(r.X) != list(true_x):
        out.append("x order differs from exact positions")
    if list(r.Y) != list(true_y):
        out.append("y order differs from exact positions")
    if b.empty:
        return out
    n, d = len(true_x), b.d
    px = {p: k for k, p in enumerate(true_x)}
    py = {p: k for k, p in enumerate(true_y)}
    import numpy as np
    ids = np.array(true_x, dtype=np.int64)
    xr = np.arange(n)
    yr = np.array([py[p] for p in true_x], dtype=np.int64)

    def D(a, c):
        return int(np.count_nonzero((xr >= a) & (yr >= c)))

    segs = b.segs
    cuts = []
    for s in segs:
        a = 0 if s.first is None else (n if s.first == END else px[s.first])
        c = 0 if s.tail else py[s.u]
        cuts.append((a, c))
    if not segs[-1].tail or any(s.tail for s in segs[:-1]):
        out.append("tail misplaced")
    if segs[0].first is not None:
        out.append("first segment has a left anchor")
    for k in range(len(segs) - 1):
        if not cuts[k][0] < cuts[k + 1][0]:
            out.append(f"segment {k}: starts not increasing")
        if not cuts[k][1] > cuts[k + 1][1]:
            out.append(f"segment {k}: levels not decreasing")
    m = len(segs) - 1
    if m > 0 and not m < 8 * n / d:
        out.append(f"segment count {m} >= 8n/d")
    for k, s in enumerate(segs):
        a, c = cuts[k]
        want = set(ids[(xr >= a) & (yr >= c)].tolist())
        if want != s.dom:
            out.append(f"segment {k}: Dom differs from exact dominators")
        if len(want) > 2 * d:
            out.append(f"segment {k}: left end has {len(want)} > 2d dominators")
        if not s.tail:
            e = cuts[k + 1][0]
            rc = D(e, c)
            if rc < d:
                out.append(f"segment {k}: right end has {rc} < d dominators")
            if len(want) < d:
                out.append(f"segment {k}: left end has {len(want)} < d dominators")
    for k in range(m - 1):
        sp = cuts[k + 2][0] - cuts[k][0]
        if not 2 * sp > d:
            out.append(f"pair {k}: span {sp} <= d/2")
    return out
