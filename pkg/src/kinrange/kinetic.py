"""Event queue, kinetic sorted orders, rank counting and predecessor search."""
import heapq
from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from .core import (Event, GridParams, KIND_ORDER, MovingPoint, Trajectory,
                   as_time, validate_point)

X, Y = 0, 1
AXIS_KIND = ("x_swap", "y_swap")


class MonotonicityError(ValueError):
    pass


def order_key(tr: Trajectory, t, pid: int):
    """Order of a point on (t, t + eps): value, then right velocity, then id."""
    pc = tr.piece_at(t)
    return (pc.a * t + pc.b, pc.a, pid)


def certificate_failure(tr_lo: Trajectory, tr_hi: Trajectory, id_lo: int, id_hi: int,
                        now, t_max) -> Optional[Fraction]:
    """Earliest t >= now (t <= t_max) where lo's order key exceeds hi's."""
    if len(tr_lo.pieces) == 1 and len(tr_hi.pieces) == 1:
        p, q = tr_lo.pieces[0], tr_hi.pieces[0]
        if p.a * now + p.b > q.a * now + q.b:
            return now
        if p.a > q.a:
            r = Fraction(q.b - p.b, p.a - q.a)
            if r < now:
                # already equal and lo faster: key order is flipped at now
                return now
            return r if r <= t_max else None
        if p.a == q.a and p.b == q.b and id_lo > id_hi:
            return now
        return None
    if order_key(tr_lo, now, id_lo) > order_key(tr_hi, now, id_hi):
        return now
    cuts = sorted({c for c in tr_lo.breakpoints() + tr_hi.breakpoints() if now < c < t_max})
    bounds = [now] + cuts + [t_max]
    for i in range(len(bounds) - 1):
        s, e = bounds[i], bounds[i + 1]
        if i > 0 and order_key(tr_lo, s, id_lo) > order_key(tr_hi, s, id_hi):
            return as_time(s)
        p, q = tr_lo.piece_at(s), tr_hi.piece_at(s)
        if p.a > q.a:
            r = Fraction(q.b - p.b, p.a - q.a)
            last = i == len(bounds) - 2
            if s < r and (r < e or (last and r <= e)):
                return r
    return None


class KineticOrder:
    """One sorted order kept valid by adjacent-pair certificates."""

    def __init__(self, trajs: List[Optional[Trajectory]], ext_ids: List[int], members,
                 t_max: int, kind_rank: int, now=Fraction(0)):
        self.trajs = trajs
        self.ext = ext_ids
        self.t_max = t_max
        self.kind_rank = kind_rank
        self.now = as_time(now)
        self.order: List[int] = sorted(members, key=lambda i: order_key(trajs[i], self.now, ext_ids[i]))
        self.rank: Dict[int, int] = {}
        self._rank_array: List[int] = [-1] * len(trajs)
        for r, i in enumerate(self.order):
            self._rank_array[i] = r
        self.heap = []
        self.cert: Dict[int, tuple] = {}
        for r in range(len(self.order) - 1):
            self._schedule(self.order[r], self.order[r + 1])

    @property
    def ranks(self):
        return self._rank_array

    def _schedule(self, lo: int, hi: int):
        t = certificate_failure(self.trajs[lo], self.trajs[hi], self.ext[lo], self.ext[hi],
                                self.now, self.t_max)
        if t is None:
            self.cert.pop(lo, None)
            return
        self.cert[lo] = (t, hi)
        a, b = self.ext[lo], self.ext[hi]
        if a > b:
            a, b = b, a
        heapq.heappush(self.heap, (t, self.kind_rank, a, b, lo, hi))

    def _clear(self, lo: int):
        self.cert.pop(lo, None)

    def peek(self):
        """Next valid certificate failure entry or None."""
        h = self.heap
        while h:
            t, _, _, _, lo, hi = h[0]
            c = self.cert.get(lo)
            if c is not None and c[0] == t and c[1] == hi:
                return h[0]
            heapq.heappop(h)
        return None

    def pop_swap(self):
        """Apply the next failure; returns (lo, hi, j) where lo moved from rank j to j+1."""
        t, _, _, _, lo, hi = heapq.heappop(self.heap)
        self.now = t
        rk = self._rank_array
        j = rk[lo]
        order = self.order
        order[j], order[j + 1] = hi, lo
        rk[hi], rk[lo] = j, j + 1
        self.cert.pop(lo, None)
        if j > 0:
            self._schedule(order[j - 1], hi)
        self._schedule(hi, lo)
        if j + 2 < len(order):
            self._schedule(lo, order[j + 2])
        return lo, hi, j

    def advance_time(self, t):
        self.now = as_time(t)

    def position_rank(self, tr: Trajectory, pid: int, t) -> int:
        """Rank a new point with trajectory tr would take at time t."""
        k = order_key(tr, t, pid)
        return bisect_left(self.order, k, key=lambda i: order_key(self.trajs[i], t, self.ext[i]))

    def insert(self, i: int, t) -> int:
        self.now = as_time(t)
        r = self.position_rank(self.trajs[i], self.ext[i], self.now)
        order = self.order
        if r > 0:
            self._clear(order[r - 1])
        order.insert(r, i)
        rk = self._rank_array
        while len(rk) <= i:
            rk.append(-1)
        for k in range(r, len(order)):
            rk[order[k]] = k
        if r > 0:
            self._schedule(order[r - 1], i)
        if r + 1 < len(order):
            self._schedule(i, order[r + 1])
        return r

    def delete(self, i: int, t) -> int:
        self.now = as_time(t)
        rk = self._rank_array
        r = rk[i]
        order = self.order
        self._clear(i)
        if r > 0:
            self._clear(order[r - 1])
        del order[r]
        rk[i] = -1
        for k in range(r, len(order)):
            rk[order[k]] = k
        if 0 < r < len(order):
            self._schedule(order[r - 1], order[r])
        return r


class RankCounter:
    """Fenwick tree over rank positions: point updates and prefix sums."""

    def __init__(self, n: int):
        self.n = n
        self.tree = [0] * (n + 1)

    @classmethod
    def from_counts(cls, counts):
        rc = cls(len(counts))
        t = rc.tree
        for i, c in enumerate(counts, 1):
            t[i] += c
            j = i + (i & -i)
            if j <= rc.n:
                t[j] += t[i]
        return rc

    def add(self, r: int, delta: int = 1):
        i = r + 1
        while i <= self.n:
            self.tree[i] += delta
            i += i & -i

    def prefix(self, r: int) -> int:
        """Sum over ranks 0..r inclusive."""
        s = 0
        i = min(r + 1, self.n)
        while i > 0:
            s += self.tree[i]
            i -= i & -i
        return s

    def total(self) -> int:
        return self.prefix(self.n - 1)


class KineticEngine:
    """Points, the x/y kinetic orders, the event queue and predecessor queries."""

    def __init__(self, points, grid: GridParams, pred: str = "sorted"):
        self.grid = grid
        self.t_max = grid.t_max
        self.now = Fraction(0)
        self.points: List[Optional[MovingPoint]] = []
        self.ext: List[int] = []
        self.index: Dict[int, int] = {}
        seen = set()
        for p in points:
            if p.id in seen:
                raise ValueError(f"duplicate id {p.id}")
            seen.add(p.id)
            bad = validate_point(p, grid)
            if bad is not None:
                raise ValueError(f"point {p.id} leaves the grid: axis={bad[0]} t={bad[1]} value={bad[2]}")
            self.index[p.id] = len(self.points)
            self.points.append(p)
            self.ext.append(p.id)
        self.trajs = [[p.traj_x for p in self.points], [p.traj_y for p in self.points]]
        alive = list(range(len(self.points)))
        self.kin = [KineticOrder(self.trajs[X], self.ext, alive, self.t_max, KIND_ORDER["x_swap"]),
                    KineticOrder(self.trajs[Y], self.ext, alive, self.t_max, KIND_ORDER["y_swap"])]
        self.rank = [self.kin[X].ranks, self.kin[Y].ranks]
        self.order = [self.kin[X].order, self.kin[Y].order]
        self.bp_heap = []
        for i in alive:
            self._queue_breakpoints(i)
        self.listeners = []
        self.log: List[Event] = []
        self.keep_log = True
        self.n_swaps = 0
        self.pred_mode = pred
        self._slab = None
        # y-rank at each x position, for dominator counting
        self._yx = np.array([self.rank[Y][i] for i in self.order[X]], dtype=np.int64)

    # -- construction helpers -------------------------------------------------
    def _queue_breakpoints(self, i):
        p = self.points[i]
        for tr in (p.traj_x, p.traj_y):
            for bp in tr.breakpoints():
                if self.now < bp <= self.t_max:
                    heapq.heappush(self.bp_heap, (Fraction(bp), 2, self.ext[i], self.ext[i], i))

    @property
    def n(self) -> int:
        return len(self.order[X])

    def idx(self, pid: int) -> int:
        return self.index[pid]

    def alive(self):
        return list(self.order[X])

    def add_listener(self, obj):
        self.listeners.append(obj)

    def pending(self) -> List[Event]:
        """Valid pending events (swap certificates plus future breakpoints), sorted."""
        out = []
        for axis in (X, Y):
            k = self.kin[axis]
            for lo, (t, hi) in k.cert.items():
                out.append(Event.make(t, AXIS_KIND[axis], (self.ext[lo], self.ext[hi])))
        for t, _, a, _, i in self.bp_heap:
            out.append(Event.make(t, "breakpoint", (a,)))
        out.sort(key=lambda e: (e.time, e.rank, tuple(sorted(e.subjects))))
        return out

    # -- time -----------------------------------------------------------------
    def _next(self):
        best = None
        for axis in (Y, X):
            e = self.kin[axis].peek()
            if e is not None and (best is None or e[:4] < best[0][:4]):
                best = (e, axis)
        if self.bp_heap:
            b = self.bp_heap[0]
            if best is None or b[:4] < best[0][:4]:
                best = (b, None)
        return best

    def next_event_time(self) -> Optional[Fraction]:
        nxt = self._next()
        return None if nxt is None else nxt[0][0]

    def advance_to(self, t) -> List[Event]:
        t = as_time(t)
        if t < self.now:
            raise MonotonicityError(f"cannot move back from {self.now} to {t}")
        if t > self.t_max:
            raise ValueError(f"time {t} beyond t_max={self.t_max}")
        out = []
        while True:
            nxt = self._next()
            if nxt is None or nxt[0][0] > t:
                break
            entry, axis = nxt
            self.now = entry[0]
            if axis is None:
                heapq.heappop(self.bp_heap)
                ev = Event.make(entry[0], "breakpoint", (entry[2],))
                out.append(ev)
                continue
            lo, hi, j = self.kin[axis].pop_swap()
            self.kin[1 - axis].advance_time(self.now)
            if axis == X:
                yx = self._yx
                yx[j], yx[j + 1] = yx[j + 1], yx[j]
            else:
                yx = self._yx
                yx[self.rank[X][lo]] = j + 1
                yx[self.rank[X][hi]] = j
            self.n_swaps += 1
            ev = Event.make(entry[0], AXIS_KIND[axis], (self.ext[lo], self.ext[hi]))
            out.append(ev)
            for ls in self.listeners:
                ls.on_swap(axis, lo, hi, j)
        self.now = t
        self.kin[X].advance_time(t)
        self.kin[Y].advance_time(t)
        if self.keep_log:
            self.log.extend(out)
        return out

    # -- special updates --------------------------------------------------------
    def insert_point(self, p: MovingPoint) -> int:
        if p.id in self.index and self.points[self.index[p.id]] is not None:
            raise ValueError(f"duplicate id {p.id}")
        bad = validate_point(p, self.grid)
        if bad is not None:
            raise ValueError(f"point {p.id} leaves the grid")
        i = len(self.points)
        self.index[p.id] = i
        self.points.append(p)
        self.ext.append(p.id)
        self.trajs[X].append(p.traj_x)
        self.trajs[Y].append(p.traj_y)
        self.kin[X].insert(i, self.now)
        self.kin[Y].insert(i, self.now)
        self._queue_breakpoints(i)
        self._refresh_yx()
        self._slab = None
        return i

    def delete_point(self, i: int):
        self.kin[X].delete(i, self.now)
        self.kin[Y].delete(i, self.now)
        self.bp_heap = [b for b in self.bp_heap if b[4] != i]
        heapq.heapify(self.bp_heap)
        self.points[i] = None
        self._refresh_yx()
        self._slab = None

    def _refresh_yx(self):
        ry = self.rank[Y]
        self._yx = np.array([ry[i] for i in self.order[X]], dtype=np.int64)

    # -- coordinates ------------------------------------------------------------
    def coord(self, i: int, axis: int, t=None):
        t = self.now if t is None else t
        pc = self.trajs[axis][i].piece_at(t)
        v = pc.a * t + pc.b
        if isinstance(v, Fraction) and v.denominator == 1:
            return v.numerator
        return v

    def _check_time(self, t):
        if t is not None and as_time(t) != self.now:
            raise ValueError(f"engine is at {self.now}, not {t}; advance first")

    def count_le(self, axis: int, v, t=None) -> int:
        """Number of points with coordinate <= v."""
        self._check_time(t)
        if self.pred_mode == "slab" and axis == X:
            return self.slab().count_le(self.now, v)
        tr, now = self.trajs[axis], self.now
        return bisect_right(self.order[axis], v, key=lambda i: tr[i].piece_at(now).value(now))

    def count_lt(self, axis: int, v, t=None) -> int:
        """Number of points with coordinate < v."""
        self._check_time(t)
        if self.pred_mode == "slab" and axis == X:
            return self.slab().count_lt(self.now, v)
        tr, now = self.trajs[axis], self.now
        return bisect_left(self.order[axis], v, key=lambda i: tr[i].piece_at(now).value(now))

    def predecessor(self, axis: int, v, t=None) -> Optional[int]:
        """External id of the point with the largest coordinate <= v, or None."""
        r = self.count_le(axis, v, t)
        if r == 0:
            return None
        return self.ext[self.order[axis][r - 1]]

    def count_dominators(self, qx, qy, t=None) -> int:
        cx = self.count_lt(X, qx, t)
        cy = self.count_lt(Y, qy, t)
        return int(np.count_nonzero(self._yx[cx:] >= cy))

    def count_dominators_batch(self, probes, t=None) -> List[int]:
        """Dominator counts for many probes with one Fenwick sweep over x."""
        cuts = [(self.count_lt(X, qx, t), self.count_lt(Y, qy, t)) for qx, qy in probes]
        n = self.n
        fw = RankCounter(n)
        order = sorted(range(len(cuts)), key=lambda k: -cuts[k][0])
        out = [0] * len(cuts)
        pos = n
        for k in order:
            cx, cy = cuts[k]
            while pos > cx:
                pos -= 1
                fw.add(int(self._yx[pos]))
            out[k] = fw.total() - (fw.prefix(cy - 1) if cy > 0 else 0)
        return out

    def slab(self) -> "SlabSubdivision":
        if self._slab is None:
            self._slab = SlabSubdivision(self)
        return self._slab


def build_engine(points, grid: GridParams, pred: str = "sorted") -> KineticEngine:
    return KineticEngine(points, grid, pred)


class Sweep:
    """Sweepline over the (t, x) plane that reports crossings in time order."""

    def __init__(self, trajs: List[Trajectory], ext_ids: List[int], members, t_max: int):
        self.kin = KineticOrder(trajs, ext_ids, list(members), t_max, KIND_ORDER["x_swap"])
        self.t_max = t_max
        self.frontier = Fraction(0)
        self.done = False

    def next_intersections(self, batch: int):
        out = []
        k = self.kin
        while len(out) < batch:
            e = k.peek()
            if e is None:
                self.done = True
                self.frontier = Fraction(self.t_max)
                break
            lo, hi, j = k.pop_swap()
            self.frontier = e[0]
            a, b = k.ext[lo], k.ext[hi]
            out.append((e[0], (min(a, b), max(a, b))))
        return out


def next_intersections(sweep: Sweep, batch: int):
    return sweep.next_intersections(batch)


class ExtendFirstError(ValueError):
    pass


class SlabSubdivision:
    """Time slabs between consecutive crossings, each holding the x order.

    Slabs are appended lazily in batches of n crossings as the sweep advances.
    """

    def __init__(self, eng: KineticEngine):
        self.eng = eng
        members = list(eng.order[X])
        self.trajs = eng.trajs[X]
        self.ext = eng.ext
        self.sweep = Sweep(self.trajs, self.ext, members, eng.t_max)
        self.times: List[Fraction] = [Fraction(0)]
        self.orders: List[np.ndarray] = [np.array(self.sweep.kin.order, dtype=np.int64)]
        self.batch = max(1, len(members))

    def built_until(self):
        return Fraction(self.eng.t_max) if self.sweep.done else self.sweep.frontier

    def extend(self):
        evs = self.sweep.next_intersections(self.batch)
        # one slab per distinct event time; simultaneous swaps collapse together
        k = self.sweep.kin
        if not evs:
            return False
        # replay is already applied inside the sweep; snapshot per distinct time
        # by re-deriving orders from the recorded swaps
        base = list(self.orders[-1])
        pos = {v: r for r, v in enumerate(base)}
        idx = {e: i for i, e in enumerate(self.ext)}
        for t, (a, b) in evs:
            ia, ib = idx[a], idx[b]
            ra, rb = pos[ia], pos[ib]
            base[ra], base[rb] = ib, ia
            pos[ia], pos[ib] = rb, ra
            if self.times[-1] == t:
                self.orders[-1] = np.array(base, dtype=np.int64)
            else:
                self.times.append(t)
                self.orders.append(np.array(base, dtype=np.int64))
        return True

    def _slab_for(self, t):
        t = as_time(t)
        while not self.sweep.done and self.sweep.frontier <= t:
            self.extend()
        if t > self.eng.t_max:
            raise ExtendFirstError(f"time {t} beyond the built frontier")
        return self.orders[bisect_right(self.times, t) - 1]

    def count_le(self, t, v) -> int:
        order = self._slab_for(t)
        tr = self.trajs
        return bisect_right(order, v, key=lambda i: tr[i].piece_at(t).value(t))

    def count_lt(self, t, v) -> int:
        order = self._slab_for(t)
        tr = self.trajs
        return bisect_left(order, v, key=lambda i: tr[i].piece_at(t).value(t))

    def locate(self, t, x) -> Optional[int]:
        """Id of the trajectory immediately below (t, x), or None."""
        r = self.count_le(t, x)
        if r == 0:
            return None
        return self.ext[int(self._slab_for(t)[r - 1])]


def locate(sub: SlabSubdivision, t, x) -> Optional[int]:
    return sub.locate(t, x)
