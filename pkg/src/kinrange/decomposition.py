"""Layered point sets that absorb insertions and deletions at the extremes.

HDecomposition splits its members along x into sets H_2, H_3, ..., H_m of
roughly 4^i points each, the rightmost points in H_2.  Each set is a DCore
(roster plus boundary) and all sets share one fallback tree G.  Operations that
touch the right end of x only ever rebuild the tiny H_2; operations at the left
end of x or the low end of y go to one set incrementally.

VDecomposition does the same along y with HDecompositions as its sets, which
adds the y-extremal operations.

Everything is in key space: keys are the engine's ranks, negated on reflected
axes, and "right"/"up" mean larger keys.
"""
from bisect import bisect_left
from collections import Counter
from heapq import merge

from .boundary import Roster
from .dominance import DCore, GlobalStructure


class PreconditionError(ValueError):
    """An extremal operation was requested for a point that is not extremal."""


def kind_method(kind: str, sx: int, sy: int, verb: str) -> str:
    """Map a coordinate-level extremal kind ('+x', '-y', ...) to the method
    name for a structure with the given key signs."""
    sign = sx if kind[1] == "x" else sy
    up = (kind[0] == "+") == (sign > 0)
    return f"{verb}_{'plus' if up else 'minus'}_{kind[1]}"


def lower_bound(i, last):
    if last:
        return 4 ** (i - 1)
    return 2 ** (2 * i - 1)


def upper_bound(i, last):
    if last:
        return 4 ** (i + 1) + 4 ** i
    return 2 ** (2 * i + 2)


def split_trigger(i):
    # a non-last set is re-split well before its condition bound is reached
    return 2 ** (2 * i + 1)


def chunk_sizes(n):
    """Set sizes for a fresh build, H_2 first."""
    sizes = []
    i = 2
    rem = n
    while rem > 4 ** (i + 1) + 4 ** i:
        sizes.append(4 ** i)
        rem -= 4 ** i
        i += 1
    sizes.append(rem)
    return sizes


class _Layers:
    """Shared bookkeeping: set list, ownership map, the repair table."""

    axis = 0  # primary axis the sets are split along

    def __init__(self, rx, ry, sx, sy, d, stats):
        self.rx, self.ry, self.sx, self.sy = rx, ry, sx, sy
        self.d = d
        self.stats = stats if stats is not None else Counter()
        self.sets = []
        self.where = {}
        self.repairs = Counter()

    # subclasses provide _make(xs, ys) and the set's sorted lists
    def _prim(self, s):
        return s.roster.X if self.axis == 0 else s.roster.Y

    def _sec(self, s):
        return s.roster.Y if self.axis == 0 else s.roster.X

    def __len__(self):
        return len(self.roster)

    @property
    def m(self):
        return len(self.sets) + 1

    def _build_sets(self):
        r = self.roster
        prim = r.X if self.axis == 0 else r.Y
        sec = r.Y if self.axis == 0 else r.X
        sizes = chunk_sizes(len(prim))
        owner = {}
        hi = len(prim)
        chunks = []
        for k, sz in enumerate(sizes):
            part = prim[hi - sz:hi]
            for p in part:
                owner[p] = k
            chunks.append(part)
            hi -= sz
        secs = [[] for _ in sizes]
        for p in sec:
            secs[owner[p]].append(p)
        self.sets = [self._make_oriented(c, s2) for c, s2 in zip(chunks, secs)]
        self.where = {}
        for s in self.sets:
            for p in self._prim(s):
                self.where[p] = s

    def _make_oriented(self, prim, sec):
        if self.axis == 0:
            return self._make(prim, sec)
        return self._make(sec, prim)

    def _kp(self):
        r = self.roster
        return r.kx if self.axis == 0 else r.ky

    def _ks(self):
        r = self.roster
        return r.ky if self.axis == 0 else r.kx

    def _resplit(self, k, top_count, width=2):
        """x-split the union of sets k..k+width-1 (clipped) into two sets.

        The new set k gets the top_count points with the largest primary keys.
        An empty remainder is dropped.
        """
        kp, ks = self._kp(), self._ks()
        group = self.sets[k:k + width]
        prim = list(merge(*[self._prim(s) for s in group], key=kp))
        sec = list(merge(*[self._sec(s) for s in group], key=ks))
        top_count = min(top_count, len(prim))
        cut = len(prim) - top_count
        top = set(prim[cut:])
        parts = [(prim[cut:], [p for p in sec if p in top]),
                 (prim[:cut], [p for p in sec if p not in top])]
        new = [self._make_oriented(a, b) for a, b in parts if a]
        if not new:
            new = [self._make_oriented([], [])]
        self.sets[k:k + width] = new
        for s in new:
            for p in self._prim(s):
                self.where[p] = s

    def _merge_last(self):
        k = len(self.sets) - 2
        self._resplit(k, len(self._prim(self.sets[k])) + len(self._prim(self.sets[k + 1])))

    def _overlaps(self, k):
        """(c2, c3) for the pair (set k-1, set k): c2 is how many points of set
        k-1 the top point of set k overlaps, c3 how many points of set k
        overlap set k-1."""
        kp = self._kp()
        up, lo = self._prim(self.sets[k - 1]), self._prim(self.sets[k])
        if not up or not lo:
            return 0, 0
        c2 = bisect_left(up, kp(lo[-1]), key=kp)
        c3 = len(lo) - bisect_left(lo, kp(up[0]), key=kp)
        return c2, c3

    def _violation(self):
        sets = self.sets
        last = len(sets) - 1
        for k, s in enumerate(sets):
            i = k + 2
            n = len(self._prim(s))
            if k < last:
                if n < lower_bound(i, False) or n > split_trigger(i):
                    return "size", k
            else:
                if n > upper_bound(i, True):
                    return "grow", k
                if k > 0 and n < lower_bound(i, True):
                    return "shrink", k
        for k in range(1, len(sets)):
            i = k + 2
            c2, c3 = self._overlaps(k)
            if c2 > 2 ** (2 * i - 4) or c3 > 2 ** (2 * i - 3):
                return "overlap", k
        return None

    def restore(self):
        """Apply the repair table until conditions 1-3 hold again."""
        guard = 0
        while True:
            v = self._violation()
            if v is None:
                return
            guard += 1
            if guard > 64 + 4 * len(self.sets):
                raise RuntimeError(f"decomposition repair did not settle: {v}")
            what, k = v
            i = k + 2
            self.repairs[what] += 1
            if what == "size":
                self._resplit(k, 4 ** i)
            elif what == "grow":
                self._resplit(k, 4 ** i, width=1)
            elif what == "shrink":
                prev = len(self._prim(self.sets[k - 1]))
                if prev + len(self._prim(self.sets[k])) <= 3 * 4 ** (i - 1):
                    self._merge_last()
                else:
                    self._resplit(k - 1, 4 ** (i - 1))
            else:
                self._resplit(k - 1, len(self._prim(self.sets[k - 1])))

    def maintain_partition(self):
        self.restore()

    def _route_low_sec(self, p):
        """Smallest set whose lowest primary key is below p's, else the last."""
        kp = self._kp()
        v = kp(p)
        for s in self.sets:
            prim = self._prim(s)
            if prim and kp(prim[0]) < v:
                return s
        return self.sets[-1]

    def _rebuild_with(self, s, add=None, drop=None):
        k = self.sets.index(s)
        kp, ks = self._kp(), self._ks()
        prim, sec = list(self._prim(s)), list(self._sec(s))
        if drop is not None:
            prim.remove(drop)
            sec.remove(drop)
            self.where.pop(drop, None)
        if add is not None:
            prim.insert(bisect_left(prim, kp(add), key=kp), add)
            sec.insert(bisect_left(sec, ks(add), key=ks), add)
        new = self._make_oriented(prim, sec)
        self.sets[k] = new
        for p in prim:
            self.where[p] = new

    # precondition checks against the combined roster
    def _check(self, ok, what, p):
        if not ok:
            raise PreconditionError(f"{what}: point {p} is not extremal")

    def _is_max(self, lst, key, p, exclude=False):
        rest = [q for q in lst[-2:] if q != p] if exclude else lst[-1:]
        return not rest or key(p) > key(rest[-1])

    def _is_min(self, lst, key, p, exclude=False):
        rest = [q for q in lst[:2] if q != p] if exclude else lst[:1]
        return not rest or key(p) < key(rest[0])

    def audit_conditions(self):
        """Conditions 1-3 and the no-skip consequence; list of violation strings."""
        out = []
        sets = self.sets
        last = len(sets) - 1
        name = "H" if self.axis == 0 else "V"
        kp = self._kp()
        total = 0
        for k, s in enumerate(sets):
            i = k + 2
            n = len(self._prim(s))
            total += n
            lo, hi = lower_bound(i, k == last), upper_bound(i, k == last)
            if last == 0:
                lo = 0  # a lone set may be arbitrarily small
            if not lo <= n <= hi:
                out.append(f"{name}_{i}: size {n} outside [{lo}, {hi}]")
        for k in range(1, len(sets)):
            i = k + 2
            c2, c3 = self._overlaps(k)
            if c2 > 2 ** (2 * i - 4):
                out.append(f"{name}_{i}: a point overlaps {c2} points of {name}_{i - 1}")
            if c3 > 2 ** (2 * i - 3):
                out.append(f"{name}_{i}: {c3} points overlap {name}_{i - 1}")
        for k in range(2, len(sets)):
            a, b = self._prim(sets[k]), self._prim(sets[k - 2])
            if a and b and kp(a[-1]) > kp(b[0]):
                out.append(f"{name}_{k + 2} overlaps {name}_{k}")
        if total != len(self.roster):
            out.append(f"{name}: sets hold {total} points, roster {len(self.roster)}")
        for s in sets:
            for p in self._prim(s):
                if self.where.get(p) is not s:
                    out.append(f"{name}: ownership of {p} is stale")
                    break
        return out


class HDecomposition(_Layers):
    axis = 0

    def __init__(self, rx, ry, sx=1, sy=1, members=(), xs=None, ys=None, d=None, stats=None):
        super().__init__(rx, ry, sx, sy, d, stats)
        self.roster = Roster(rx, ry, sx, sy, members, xs, ys)
        self.g = GlobalStructure(rx, ry, sx, sy, self.roster.X)
        self.stats["rebuild_points"] += len(self.roster)
        self._build_sets()

    def _make(self, xs, ys):
        return DCore(self.rx, self.ry, self.sx, self.sy, xs=xs, ys=ys, d=self.d, stats=self.stats)

    def on_swap(self, axis, p, q):
        """Both p and q are members and just swapped on the given axis."""
        self.roster.swap(axis, p, q)
        a, b = self.where[p], self.where[q]
        if axis == 0:
            self.g.swap_x(p, q)
        else:
            self.g.swap_y(p, q)
        if a is b:
            a.swap(axis, p, q)
        elif axis == 0:
            self.restore()

    # -- extremal operations --------------------------------------------------------
    def insert_plus_x(self, p):
        r = self.roster
        self._check(self._is_max(r.X, r.kx, p), "insert+x", p)
        r.insert(p)
        self.g.insert(p)
        self._rebuild_with(self.sets[0], add=p)
        self.restore()

    def delete_plus_x(self, p):
        r = self.roster
        self._check(r.X and r.X[-1] == p, "delete+x", p)
        self.g.delete(p)
        r.delete(p)
        self._rebuild_with(self.where[p], drop=p)
        self.restore()

    def insert_minus_x(self, p):
        r = self.roster
        self._check(self._is_min(r.X, r.kx, p), "insert-x", p)
        r.insert(p)
        self.g.insert(p)
        s = self.sets[-1]
        s.insert_low(p)
        self.where[p] = s
        self.restore()

    def delete_minus_x(self, p):
        r = self.roster
        self._check(r.X and r.X[0] == p, "delete-x", p)
        self.g.delete(p)
        r.delete(p)
        self.where.pop(p).delete_low(p)
        self.restore()

    def insert_minus_y(self, p):
        r = self.roster
        self._check(self._is_min(r.Y, r.ky, p), "insert-y", p)
        s = self._route_low_sec(p)
        r.insert(p)
        self.g.insert(p)
        s.insert_low(p)
        self.where[p] = s
        self.restore()

    def delete_minus_y(self, p):
        r = self.roster
        self._check(r.Y and r.Y[0] == p, "delete-y", p)
        self.g.delete(p)
        r.delete(p)
        self.where.pop(p).delete_low(p)
        self.restore()

    # -- queries --------------------------------------------------------------------
    def query(self, a, b):
        """Members with x key >= a and y key >= b; returns (ids, path)."""
        kx, ky = self.roster.kx, self.roster.ky
        sets = self.sets
        j = len(sets)
        for k, s in enumerate(sets):
            X = s.roster.X
            if X and kx(X[0]) < a:
                j = k
                break
        out = []
        for f in range(j):
            Y = sets[f].roster.Y
            for t in range(len(Y) - 1, -1, -1):
                p = Y[t]
                if ky(p) < b:
                    break
                out.append(p)
        for f in (j, j + 1):
            if f < len(sets):
                res = sets[f].fast_query(a, b)
                if res is None:
                    self.stats["h_fallback"] += 1
                    ids, _ = self.g.report(a, b)
                    return ids, "fallback"
                out.extend(res[0])
        self.stats["h_fast"] += 1
        return out, "fast"

    def audit(self, true_x=None, true_y=None):
        out = self.audit_conditions()
        gm = self.g.members()
        if gm != self.roster.X:
            out.append("H: G members differ from the roster")
        if true_x is not None:
            if list(self.roster.X) != list(true_x) or list(self.roster.Y) != list(true_y):
                out.append("H: roster order differs from exact positions")
            for s in self.sets:
                mem = set(s.roster.X)
                tx = [p for p in true_x if p in mem]
                ty = [p for p in true_y if p in mem]
                out.extend(s.audit(tx, ty))
        return out


def h_query(h: HDecomposition, a, b):
    return h.query(a, b)[0]


def insert_plus_x(h, p):
    h.insert_plus_x(p)


def delete_plus_x(h, p):
    h.delete_plus_x(p)


def insert_minus_x(h, p):
    h.insert_minus_x(p)


def delete_minus_x(h, p):
    h.delete_minus_x(p)


def maintain_partition(h):
    h.maintain_partition()


class VDecomposition(_Layers):
    """Sets V_2..V_m split along y, each an HDecomposition E_i."""

    axis = 1

    def __init__(self, rx, ry, sx=1, sy=1, members=(), xs=None, ys=None, d=None, stats=None):
        super().__init__(rx, ry, sx, sy, d, stats)
        self.roster = Roster(rx, ry, sx, sy, members, xs, ys)
        self._build_sets()

    def _make(self, xs, ys):
        return HDecomposition(self.rx, self.ry, self.sx, self.sy, xs=xs, ys=ys, d=self.d,
                              stats=self.stats)

    def on_swap(self, axis, p, q):
        self.roster.swap(axis, p, q)
        a, b = self.where[p], self.where[q]
        if a is b:
            a.on_swap(axis, p, q)
        elif axis == 1:
            self.restore()

    # -- y-extremal operations --------------------------------------------------------
    def insert_plus_y(self, p):
        r = self.roster
        self._check(self._is_max(r.Y, r.ky, p), "insert+y", p)
        r.insert(p)
        self._rebuild_with(self.sets[0], add=p)
        self.restore()

    def delete_plus_y(self, p):
        r = self.roster
        self._check(r.Y and r.Y[-1] == p, "delete+y", p)
        r.delete(p)
        self._rebuild_with(self.where[p], drop=p)
        self.restore()

    def insert_minus_y(self, p):
        r = self.roster
        self._check(self._is_min(r.Y, r.ky, p), "insert-y", p)
        r.insert(p)
        s = self.sets[-1]
        s.insert_minus_y(p)
        self.where[p] = s
        self.restore()

    def delete_minus_y(self, p):
        r = self.roster
        self._check(r.Y and r.Y[0] == p, "delete-y", p)
        r.delete(p)
        self.where.pop(p).delete_minus_y(p)
        self.restore()

    # -- x-extremal operations, routed by the sets' lowest y ----------------------------
    def insert_plus_x(self, p):
        r = self.roster
        self._check(self._is_max(r.X, r.kx, p), "insert+x", p)
        s = self._route_low_sec(p)
        r.insert(p)
        s.insert_plus_x(p)
        self.where[p] = s
        self.restore()

    def delete_plus_x(self, p):
        r = self.roster
        self._check(r.X and r.X[-1] == p, "delete+x", p)
        r.delete(p)
        self.where.pop(p).delete_plus_x(p)
        self.restore()

    def insert_minus_x(self, p):
        r = self.roster
        self._check(self._is_min(r.X, r.kx, p), "insert-x", p)
        s = self._route_low_sec(p)
        r.insert(p)
        s.insert_minus_x(p)
        self.where[p] = s
        self.restore()

    def delete_minus_x(self, p):
        r = self.roster
        self._check(r.X and r.X[0] == p, "delete-x", p)
        r.delete(p)
        self.where.pop(p).delete_minus_x(p)
        self.restore()

    def insert_kind(self, p, kind):
        getattr(self, kind_method(kind, self.sx, self.sy, "insert"))(p)

    def delete_kind(self, p, kind):
        getattr(self, kind_method(kind, self.sx, self.sy, "delete"))(p)

    def query(self, a, b):
        kx, ky = self.roster.kx, self.roster.ky
        sets = self.sets
        j = len(sets)
        for k, s in enumerate(sets):
            Y = s.roster.Y
            if Y and ky(Y[0]) < b:
                j = k
                break
        out = []
        for f in range(j):
            X = sets[f].roster.X
            for t in range(len(X) - 1, -1, -1):
                p = X[t]
                if kx(p) < a:
                    break
                out.append(p)
        path = "fast"
        for f in (j, j + 1):
            if f < len(sets):
                ids, pth = sets[f].query(a, b)
                out.extend(ids)
                if pth != "fast":
                    path = pth
        return out, path

    def audit(self, true_x=None, true_y=None):
        out = self.audit_conditions()
        for s in self.sets:
            if true_x is None:
                out.extend(s.audit())
            else:
                mem = set(s.roster.X)
                out.extend(s.audit([p for p in true_x if p in mem], [p for p in true_y if p in mem]))
        if true_x is not None:
            if list(self.roster.X) != list(true_x) or list(self.roster.Y) != list(true_y):
                out.append("V: roster order differs from exact positions")
        return out


def v_query(v: VDecomposition, a, b):
    return v.query(a, b)[0]


def insert_plus_y(v, p):
    v.insert_plus_y(p)


def delete_plus_y(v, p):
    v.delete_plus_y(p)


def insert_minus_y(v, p):
    v.insert_minus_y(p)


def delete_minus_y(v, p):
    v.delete_minus_y(p)
