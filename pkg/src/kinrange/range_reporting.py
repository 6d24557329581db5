"""Three-sided and orthogonal range reporting over rank trees.

A RankTree is a degree-4 tree over the rank positions of its members along one
axis.  Points only ever migrate between neighbouring leaves through adjacent
swaps, and such a migration is an extremal deletion plus an extremal insertion
on every node below the split, which is exactly what the decomposition engines
support.

ThreeSided is a tree over x whose internal nodes carry two reflected dominance
engines; Ortho is a tree over y whose internal nodes carry two ThreeSided trees.
Leaves carry nothing and are scanned.

Ranks and thresholds are in key space: the tree axis always ascends; the other
axis of a ThreeSided tree is negated when its open side points down.
"""
from bisect import bisect_left
from collections import Counter
from typing import List, Optional

from .boundary import Roster
from .decomposition import VDecomposition

DEG = 4
LEAF = 4


class _Node:
    __slots__ = ("roster", "kids", "parent", "built", "payload")

    def __init__(self, roster, parent):
        self.roster = roster
        self.kids: Optional[List["_Node"]] = None
        self.parent = parent
        self.built = len(roster)
        self.payload = None

    @property
    def leaf(self):
        return self.kids is None


class RankTree:
    """Tree skeleton over one axis; subclasses attach per-node payloads."""

    def __init__(self, rx, ry, axis, so=1, members=(), xs=None, ys=None, d=None, stats=None):
        self.rx, self.ry = rx, ry
        self.axis = axis
        self.so = so  # sign of the non-tree axis in the node rosters
        self.d = d
        self.stats = stats if stats is not None else Counter()
        sx, sy = (1, so) if axis == 0 else (so, 1)
        self.sx, self.sy = sx, sy
        self.leaf_of = {}
        self.touched = 0
        roster = Roster(rx, ry, sx, sy, members, xs, ys)
        self.root = self._build(roster, None)

    # -- payload hooks ------------------------------------------------------------
    def _payload(self, node, is_root):
        return None

    def _engines(self, node):
        return node.payload or ()

    # -- construction ---------------------------------------------------------------
    def _tl(self, r):
        return r.X if self.axis == 0 else r.Y

    def _ol(self, r):
        return r.Y if self.axis == 0 else r.X

    def _sub(self, prim, other_all, members):
        if self.axis == 0:
            return Roster(self.rx, self.ry, self.sx, self.sy, xs=prim,
                          ys=[p for p in other_all if p in members])
        return Roster(self.rx, self.ry, self.sx, self.sy, ys=prim,
                      xs=[p for p in other_all if p in members])

    def _build(self, roster, parent):
        node = _Node(roster, parent)
        prim = self._tl(roster)
        n = len(prim)
        if n > LEAF:
            other = self._ol(roster)
            step = -(-n // DEG)
            node.kids = []
            for lo in range(0, n, step):
                part = prim[lo:lo + step]
                node.kids.append(self._build(self._sub(part, other, set(part)), node))
        else:
            for p in prim:
                self.leaf_of[p] = node
        node.payload = self._payload(node, parent is None) if not node.leaf else None
        self.stats["rebuild_points"] += n
        return node

    def __len__(self):
        return len(self.root.roster)

    def _path(self, p):
        v = self.leaf_of[p]
        out = []
        while v is not None:
            out.append(v)
            v = v.parent
        out.reverse()
        return out

    # -- kinetic events ---------------------------------------------------------------
    def on_swap(self, axis, lo, hi):
        """lo and hi, both members, just swapped; lo moved up along `axis`."""
        pa, pb = self._path(lo), self._path(hi)
        k = 0
        while k < len(pa) and k < len(pb) and pa[k] is pb[k]:
            v = pa[k]
            v.roster.swap(axis, lo, hi)
            for e in self._engines(v):
                e.on_swap(axis, lo, hi)
            self.touched += 1
            k += 1
        if axis != self.axis or k == len(pa):
            return
        t = "xy"[axis]
        # lo leaves the left subtree, hi leaves the right one
        for v in pa[k:]:
            r = v.roster
            r.delete(lo)
            r.insert(hi)
            for e in self._engines(v):
                e.delete_kind(lo, "+" + t)
                e.insert_kind(hi, "+" + t)
            self.touched += 1
        for v in pb[k:]:
            r = v.roster
            r.delete(hi)
            r.insert(lo)
            for e in self._engines(v):
                e.delete_kind(hi, "-" + t)
                e.insert_kind(lo, "-" + t)
            self.touched += 1
        self.leaf_of[lo], self.leaf_of[hi] = pb[-1], pa[-1]

    # -- extremal insertions and deletions ----------------------------------------------
    def _descend(self, p):
        kt = self.rx if self.axis == 0 else self.ry
        key = kt[p]
        v = self.root
        path = [v]
        while not v.leaf:
            nxt = None
            for c in v.kids:
                lst = self._tl(c.roster)
                if lst and kt[lst[-1]] >= key:
                    nxt = c
                    break
            if nxt is None:
                nonempty = [c for c in v.kids if self._tl(c.roster)]
                nxt = nonempty[-1] if nonempty else v.kids[0]
            v = nxt
            path.append(v)
        return path

    def _heavy(self, v, size):
        if v.leaf:
            return size > 2 * max(v.built, LEAF)
        return size > 2 * v.built or 2 * size < v.built

    def _rebuild_at(self, v):
        parent = v.parent
        r = v.roster
        new = self._build(Roster(self.rx, self.ry, self.sx, self.sy, xs=r.X, ys=r.Y), parent)
        if parent is None:
            self.root = new
        else:
            parent.kids[parent.kids.index(v)] = new
        self.stats["tree_rebuilds"] += 1

    def insert(self, p, kind):
        """Insert p, which is extremal in the coordinate sense given by kind."""
        path = self._descend(p)
        self._apply(path, p, kind, 1)
        self.leaf_of[p] = path[-1]
        self._rebalance(path)

    def delete(self, p, kind):
        path = self._path(p)
        self._apply(path, p, kind, -1)
        del self.leaf_of[p]
        self._rebalance(path)

    def _apply(self, path, p, kind, sign):
        for v in path:
            if sign > 0:
                v.roster.insert(p)
                for e in self._engines(v):
                    e.insert_kind(p, kind)
            else:
                v.roster.delete(p)
                for e in self._engines(v):
                    e.delete_kind(p, kind)
            self.touched += 1

    def _rebalance(self, path):
        for v in path:
            if self._heavy(v, len(v.roster)):
                self._rebuild_at(v)
                return

    # used when this tree is itself a payload
    def insert_kind(self, p, kind):
        self.insert(p, kind)

    def delete_kind(self, p, kind):
        self.delete(p, kind)

    # -- queries helpers -----------------------------------------------------------------
    def _cover(self, v, lo, hi):
        """Indices (cl, ch) of the children holding tree ranks lo and hi."""
        kt = self.rx if self.axis == 0 else self.ry
        kids = v.kids
        cl, ch = None, None
        for i, c in enumerate(kids):
            lst = self._tl(c.roster)
            if not lst:
                continue
            if cl is None and kt[lst[-1]] >= lo:
                cl = i
            if kt[lst[0]] <= hi:
                ch = i
        return cl, ch

    # -- audits ----------------------------------------------------------------------------
    def audit(self, true_x=None, true_y=None, deep=False):
        """Set-system and order checks; deep also audits every node engine.

        true_x / true_y list the members in ascending coordinate order."""
        out = []
        seen = {}

        def walk(v, depth):
            if v.leaf:
                for p in self._tl(v.roster):
                    seen[p] = v
                return
            cat = []
            for c in v.kids:
                if c.parent is not v:
                    out.append("child with a stale parent pointer")
                cat.extend(self._tl(c.roster))
                walk(c, depth + 1)
            if cat != list(self._tl(v.roster)):
                out.append(f"node at depth {depth}: children do not partition its rank interval")
            if sorted(self._ol(v.roster)) != sorted(cat):
                out.append(f"node at depth {depth}: orthogonal list differs from its members")

        walk(self.root, 0)
        if seen != self.leaf_of:
            out.append("leaf ownership map is stale")
        if true_x is not None:
            tx = true_x if self.sx > 0 else true_x[::-1]
            ty = true_y if self.sy > 0 else true_y[::-1]
            r = self.root.roster
            if list(r.X) != list(tx) or list(r.Y) != list(ty):
                out.append("root order differs from exact positions")
            if deep:
                self._audit_nodes(self.root, true_x, true_y, out)
        return out

    def _audit_nodes(self, v, gx, gy, out):
        # gx, gy: members in ascending coordinate order
        mem = set(v.roster.X)
        nx = [p for p in gx if p in mem]
        ny = [p for p in gy if p in mem]
        tx = nx if self.sx > 0 else nx[::-1]
        ty = ny if self.sy > 0 else ny[::-1]
        if list(v.roster.X) != tx or list(v.roster.Y) != ty:
            out.append("node order differs from exact positions")
        for e in self._engines(v):
            if isinstance(e, RankTree):
                out.extend(e.audit(nx, ny, deep=True))
            else:
                out.extend(e.audit(nx if e.sx > 0 else nx[::-1], ny if e.sy > 0 else ny[::-1]))
        if not v.leaf:
            for c in v.kids:
                self._audit_nodes(c, gx, gy, out)

    def node_sizes(self):
        out = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(len(v.roster))
            if not v.leaf:
                stack.extend(v.kids)
        return out


class ThreeSided(RankTree):
    """Queries [a, b] x (one-sided y): so = -1 reports y <= c, so = +1 y >= c."""

    def __init__(self, rx, ry, so=-1, members=(), xs=None, ys=None, d=None, stats=None):
        super().__init__(rx, ry, 0, so, members, xs, ys, d, stats)

    def _payload(self, node, is_root):
        if is_root:
            return None  # the root is never a fringe child
        r = node.roster
        so = self.so
        R = VDecomposition(self.rx, self.ry, 1, so, xs=r.X, ys=r.Y, d=self.d, stats=self.stats)
        L = VDecomposition(self.rx, self.ry, -1, so, xs=r.X[::-1], ys=r.Y, d=self.d,
                           stats=self.stats)
        return (R, L)

    def query(self, alo, ahi, c):
        """Members with x rank in [alo, ahi] and y key (sign so) >= c.

        Returns (ids, path) where path is 'fast' unless some engine fell back."""
        out = []
        if alo > ahi:
            return out, "fast"
        rx = self.rx
        ky = self.root.roster.ky
        v = self.root
        path = "fast"
        while True:
            if v.leaf:
                out.extend(p for p in v.roster.X if alo <= rx[p] <= ahi and ky(p) >= c)
                return out, path
            cl, ch = self._cover(v, alo, ahi)
            if cl is None or ch is None or cl > ch:
                return out, path
            if cl == ch:
                v = v.kids[cl]
                continue
            break
        kids = v.kids
        for i in range(cl + 1, ch):
            Y = kids[i].roster.Y
            for t in range(len(Y) - 1, -1, -1):
                p = Y[t]
                if ky(p) < c:
                    break
                out.append(p)
        left, right = kids[cl], kids[ch]
        for child, side in ((left, 0), (right, 1)):
            if child.leaf:
                out.extend(p for p in child.roster.X if alo <= rx[p] <= ahi and ky(p) >= c)
                continue
            X = child.roster.X
            if rx[X[0]] >= alo and rx[X[-1]] <= ahi:
                Y = child.roster.Y
                for t in range(len(Y) - 1, -1, -1):
                    p = Y[t]
                    if ky(p) < c:
                        break
                    out.append(p)
                continue
            R, L = child.payload
            if side == 0:
                ids, pth = R.query(alo, c)
            else:
                ids, pth = L.query(-ahi, c)
            out.extend(ids)
            if pth != "fast":
                path = pth
        return out, path


class Ortho(RankTree):
    """Outer tree over y whose nodes hold upward and downward ThreeSided trees."""

    def __init__(self, rx, ry, members=(), xs=None, ys=None, d=None, stats=None):
        super().__init__(rx, ry, 1, 1, members, xs, ys, d, stats)

    def _payload(self, node, is_root):
        r = node.roster
        down = ThreeSided(self.rx, self.ry, -1, xs=r.X, ys=r.Y[::-1], d=self.d, stats=self.stats)
        if is_root:
            return (down,)
        up = ThreeSided(self.rx, self.ry, 1, xs=r.X, ys=r.Y, d=self.d, stats=self.stats)
        return (down, up)

    def _build(self, roster, parent):
        node = super()._build(roster, parent)
        if parent is None and node.leaf:
            node.payload = self._payload(node, True)
        return node

    def down(self, node) -> ThreeSided:
        return node.payload[0]

    def three_sided(self, alo, ahi, c):
        """x rank in [alo, ahi], y rank <= c, answered by the root's downward tree."""
        return self.root.payload[0].query(alo, ahi, -c)

    def query(self, xlo, xhi, ylo, yhi):
        out = []
        if xlo > xhi or ylo > yhi:
            return out, "fast"
        rx, ry = self.rx, self.ry
        v = self.root
        path = "fast"

        def scan(node):
            out.extend(p for p in node.roster.X
                       if xlo <= rx[p] <= xhi and ylo <= ry[p] <= yhi)

        while True:
            if v.leaf:
                scan(v)
                return out, path
            cl, ch = self._cover(v, ylo, yhi)
            if cl is None or ch is None or cl > ch:
                return out, path
            if cl == ch:
                v = v.kids[cl]
                continue
            break
        kids = v.kids

        def walk(node):
            X = node.roster.X
            i = bisect_left(X, xlo, key=rx.__getitem__)
            while i < len(X) and rx[X[i]] <= xhi:
                out.append(X[i])
                i += 1

        for i in range(cl + 1, ch):
            walk(kids[i])
        for child, side in ((kids[cl], 0), (kids[ch], 1)):
            Y = child.roster.Y
            if ry[Y[0]] >= ylo and ry[Y[-1]] <= yhi:
                walk(child)
                continue
            if child.leaf:
                scan(child)
                continue
            down, up = child.payload
            if side == 0:
                ids, pth = up.query(xlo, xhi, ylo)
            else:
                ids, pth = down.query(xlo, xhi, -yhi)
            out.extend(ids)
            if pth != "fast":
                path = pth
        return out, path


# -- module-level entry points ----------------------------------------------------------
def build_three_sided(eng, members=None, d=None, stats=None) -> ThreeSided:
    if members is None:
        members = eng.alive()
    return ThreeSided(eng.rank[0], eng.rank[1], -1, members, d=d, stats=stats)


def build_orthogonal(eng, members=None, d=None, stats=None) -> Ortho:
    if members is None:
        members = eng.alive()
    return Ortho(eng.rank[0], eng.rank[1], members, d=d, stats=stats)


def x_rank_range(eng, a, b):
    return eng.count_lt(0, a), eng.count_le(0, b) - 1


def y_rank_range(eng, a, b):
    return eng.count_lt(1, a), eng.count_le(1, b) - 1


def three_sided_query(eng, T: ThreeSided, a, b, c) -> set:
    """Ids with a <= x <= b and y <= c at the engine's current time."""
    lo, hi = x_rank_range(eng, a, b)
    ids, _ = T.query(lo, hi, 1 - eng.count_le(1, c))
    return {eng.ext[i] for i in ids}


def orthogonal_query(eng, R: Ortho, x1, x2, y1, y2) -> set:
    xlo, xhi = x_rank_range(eng, x1, x2)
    ylo, yhi = y_rank_range(eng, y1, y2)
    ids, _ = R.query(xlo, xhi, ylo, yhi)
    return {eng.ext[i] for i in ids}


def handle_event_range(T: RankTree, axis, lo, hi):
    T.on_swap(axis, lo, hi)
