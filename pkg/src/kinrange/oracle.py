"""Brute-force ground truth.

Nothing here touches the indexed structures: positions are evaluated straight
from the trajectory pieces and every answer is a full scan.
"""
from fractions import Fraction
from typing import Dict, Iterable, List

import numpy as np

from .core import Event, GridParams, MovingPoint, QueryShape


def _piece(tr, t):
    cur = tr.pieces[0]
    for pc in tr.pieces:
        if pc.t_start <= t:
            cur = pc
        else:
            break
    return cur


def _left_piece(tr, t):
    # piece active on (t - eps, t)
    cur = tr.pieces[0]
    for pc in tr.pieces:
        if pc.t_start < t:
            cur = pc
        else:
            break
    return cur


def value(tr, t):
    pc = _piece(tr, t)
    return pc.a * t + pc.b


class OracleSet:
    def __init__(self, points: Iterable[MovingPoint], grid: GridParams):
        self.points: Dict[int, MovingPoint] = {p.id: p for p in points}
        self.grid = grid

    def add(self, p: MovingPoint):
        self.points[p.id] = p

    def remove(self, pid: int):
        del self.points[pid]

    def positions(self, t):
        return {pid: (value(p.traj_x, t), value(p.traj_y, t)) for pid, p in self.points.items()}

    def sorted_ids(self, axis: int, t) -> List[int]:
        """Ids ordered as on (t, t + eps): value, then right velocity, then id."""
        def k(pid):
            tr = self.points[pid].traj(axis)
            pc = _piece(tr, t)
            return (pc.a * t + pc.b, pc.a, pid)
        return sorted(self.points, key=k)

    def scaled_keys(self, axis: int, t: Fraction):
        """Integer arrays (value * den, slope) for every id, in id order of `ids`.

        Scaling by the time denominator keeps the audit path in exact integers.
        """
        t = Fraction(t)
        num, den = t.numerator, t.denominator
        ids = sorted(self.points)
        vals, slopes = [], []
        for pid in ids:
            pc = _piece(self.points[pid].traj(axis), t)
            vals.append(pc.a * num + pc.b * den)
            slopes.append(pc.a)
        return ids, vals, slopes


def oracle_query(o: OracleSet, shape: QueryShape, t) -> set:
    out = set()
    for pid, (x, y) in o.positions(t).items():
        if shape.contains(x, y):
            out.add(pid)
    return out


def oracle_dominators(o: OracleSet, qx, qy, t) -> int:
    n = 0
    for x, y in o.positions(t).values():
        if x >= qx and y >= qy:
            n += 1
    return n


def _pair_flips(tr1, tr2, id1, id2, t_max):
    """Times in (0, t_max] where the (value, slope, id) order of the pair flips."""
    cands = set(tr1.breakpoints()) | set(tr2.breakpoints())
    starts = sorted({0} | cands)
    for i, s in enumerate(starts):
        e = starts[i + 1] if i + 1 < len(starts) else t_max
        p1, p2 = _piece(tr1, s), _piece(tr2, s)
        if p1.a != p2.a:
            r = Fraction(p2.b - p1.b, p1.a - p2.a)
            if s <= r <= e:
                cands.add(r)
    out = []
    for c in sorted(cands):
        if not 0 < c <= t_max:
            continue
        v1, v2 = value(tr1, c), value(tr2, c)
        if v1 != v2:
            continue
        l1, l2 = _left_piece(tr1, c).a, _left_piece(tr2, c).a
        r1, r2 = _piece(tr1, c).a, _piece(tr2, c).a
        # order just before c: larger left slope was lower
        before = (-l1, id1) < (-l2, id2)
        after = (r1, id1) < (r2, id2)
        if before != after:
            out.append(c)
    return out


def _linear_flips(ids, trajs, t_max):
    """Pairwise flips among single-piece trajectories, by integer arithmetic.

    Two lines with different slopes meeting at t in (0, t_max] always flip
    their (value, slope, id) order there; parallel lines never do."""
    a = np.array([tr.pieces[0].a for tr in trajs], dtype=np.int64)
    b = np.array([tr.pieces[0].b for tr in trajs], dtype=np.int64)
    i, j = np.triu_indices(len(ids), 1)
    da = a[i] - a[j]
    db = b[j] - b[i]
    hit = (da != 0) & (da * db > 0) & (np.abs(db) <= t_max * np.abs(da))
    out = []
    for u, v, num, den in zip(i[hit].tolist(), j[hit].tolist(), db[hit].tolist(), da[hit].tolist()):
        out.append((Fraction(num, den), ids[u], ids[v]))
    return out


def oracle_events(o: OracleSet) -> List[Event]:
    """Every pairwise swap on both axes over (0, t_max], sorted."""
    ids = sorted(o.points)
    evs = []
    for axis, kind in ((0, "x_swap"), (1, "y_swap")):
        trajs = [o.points[p].traj(axis) for p in ids]
        lin = [k for k, tr in enumerate(trajs) if len(tr.pieces) == 1]
        for c, a, b in _linear_flips([ids[k] for k in lin], [trajs[k] for k in lin], o.grid.t_max):
            evs.append(Event.make(c, kind, (a, b)))
        multi = set(range(len(ids))) - set(lin)
        for i, a in enumerate(ids):
            for k in range(i + 1, len(ids)):
                if i not in multi and k not in multi:
                    continue
                for c in _pair_flips(trajs[i], trajs[k], a, ids[k], o.grid.t_max):
                    evs.append(Event.make(c, kind, (a, ids[k])))
    evs.sort(key=lambda e: (e.time, e.rank, e.subjects))
    return evs


def oracle_event_keys(o: OracleSet):
    return sorted(e.key() for e in oracle_events(o))


def dominator_ids_np(xr: np.ndarray, yr: np.ndarray, cx: int, cy: int) -> np.ndarray:
    """Indices i with xr[i] >= cx and yr[i] >= cy (rank-space helper for audits)."""
    return np.nonzero((xr >= cx) & (yr >= cy))[0]
