"""Moving points, trajectories, exact times and query shapes."""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

RationalTime = Fraction


def as_time(v) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string into an exact time."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class GridParams:
    U: int
    t_max: int

    def __post_init__(self):
        if self.U < 2:
            raise ValueError("U must be at least 2")
        if self.t_max < 1:
            raise ValueError("t_max must be at least 1")


@dataclass(frozen=True)
class TrajectoryPiece:
    t_start: int
    a: int
    b: int

    def value(self, t):
        return self.a * t + self.b


@dataclass(frozen=True)
class Trajectory:
    pieces: Tuple[TrajectoryPiece, ...]

    def __post_init__(self):
        ps = tuple(self.pieces)
        object.__setattr__(self, "pieces", ps)
        if not ps:
            raise ValueError("trajectory needs at least one piece")
        if ps[0].t_start != 0:
            raise ValueError("first piece must start at t=0")
        for p, q in zip(ps, ps[1:]):
            if q.t_start <= p.t_start:
                raise ValueError("piece start times must increase")
            if p.value(q.t_start) != q.value(q.t_start):
                raise ValueError(f"trajectory not continuous at t={q.t_start}")

    @classmethod
    def linear(cls, a: int, b: int) -> "Trajectory":
        return cls((TrajectoryPiece(0, a, b),))

    @classmethod
    def from_tuples(cls, items) -> "Trajectory":
        return cls(tuple(TrajectoryPiece(*it) for it in items))

    def piece_index(self, t) -> int:
        # last piece whose start is <= t
        ps = self.pieces
        lo, hi = 0, len(ps)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ps[mid].t_start <= t:
                lo = mid
            else:
                hi = mid
        return lo

    def piece_at(self, t) -> TrajectoryPiece:
        return self.pieces[self.piece_index(t)]

    def right_slope(self, t) -> int:
        """Velocity on (t, t + eps)."""
        return self.piece_at(t).a

    def breakpoints(self):
        return [p.t_start for p in self.pieces[1:]]


@dataclass(frozen=True)
class MovingPoint:
    id: int
    traj_x: Trajectory
    traj_y: Trajectory

    def traj(self, axis: int) -> Trajectory:
        return self.traj_x if axis == 0 else self.traj_y

    def pos(self, t):
        return position_at(self.traj_x, t), position_at(self.traj_y, t)


def static_point(pid: int, x: int, y: int) -> MovingPoint:
    return MovingPoint(pid, Trajectory.linear(0, x), Trajectory.linear(0, y))


def linear_point(pid: int, ax: int, bx: int, ay: int, by: int) -> MovingPoint:
    return MovingPoint(pid, Trajectory.linear(ax, bx), Trajectory.linear(ay, by))


def position_at(traj: Trajectory, t, t_max: Optional[int] = None):
    """Exact coordinate of the trajectory at time t (int or Fraction)."""
    if t < 0 or (t_max is not None and t > t_max):
        raise DomainError(f"time {t} outside [0, {t_max}]")
    v = traj.piece_at(t).value(t)
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def _piece_intervals(tr1: Trajectory, tr2: Trajectory, start, stop):
    """Merged intervals [lo, hi) over which both trajectories are single pieces."""
    cuts = sorted({c for c in tr1.breakpoints() + tr2.breakpoints() if start < c < stop})
    bounds = [start] + cuts + [stop]
    for lo, hi in zip(bounds, bounds[1:]):
        yield lo, hi, tr1.piece_at(lo), tr2.piece_at(lo)


def swap_time(tr1: Trajectory, tr2: Trajectory, after, t_max: int) -> Optional[Fraction]:
    """Earliest t in (after, t_max] where the two positions coincide.

    Overlapping identical pieces do not count as a crossing.
    """
    after = as_time(after)
    if after >= t_max:
        return None
    for lo, hi, p1, p2 in _piece_intervals(tr1, tr2, after, t_max):
        da = p1.a - p2.a
        db = p2.b - p1.b
        if da == 0:
            continue
        r = Fraction(db, da)
        if r > after and lo <= r <= hi:
            return r
    return None


def validate_point(p: MovingPoint, g: GridParams):
    """None if both trajectories stay in [0, U) on [0, t_max], else (axis, t, value)."""
    for axis, tr in ((0, p.traj_x), (1, p.traj_y)):
        for i, pc in enumerate(tr.pieces):
            if pc.t_start > g.t_max:
                break
            end = tr.pieces[i + 1].t_start if i + 1 < len(tr.pieces) else g.t_max
            end = min(end, g.t_max)
            v0, v1 = pc.value(pc.t_start), pc.value(end)
            if 0 <= v0 < g.U and 0 <= v1 < g.U:
                continue
            # first integer time where the linear piece leaves the grid
            for tt in range(pc.t_start, end + 1):
                v = pc.value(tt)
                if not 0 <= v < g.U:
                    return axis, tt, v
            # only non-integer excursions (cannot happen with integer data)
            return axis, end, v1
    return None


@dataclass(frozen=True)
class QueryShape:
    kind: str  # 'dominance' | 'three_sided' | 'rect'
    bounds: tuple

    def __post_init__(self):
        k, b = self.kind, self.bounds
        if k == "dominance":
            if len(b) != 2:
                raise ValueError("dominance takes (qx, qy)")
        elif k == "three_sided":
            if len(b) != 3 or b[0] > b[1]:
                raise ValueError("three_sided takes (a, b, c) with a <= b")
        elif k == "rect":
            if len(b) != 4 or b[0] > b[1] or b[2] > b[3]:
                raise ValueError("rect takes (x1, x2, y1, y2) with x1 <= x2, y1 <= y2")
        else:
            raise ValueError(f"unknown query kind {k!r}")

    def contains(self, x, y) -> bool:
        b = self.bounds
        if self.kind == "dominance":
            return x >= b[0] and y >= b[1]
        if self.kind == "three_sided":
            return b[0] <= x <= b[1] and y <= b[2]
        return b[0] <= x <= b[1] and b[2] <= y <= b[3]


def dominance(qx, qy) -> QueryShape:
    return QueryShape("dominance", (qx, qy))


def three_sided(a, b, c) -> QueryShape:
    return QueryShape("three_sided", (a, b, c))


def rect(x1, x2, y1, y2) -> QueryShape:
    return QueryShape("rect", (x1, x2, y1, y2))


KIND_ORDER = {"y_swap": 0, "x_swap": 1, "breakpoint": 2}


@dataclass(frozen=True, order=True)
class Event:
    """A kinetic event; subjects are the two swapped ids (lower-before first) or one id."""
    time: Fraction
    rank: int = field(repr=False)
    subjects: tuple
    kind: str = field(compare=False, default="x_swap")

    @classmethod
    def make(cls, time, kind, subjects):
        return cls(as_time(time), KIND_ORDER[kind], tuple(subjects), kind)

    def key(self):
        """(time, kind, unordered pair) used for multiset comparisons."""
        return (self.time, self.kind, tuple(sorted(self.subjects)))
