"""Trace parsing, scenario execution, auditing and benchmarks.

Trace format, one record per line, '#' starts a comment:

    GRID <U> <tmax>
    POINT <id> <npieces> { <t_start> <ax> <bx> <ay> <by> }*
    QUERY <t> DOM <x> <y>
    QUERY <t> 3S <a> <b> <c>
    QUERY <t> RECT <x1> <x2> <y1> <y2>
    OP <t> <INS+X|DEL+X|INS-X|DEL-X|INS+Y|DEL+Y|INS-Y|DEL-Y> <id> [<npieces> pieces...]
    AUDIT <t>

Query coordinates are integers or halves written like 5/2.
"""
import json
import random
import statistics
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .core import (GridParams, MovingPoint, QueryShape, Trajectory, TrajectoryPiece,
                   validate_point)
from .dominance import DominanceEngine
from .kinetic import build_engine
from .oracle import OracleSet, _piece, oracle_events, oracle_query
from .range_reporting import Ortho, x_rank_range, y_rank_range

OP_KINDS = ("INS+X", "DEL+X", "INS-X", "DEL-X", "INS+Y", "DEL+Y", "INS-Y", "DEL-Y")
QUERY_ARITY = {"DOM": 2, "3S": 3, "RECT": 4}
SHAPE_NAME = {"DOM": "dominance", "3S": "three_sided", "RECT": "rect"}


class TraceError(ValueError):
    def __init__(self, line, col, msg, kind="syntax"):
        super().__init__(f"{kind} error at line {line}, col {col}: {msg}")
        self.line, self.col, self.kind = line, col, kind


@dataclass
class Command:
    kind: str  # QUERY | OP | AUDIT
    t: int
    line: int = 0
    shape: Optional[QueryShape] = None
    op: Optional[str] = None
    pid: Optional[int] = None
    point: Optional[MovingPoint] = None


@dataclass
class Scenario:
    grid: GridParams
    points: List[MovingPoint]
    commands: List[Command] = field(default_factory=list)

    @property
    def queries(self):
        return [c for c in self.commands if c.kind == "QUERY"]


# -- parsing ------------------------------------------------------------------------

class _Line:
    def __init__(self, no, text):
        self.no = no
        self.toks = []
        col = 0
        for part in text.split():
            col = text.index(part, col)
            self.toks.append((part, col + 1))
            col += len(part)
        self.pos = 0

    def err(self, msg, kind="syntax", at=None):
        k = self.pos if at is None else at
        col = self.toks[min(k, len(self.toks) - 1)][1] if self.toks else 1
        if k >= len(self.toks) and self.toks:
            last, c = self.toks[-1]
            col = c + len(last)
        return TraceError(self.no, col, msg, kind)

    def word(self, what):
        if self.pos >= len(self.toks):
            raise self.err(f"expected {what}")
        tok = self.toks[self.pos][0]
        self.pos += 1
        return tok

    def int(self, what):
        tok = self.word(what)
        try:
            return int(tok)
        except ValueError:
            raise self.err(f"expected integer {what}, got {tok!r}", at=self.pos - 1) from None

    def coord(self, what):
        tok = self.word(what)
        try:
            v = Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise self.err(f"expected coordinate {what}, got {tok!r}", at=self.pos - 1) from None
        if v.denominator not in (1, 2):
            raise self.err(f"coordinate {tok} is not an integer or half-integer", at=self.pos - 1)
        return v.numerator if v.denominator == 1 else v

    def done(self):
        if self.pos < len(self.toks):
            raise self.err(f"unexpected token {self.toks[self.pos][0]!r}")


def _read_traj(ln: _Line, pid):
    k = ln.int("piece count")
    if k < 1:
        raise ln.err("a trajectory needs at least one piece", at=ln.pos - 1)
    xs, ys = [], []
    for _ in range(k):
        t0 = ln.int("piece start")
        ax, bx, ay, by = (ln.int(w) for w in ("ax", "bx", "ay", "by"))
        xs.append(TrajectoryPiece(t0, ax, bx))
        ys.append(TrajectoryPiece(t0, ay, by))
    try:
        return MovingPoint(pid, Trajectory(tuple(xs)), Trajectory(tuple(ys)))
    except ValueError as e:
        raise ln.err(str(e), "semantic", at=1) from None


def _order_key(p: MovingPoint, axis, t):
    pc = _piece(p.traj(axis), t)
    return (pc.a * t + pc.b, pc.a, p.id)


def parse_trace(stream) -> Scenario:
    """Parse and validate a trace given as text or any iterable of lines."""
    lines = stream.splitlines() if isinstance(stream, str) else list(stream)
    grid = None
    points = {}
    commands = []
    alive = {}
    last_t = 0
    for no, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0]
        if not text.strip():
            continue
        ln = _Line(no, text)
        head = ln.word("record")
        if grid is None:
            if head != "GRID":
                raise TraceError(no, 1, "trace must start with a GRID header")
            U, tm = ln.int("U"), ln.int("tmax")
            ln.done()
            try:
                grid = GridParams(U, tm)
            except ValueError as e:
                raise TraceError(no, 1, str(e), "semantic") from None
            continue
        if head == "GRID":
            raise ln.err("duplicate GRID header", at=0)
        if head == "POINT":
            if commands:
                raise ln.err("POINT records must precede commands", at=0)
            pid = ln.int("id")
            if pid in points:
                raise ln.err(f"duplicate point id {pid}", "semantic", at=1)
            p = _read_traj(ln, pid)
            ln.done()
            bad = validate_point(p, grid)
            if bad is not None:
                raise ln.err(f"point {pid} leaves the grid on axis {'xy'[bad[0]]} at t={bad[1]}",
                             "semantic", at=1)
            points[pid] = p
            alive[pid] = p
            continue
        if head not in ("QUERY", "OP", "AUDIT"):
            raise ln.err(f"unknown record {head!r}", at=0)
        t = ln.int("time")
        if head == "QUERY" and not 1 <= t <= grid.t_max:
            raise ln.err(f"query time {t} outside [1, {grid.t_max}]", "semantic", at=1)
        if not 0 <= t <= grid.t_max:
            raise ln.err(f"time {t} outside [0, {grid.t_max}]", "semantic", at=1)
        if t < last_t:
            raise ln.err(f"time {t} goes back from {last_t}", "semantic", at=1)
        last_t = t
        if head == "AUDIT":
            ln.done()
            commands.append(Command("AUDIT", t, no))
            continue
        if head == "QUERY":
            kind = ln.word("query kind")
            if kind not in QUERY_ARITY:
                raise ln.err(f"unknown query kind {kind!r}", at=ln.pos - 1)
            vals = [ln.coord(f"bound {i + 1}") for i in range(QUERY_ARITY[kind])]
            ln.done()
            try:
                shape = QueryShape(SHAPE_NAME[kind], tuple(vals))
            except ValueError as e:
                raise ln.err(str(e), "semantic", at=3) from None
            commands.append(Command("QUERY", t, no, shape=shape))
            continue
        op = ln.word("operation")
        if op not in OP_KINDS:
            raise ln.err(f"unknown operation {op!r}", at=ln.pos - 1)
        pid = ln.int("id")
        point = None
        if op.startswith("INS"):
            if pid in alive:
                raise ln.err(f"point {pid} already present", "semantic", at=3)
            point = _read_traj(ln, pid)
            bad = validate_point(point, grid)
            if bad is not None:
                raise ln.err(f"point {pid} leaves the grid on axis {'xy'[bad[0]]} at t={bad[1]}",
                             "semantic", at=3)
        elif pid not in alive:
            raise ln.err(f"point {pid} is not present", "semantic", at=3)
        ln.done()
        _check_extremal(ln, op, pid, point, alive, t)
        if point is not None:
            alive[pid] = point
        else:
            del alive[pid]
        commands.append(Command("OP", t, no, op=op, pid=pid, point=point))
    if grid is None:
        raise TraceError(1, 1, "trace must start with a GRID header")
    return Scenario(grid, list(points.values()), commands)


def _check_extremal(ln, op, pid, point, alive, t):
    axis = 0 if op[-1] == "X" else 1
    up = op[3] == "+"
    others = [p for q, p in alive.items() if q != pid]
    if op.startswith("INS"):
        v = point.traj(axis).piece_at(t).value(t)
        vals = [p.traj(axis).piece_at(t).value(t) for p in others]
        ok = not vals or (v > max(vals) if up else v < min(vals))
    else:
        me = _order_key(alive[pid], axis, t)
        keys = [_order_key(p, axis, t) for p in others]
        ok = not keys or (me > max(keys) if up else me < min(keys))
    if not ok:
        raise ln.err(f"{op} of point {pid} at t={t}: not extremal", "semantic", at=2)


def _fmt_num(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _fmt_traj(p: MovingPoint):
    out = [str(len(p.traj_x.pieces))]
    for px, py in zip(p.traj_x.pieces, p.traj_y.pieces):
        out += [str(px.t_start), str(px.a), str(px.b), str(py.a), str(py.b)]
    return " ".join(out)


def format_trace(s: Scenario) -> str:
    """Inverse of parse_trace (pieces of x and y must share start times)."""
    lines = [f"GRID {s.grid.U} {s.grid.t_max}"]
    for p in s.points:
        lines.append(f"POINT {p.id} {_fmt_traj(p)}")
    inv = {v: k for k, v in SHAPE_NAME.items()}
    for c in s.commands:
        if c.kind == "QUERY":
            vals = " ".join(_fmt_num(v) for v in c.shape.bounds)
            lines.append(f"QUERY {c.t} {inv[c.shape.kind]} {vals}")
        elif c.kind == "AUDIT":
            lines.append(f"AUDIT {c.t}")
        else:
            tail = f" {_fmt_traj(c.point)}" if c.point is not None else ""
            lines.append(f"OP {c.t} {c.op} {c.pid}{tail}")
    return "\n".join(lines) + "\n"


# -- running -------------------------------------------------------------------------

@dataclass
class Report:
    answers: List[Tuple[int, List[int]]] = field(default_factory=list)
    mismatches: List[Tuple[int, List[int], List[int]]] = field(default_factory=list)
    events: int = 0
    swaps: int = 0
    repairs: Counter = field(default_factory=Counter)
    audits: int = 0
    audit_failures: List[str] = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)
    query_work: List[dict] = field(default_factory=list)
    events_match: Optional[bool] = None
    timing: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.mismatches and not self.audit_failures

    def lines(self):
        out = []
        for qi, ids in self.answers:
            out.append(" ".join(["ANS", str(qi), str(len(ids))] + [str(i) for i in ids]))
        out.append("SUMMARY")
        out.append(f"queries {len(self.answers)}")
        out.append(f"mismatches {len(self.mismatches)}")
        out.append(f"events {self.events}")
        out.append(f"swaps {self.swaps}")
        out.append(f"repairs {sum(self.repairs.values())}")
        out.append(f"audits {self.audits}")
        out.append(f"audit_failures {len(self.audit_failures)}")
        if self.events_match is not None:
            out.append(f"events_match_oracle {str(self.events_match).lower()}")
        for k in sorted(self.stats):
            out.append(f"stat {k} {self.stats[k]}")
        for m in self.mismatches[:20]:
            out.append(f"MISMATCH {m[0]} got={m[1]} want={m[2]}")
        for a in self.audit_failures[:20]:
            out.append(f"AUDIT_FAIL {a}")
        return out

    def to_dict(self):
        return {
            "queries": len(self.answers), "mismatches": len(self.mismatches),
            "events": self.events, "swaps": self.swaps, "repairs": dict(self.repairs),
            "audits": self.audits, "audit_failures": self.audit_failures,
            "stats": dict(self.stats), "events_match_oracle": self.events_match,
            "timing": self.timing,
        }


class _Fanout:
    """Listener forwarding member swaps to the range structure."""

    def __init__(self, tree: Ortho):
        self.tree = tree

    def on_swap(self, axis, lo, hi, j):
        self.tree.on_swap(axis, lo, hi)


class Runner:
    """The indexed structures for one scenario, driven command by command."""

    def __init__(self, s: Scenario, d=None, pred="sorted"):
        self.s = s
        self.eng = build_engine(s.points, s.grid, pred=pred)
        self.dom = DominanceEngine(self.eng, d=d)
        self.tree = Ortho(self.eng.rank[0], self.eng.rank[1], self.eng.alive(), d=d)
        self.eng.add_listener(_Fanout(self.tree))

    def advance(self, t, on_group=None):
        """Advance to t one event time at a time; on_group(n_events) after each."""
        e = self.eng
        while True:
            nt = e.next_event_time()
            if nt is None or nt > t:
                break
            evs = e.advance_to(nt)
            if on_group is not None:
                on_group(evs)
        e.advance_to(t)

    def answer(self, shape: QueryShape):
        """(ids, work record) for one query at the engine's current time."""
        e, b = self.eng, shape.bounds
        if shape.kind == "dominance":
            ids = self.dom.dominance_query(b[0], b[1])
            path, work, k = self.dom.last
            return ids, {"kind": "DOM", "path": path, "work": work, "k": k, "d": self.dom.d,
                         "q": (b[0], b[1])}
        if shape.kind == "three_sided":
            lo, hi = x_rank_range(e, b[0], b[1])
            c = e.count_le(1, b[2]) - 1
            got, path = self.tree.three_sided(lo, hi, c)
        else:
            xlo, xhi = x_rank_range(e, b[0], b[1])
            ylo, yhi = y_rank_range(e, b[2], b[3])
            got, path = self.tree.query(xlo, xhi, ylo, yhi)
        return {e.ext[i] for i in got}, {"kind": shape.kind, "path": path}

    def apply_op(self, c: Command):
        e = self.eng
        kind = ("+" if c.op[3] == "+" else "-") + c.op[-1].lower()
        low_x, low_y = kind == "-x", kind == "-y"
        if c.op.startswith("INS"):
            i = e.insert_point(c.point)
            self.dom.insert(i, low_x, low_y)
            self.tree.insert(i, kind)
        else:
            i = e.index[c.pid]
            self.tree.delete(i, kind)
            self.dom.delete(i, low_x, low_y)
            e.delete_point(i)

    def audit(self, oracle: OracleSet, deep=False):
        t = self.eng.now
        out = list(self.dom.audit(oracle, t))
        gx = [self.eng.index[i] for i in oracle.sorted_ids(0, t)]
        gy = [self.eng.index[i] for i in oracle.sorted_ids(1, t)]
        out += self.tree.audit(gx, gy, deep=deep)
        return [f"t={t}: {m}" for m in out]


def run_scenario(s: Scenario, mode="diff", audit_every=0, d=None, pred="sorted",
                 deep_audit=False) -> Report:
    """Execute a scenario in 'structure', 'oracle' or 'diff' mode."""
    if mode == "differential":
        mode = "diff"
    if mode not in ("structure", "oracle", "diff"):
        raise ValueError(f"unknown mode {mode!r}")
    rep = Report()
    oracle = OracleSet(s.points, s.grid)
    t0 = time.perf_counter()
    if mode == "oracle":
        qi = 0
        for c in s.commands:
            if c.kind == "QUERY":
                rep.answers.append((qi, sorted(oracle_query(oracle, c.shape, c.t))))
                qi += 1
            elif c.kind == "OP":
                if c.point is not None:
                    oracle.add(c.point)
                else:
                    oracle.remove(c.pid)
        rep.timing["total_s"] = time.perf_counter() - t0
        return rep

    run = Runner(s, d=d, pred=pred)
    rep.timing["build_s"] = time.perf_counter() - t0
    since = [0]

    def on_group(evs):
        rep.events += len(evs)
        since[0] += len(evs)
        if audit_every and since[0] >= audit_every:
            since[0] = 0
            rep.audits += 1
            rep.audit_failures += run.audit(oracle, deep_audit)

    qi = 0
    has_ops = False
    for c in s.commands:
        run.advance(c.t, on_group)
        if c.kind == "AUDIT":
            rep.audits += 1
            rep.audit_failures += run.audit(oracle, deep=True)
        elif c.kind == "OP":
            has_ops = True
            run.apply_op(c)
            if c.point is not None:
                oracle.add(c.point)
            else:
                oracle.remove(c.pid)
        else:
            got, work = run.answer(c.shape)
            ids = sorted(got)
            rep.answers.append((qi, ids))
            if mode == "diff":
                want = sorted(oracle_query(oracle, c.shape, c.t))
                if want != ids:
                    rep.mismatches.append((qi, ids, want))
                work["truth"] = len(want)
            work["index"] = qi
            rep.query_work.append(work)
            rep.stats[f"{work['kind']}_{work['path']}"] += 1
            qi += 1
    rep.swaps = run.eng.n_swaps
    rep.repairs = Counter(run.dom.boundary.repairs)
    rep.stats["tree_touched"] = run.tree.touched
    rep.timing["total_s"] = time.perf_counter() - t0
    if mode == "diff" and not has_ops and all(len(p.traj_x.pieces) == 1 and len(p.traj_y.pieces) == 1
                                              for p in s.points):
        end = run.eng.now
        want = sorted(ev.key() for ev in oracle_events(oracle) if ev.time <= end)
        got = sorted(ev.key() for ev in run.eng.log if ev.kind != "breakpoint")
        rep.events_match = want == got
        if not rep.events_match:
            rep.audit_failures.append("processed events differ from the oracle's event list")
    return rep


def bench(s: Scenario, reps=3, d=None, pred="sorted") -> dict:
    """Wall time and operation counts over repeated structure-mode runs."""
    times, builds = [], []
    counts = None
    for _ in range(reps):
        rep = run_scenario(s, "structure", d=d, pred=pred)
        times.append(rep.timing["total_s"])
        builds.append(rep.timing["build_s"])
        c = (rep.events, rep.swaps, sum(rep.repairs.values()), dict(rep.stats),
             [(w.get("work"), w.get("k")) for w in rep.query_work])
        if counts is not None and c != counts:
            raise RuntimeError("operation counts differ between repetitions")
        counts = c
    events, swaps, repairs, stats, work = counts
    dom = [w for w in work if w[0] is not None]
    return {
        "reps": reps, "median_s": statistics.median(times), "min_s": min(times),
        "median_build_s": statistics.median(builds), "events": events, "swaps": swaps,
        "repairs": repairs, "stats": stats,
        "max_dom_work": max((w[0] for w in dom), default=0),
        "nodes_touched_per_event": stats.get("tree_touched", 0) / max(swaps, 1),
    }


# -- random scenarios ------------------------------------------------------------------

def _random_traj(rng, U, t_max, vmax, starts):
    """Piecewise-linear trajectory that stays inside [0, U) on [0, t_max]."""
    ends = starts[1:] + [t_max]
    out = []
    v = rng.randrange(U)
    for t0, t1 in zip(starts, ends):
        span = t1 - t0
        lo = max(-vmax, -(v // span))
        hi = min(vmax, (U - 1 - v) // span)
        a = rng.randint(lo, hi)
        out.append(TrajectoryPiece(t0, a, v - a * t0))
        v += a * span
    return Trajectory(tuple(out))


def random_point(rng, pid, U, t_max, vmax=8, pieces=1) -> MovingPoint:
    """Both coordinates change velocity at the same (random integer) times."""
    k = min(pieces - 1, t_max - 1)
    starts = [0] + sorted(rng.sample(range(1, t_max), k)) if k > 0 else [0]
    return MovingPoint(pid, _random_traj(rng, U, t_max, vmax, starts),
                       _random_traj(rng, U, t_max, vmax, starts))


def _random_coord(rng, U):
    v = rng.randrange(2 * U)
    return v // 2 if v % 2 == 0 else Fraction(v, 2)


def random_query(rng, U) -> QueryShape:
    kind = rng.choice(("dominance", "three_sided", "rect"))
    if kind == "dominance":
        return QueryShape(kind, (_random_coord(rng, U), _random_coord(rng, U)))
    a, b = sorted((_random_coord(rng, U), _random_coord(rng, U)))
    if kind == "three_sided":
        return QueryShape(kind, (a, b, _random_coord(rng, U)))
    c, e = sorted((_random_coord(rng, U), _random_coord(rng, U)))
    return QueryShape(kind, (a, b, c, e))


def _extremal_point(rng, pid, op, alive, U, t_max, t, vmax):
    axis = 0 if op[-1] == "X" else 1
    vals = [p.traj(axis).piece_at(t).value(t) for p in alive.values()]
    for _ in range(200):
        p = random_point(rng, pid, U, t_max, vmax)
        tr = p.traj(axis)
        v = tr.piece_at(t).value(t)
        if not vals or (v > max(vals) if op[3] == "+" else v < min(vals)):
            return p
        # shift the trajectory so it is extremal at t, if that keeps it on the grid
        target = (max(vals) + rng.randint(1, 8)) if op[3] == "+" else (min(vals) - rng.randint(1, 8))
        pc = tr.pieces[0]
        shifted = Trajectory((TrajectoryPiece(0, pc.a, pc.b + target - v),))
        if len(tr.pieces) == 1:
            q = MovingPoint(pid, shifted, p.traj_y) if axis == 0 else MovingPoint(pid, p.traj_x, shifted)
            if validate_point(q, GridParams(U, t_max)) is None:
                return q
    return None


def random_scenario(seed, n=64, U=1 << 16, t_max=None, vmax=8, queries=50, pieces=1,
                    ops=0, audits=0) -> Scenario:
    """Random points, queries at random integer times, and optional special ops."""
    rng = random.Random(seed)
    if t_max is None:
        t_max = rng.randint(4, 16)
    grid = GridParams(U, t_max)
    pts = [random_point(rng, i, U, t_max, vmax, pieces) for i in range(n)]
    cmds = []
    for _ in range(queries):
        cmds.append(Command("QUERY", rng.randint(1, t_max), shape=random_query(rng, U)))
    for _ in range(audits):
        cmds.append(Command("AUDIT", rng.randint(0, t_max)))
    op_times = sorted(rng.randint(0, t_max) for _ in range(ops))
    cmds.sort(key=lambda c: c.t)
    if ops:
        cmds = _weave_ops(rng, cmds, op_times, pts, U, t_max, vmax)
    return Scenario(grid, pts, cmds)


def _weave_ops(rng, cmds, op_times, pts, U, t_max, vmax):
    alive = {p.id: p for p in pts}
    next_id = max(alive, default=-1) + 1
    out = []
    ci = 0
    for t in op_times:
        while ci < len(cmds) and cmds[ci].t <= t:
            out.append(cmds[ci])
            ci += 1
        op = rng.choice(OP_KINDS)
        if op.startswith("DEL") and len(alive) <= 2:
            op = "INS" + op[3:]
        if op.startswith("INS"):
            p = _extremal_point(rng, next_id, op, alive, U, t_max, t, vmax)
            if p is None:
                continue
            alive[p.id] = p
            out.append(Command("OP", t, op=op, pid=p.id, point=p))
            next_id += 1
        else:
            axis = 0 if op[-1] == "X" else 1
            key = lambda q: _order_key(alive[q], axis, t)
            pid = max(alive, key=key) if op[3] == "+" else min(alive, key=key)
            del alive[pid]
            out.append(Command("OP", t, op=op, pid=pid))
    out.extend(cmds[ci:])
    return out


# -- command line --------------------------------------------------------------------

def main(argv=None):
    import argparse
    import sys

    ap = argparse.ArgumentParser(prog="python -m kinrange",
                                 description="Run a kinetic range-reporting trace.")
    ap.add_argument("--trace", help="trace file ('-' for stdin); a random scenario if omitted")
    ap.add_argument("--mode", choices=("structure", "oracle", "diff"), default="diff")
    ap.add_argument("--audit-every", type=int, default=0, metavar="N")
    ap.add_argument("--d-override", type=int, default=None, metavar="K")
    ap.add_argument("--pred", choices=("sorted", "slab"), default="sorted")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=64, help="points in a generated scenario")
    ap.add_argument("--stats-out", metavar="FILE")
    args = ap.parse_args(argv)

    try:
        if args.trace is None:
            s = random_scenario(args.seed, n=args.n)
        elif args.trace == "-":
            s = parse_trace(sys.stdin.read())
        else:
            with open(args.trace) as fh:
                s = parse_trace(fh.read())
    except TraceError as e:
        print(e, file=sys.stderr)
        return 2
    rep = run_scenario(s, args.mode, audit_every=args.audit_every, d=args.d_override,
                       pred=args.pred)
    sys.stdout.write("\n".join(rep.lines()) + "\n")
    if args.stats_out:
        with open(args.stats_out, "w") as fh:
            json.dump(rep.to_dict(), fh, indent=2, sort_keys=True, default=str)
    return 0 if rep.ok else 1
