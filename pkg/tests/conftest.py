import random

import pytest

from kinrange.core import GridParams, MovingPoint, Trajectory, linear_point, static_point

S6_COORDS = [(1, 6), (2, 5), (3, 4), (4, 3), (5, 2), (6, 1)]


def s6_points():
    return [static_point(i, x, y) for i, (x, y) in enumerate(S6_COORDS)]


def m2_points():
    # p1: x = 2t+1, y = 3 ; p2: x = t+5, y = t+1
    return [linear_point(1, 2, 1, 0, 3), linear_point(2, 1, 5, 1, 1)]


def random_linear(rng, n, U, t_max, vmax=8, first_id=0):
    pts = []
    for i in range(n):
        while True:
            ax, ay = rng.randint(-vmax, vmax), rng.randint(-vmax, vmax)
            bx, by = rng.randrange(U), rng.randrange(U)
            if 0 <= bx + ax * t_max < U and 0 <= by + ay * t_max < U:
                break
        pts.append(linear_point(first_id + i, ax, bx, ay, by))
    return pts


def random_piecewise(rng, n, U, t_max, pieces=3, vmax=8):
    """Points whose x and y trajectories share breakpoints."""
    pts = []
    for i in range(n):
        starts = [0] + sorted(rng.sample(range(1, t_max), min(pieces - 1, t_max - 1)))
        trajs = []
        for _ in range(2):
            while True:
                v = rng.randrange(U)
                items, ok = [], True
                for k, s in enumerate(starts):
                    a = rng.randint(-vmax, vmax)
                    items.append((s, a, v - a * s))
                    e = starts[k + 1] if k + 1 < len(starts) else t_max
                    v += a * (e - s)
                    if not 0 <= v < U:
                        ok = False
                        break
                if ok:
                    trajs.append(Trajectory.from_tuples(items))
                    break
        pts.append(MovingPoint(i, trajs[0], trajs[1]))
    return pts


def event_groups(eng, t):
    """Advance to t, yielding after each group of simultaneous events."""
    while True:
        nt = eng.next_event_time()
        if nt is None or nt > t:
            break
        yield eng.advance_to(nt)
    eng.advance_to(t)


@pytest.fixture
def s6():
    return s6_points(), GridParams(16, 10)


@pytest.fixture
def m2():
    return m2_points(), GridParams(64, 10)


@pytest.fixture
def rng():
    return random.Random(12345)


# -- acceptance summary -----------------------------------------------------------
ACCEPTANCE = {}


def record(criterion, ok, detail):
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
