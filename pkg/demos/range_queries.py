"""Three-sided and rectangle queries on points whose paths bend over time."""
import random

from kinrange.core import GridParams
from kinrange.harness import random_point
from kinrange.kinetic import build_engine
from kinrange.oracle import OracleSet
from kinrange.range_reporting import (build_orthogonal, build_three_sided,
                                      orthogonal_query, three_sided_query)

rng = random.Random(8)
U, T, n = 1024, 12, 300
pts = [random_point(rng, i, U, T, pieces=3) for i in range(n)]
grid = GridParams(U, T)
eng = build_engine(pts, grid)
tri, rect = build_three_sided(eng), build_orthogonal(eng)


class Fan:
    def on_swap(self, axis, lo, hi, j):
        tri.on_swap(axis, lo, hi)
        rect.on_swap(axis, lo, hi)


eng.add_listener(Fan())
oracle = OracleSet(pts, grid)
for t in (3, 6, 9, 12):
    eng.advance_to(t)
    pos = oracle.positions(t)
    a, b = sorted(rng.randrange(U) for _ in range(2))
    c, d = sorted(rng.randrange(U) for _ in range(2))
    below = three_sided_query(eng, tri, a, b, c)
    box = orthogonal_query(eng, rect, a, b, c, d)
    assert below == {p for p, (x, y) in pos.items() if a <= x <= b and y <= c}
    assert box == {p for p, (x, y) in pos.items() if a <= x <= b and c <= y <= d}
    print(f"t={t:2d}  x in [{a}, {b}]: {len(below)} with y <= {c}, {len(box)} with y in [{c}, {d}]")

print("events so far:", len(eng.log), " tree nodes touched:", rect.touched)
