"""Dominance reporting over a moving set: which queries hit the cheap path."""
import random
from collections import Counter

from kinrange.core import GridParams
from kinrange.dominance import DominanceEngine
from kinrange.harness import random_point
from kinrange.kinetic import build_engine
from kinrange.oracle import OracleSet, oracle_query
from kinrange.core import QueryShape

rng = random.Random(3)
U, T, n = 4096, 20, 1000
pts = [random_point(rng, i, U, T) for i in range(n)]
grid = GridParams(U, T)
eng = build_engine(pts, grid)
dom = DominanceEngine(eng)
oracle = OracleSet(pts, grid)
print(f"{n} points, boundary depth d = {dom.d}")

paths = Counter()
for t in range(1, T + 1):
    eng.advance_to(t)
    for _ in range(50):
        qx, qy = rng.randrange(U), rng.randrange(U)
        got = dom.dominance_query(qx, qy)
        assert got == oracle_query(oracle, QueryShape("dominance", (qx, qy)), t)
        path, work, k = dom.last
        paths[path] += 1

print("kinetic events processed:", len(eng.log))
print("boundary repairs:", sum(dom.boundary.repairs.values()))
print("query paths:", dict(paths))
