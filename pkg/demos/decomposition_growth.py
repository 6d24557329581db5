"""Growing and shrinking a layered decomposition through extremal updates."""
import random

from kinrange.core import GridParams, static_point
from kinrange.decomposition import HDecomposition
from kinrange.kinetic import build_engine

rng = random.Random(1)
U = 1 << 20
eng = build_engine([static_point(0, U // 2, U // 2)], GridParams(U, 5))
h = HDecomposition(eng.rank[0], eng.rank[1], members=[0])


def sizes():
    return [len(h._prim(s)) for s in h.sets]


# every new point lands right of all others
right = U // 2
for pid in range(1, 1200):
    right += rng.randint(1, 20)
    i = eng.insert_point(static_point(pid, right, rng.randrange(U)))
    h.insert_plus_x(i)
    if pid in (15, 31, 100, 400, 1199):
        print(f"{pid + 1:5d} points  set sizes {sizes()}")

# peel points off the left end again
while len(eng.order[0]) > 40:
    i = eng.order[0][0]
    h.delete_minus_x(i)
    eng.delete_point(i)
print(f"{len(eng.order[0]):5d} points  set sizes {sizes()}")
print("condition violations:", h.audit_conditions())
print("repairs:", dict(h.repairs))
