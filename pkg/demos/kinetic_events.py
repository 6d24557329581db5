"""Two moving points, their swap events, and a check against brute force."""
from kinrange.core import GridParams, linear_point, swap_time
from kinrange.kinetic import build_engine
from kinrange.oracle import OracleSet, oracle_events

# p1 moves right at speed 2 on y = 3, p2 moves diagonally from (5, 1)
pts = [linear_point(1, 2, 1, 0, 3), linear_point(2, 1, 5, 1, 1)]
grid = GridParams(64, 10)

print("x-swap computed directly:", swap_time(pts[0].traj_x, pts[1].traj_x, 0, grid.t_max))

eng = build_engine(pts, grid)
while (t := eng.next_event_time()) is not None:
    eng.advance_to(t)
for ev in eng.log:
    print(f"t={ev.time}  {ev.kind}  {ev.subjects}")

want = sorted(e.key() for e in oracle_events(OracleSet(pts, grid)))
print("matches brute force:", sorted(e.key() for e in eng.log) == want)
print("x order at t=10:", [eng.ext[i] for i in eng.order[0]])
