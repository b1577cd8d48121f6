"""Why each tower step is generic: stabilizer dimensions, and what breaks without it."""

from fractions import Fraction

from euclidtower import build_tower, verify_open_orbit, verify_stabilizer_bullet
from euclidtower.tower import with_step_character

tower = build_tower(5, 3)
print("pair (5,3)")
for i in range(1, len(tower) + 1):
    o = verify_open_orbit(tower, i)
    line = f"  step {i}: dim Lie(P) = {o.dim_p:3d}, stabilizer {o.dim_stabilizer:3d}, codim {o.dim_p - o.dim_stabilizer} vs dim V {o.dim_characters}"
    if i < len(tower):
        b = verify_stabilizer_bullet(tower, i)
        line += f", stabilizer = Lie(P_next) + Lie(V): {b.ok}"
    print(line)

# Replace the first character by one reading a single entry: the orbit is no
# longer open, the stabilizer is too big.
bad = with_step_character(tower, 1, ((0, 5, Fraction(1)),))
o = verify_open_orbit(bad, 1)
print(f"rank-one character on V_1: stabilizer {o.dim_stabilizer}, open = {o.ok}")
