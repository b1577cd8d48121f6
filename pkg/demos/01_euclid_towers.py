"""From a division chain to a nilpotent orbit, for one pair.

Run: python demos/01_euclid_towers.py [n1 n2]
"""

import sys

from euclidtower import (
    build_tower,
    claimed_partition,
    euclid_chain,
    jordan_type,
    lemma_j_matrix,
    levi_blocks,
    orbit_dim,
    richardson_partition,
    slow_euclid_pairs,
)
from euclidtower.tower import dim_df

n1, n2 = (int(x) for x in sys.argv[1:3]) if len(sys.argv) > 2 else (8, 5)

chain = euclid_chain(n1, n2)
print(f"pair ({n1},{n2}): remainders {chain.remainders}, quotients {chain.quotients}")
print("subtraction steps:", " -> ".join(map(str, slow_euclid_pairs(chain))))

# Each subtraction step is one layer of the tower: a Hom block V_i carrying a
# generic character, whose stabilizer is the next (smaller) parabolic.
tower = build_tower(n1, n2)
for s in tower.steps:
    diag = any(len(b) > 1 for b in s.v_basis)
    print(f"  step {s.index}: blocks {s.pair}, dim V = {len(s.v_basis)}{'  (diagonal copies)' if diag else ''}")

p = claimed_partition(chain)
j = lemma_j_matrix(tower)
print("closed form      :", p)
print("Richardson orbit :", richardson_partition(levi_blocks(chain)), "for Levi blocks", levi_blocks(chain).tolist())
print("Jordan type of J :", jordan_type(j))
print(f"dim O = {orbit_dim(p)} = 2 * {dim_df(tower)}")
