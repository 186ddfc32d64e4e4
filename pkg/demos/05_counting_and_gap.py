"""
Counting lines by how many points of B they hold, and the gap it forces.

For B inside a plane the three sums over lines (count, incidences, ordered
pairs) are fixed by |B| alone.  Combining them gives sum (i-1)(i-1-q) x_i,
which must be >= 0 when every line meets B in 1 (mod q) points.  At the two
boundary sizes this is negative for q >= 7, so no plane section has a size
in between.
"""

import numpy as np

from pgblock.blocking import BlockingContext
from pgblock.gf import tower_for_order
from pgblock.pg import Subspace
from pgblock.verify import (
    construct_linear_blocking, moment_counts, gap_evaluate, small_spaces_through_exceed,
)

ctx = BlockingContext(2, 1, tower_for_order(3, 3))
B, _ = construct_linear_blocking(ctx, "canonical-subgeometry")
pi = Subspace(ctx.space, np.eye(3, dtype=int).tolist())
m = moment_counts(B, pi, ctx)
print(m.to_dict())

for q in (5, 7, 8, 49):
    signs = [gap_evaluate(3, 2, 1, q, b).sign for b in ("lower", "upper")]
    print(f"q={q}: signs at the boundary sizes {signs}")

# a side inequality used when counting small spaces through a tangent:
for k in (2, 3, 4):
    lhs, ok = small_spaces_through_exceed(7, k)
    print(f"k={k}: left side {lhs}, exceeds q^3+1: {ok}")
