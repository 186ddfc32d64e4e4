"""
Is a blocking set linear?  Check the hypotheses, then search for U.

certify_linear grows a subspace one spread-element point at a time, never
leaving the union of the elements of B.  It returns a witness, proves there
is none, or gives up at a node budget.
"""

import numpy as np

from pgblock.blocking import BlockingContext
from pgblock.gf import tower_for_order
from pgblock.pg import random_subspace
from pgblock.reduction import PointSet, linear_set, certify_linear
from pgblock.verify import construct_linear_blocking, audit_linearity, get_spread

T = tower_for_order(3, 3)
ctx = BlockingContext(2, 1, T)
B, _ = construct_linear_blocking(ctx, "seeded-random-subspace", seed=2)
rep = audit_linearity(B, ctx)
print("audit:", rep.conclusion, "after", rep.nodes, "nodes;", rep.to_dict()["hypotheses"])

spread = get_spread(T, 1)
U = random_subspace(spread.big, 2, np.random.default_rng(0))
L = linear_set(spread, U)
print("B(U) on PG(1,27):", len(L), "points ->", certify_linear(spread, L).status)
L2 = L.difference(PointSet(L.space, [L.members[0]]))
c = certify_linear(spread, L2)
print("minus a point:", c.status, "exhaustive:", c.exhaustive, "nodes:", c.nodes)
