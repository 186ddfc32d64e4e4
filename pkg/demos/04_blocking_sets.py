"""
Linear blocking sets in PG(2, 27).

A 3-space U of PG(8, 3) gives a 1-blocking set B(U) of the plane PG(2, 27).
We check blocking, minimality two ways, the sufficient criterion, the line
spectrum and a secant census through one point.
"""

from pgblock.blocking import (
    BlockingContext, is_k_blocking, minimal_by_tangents, minimal_by_removal, is_small,
    minimality_criterion, spectrum, secant_census,
)
from pgblock.gf import tower_for_order
from pgblock.reduction import PointSet
from pgblock.verify import construct_linear_blocking

ctx = BlockingContext(2, 1, tower_for_order(3, 3))
B, U = construct_linear_blocking(ctx, "canonical-subgeometry")
print("|B| =", len(B), " dim U =", U.dim)
print("blocking:", is_k_blocking(B, ctx), " small:", is_small(B, ctx))
print("minimal (tangents):", minimal_by_tangents(B, ctx),
      " minimal (removal):", minimal_by_removal(B, ctx))
print("criterion:", minimality_criterion(B, ctx))
print("line spectrum:", spectrum(B, 1, ctx).histogram)
print("secants through", B.members[0], ":", secant_census(B, B.members[0], ctx).to_dict())

# one extra point breaks the 1 (mod 3) pattern
extra = next(i for i in range(ctx.space.num_points) if i not in B)
B2 = B.union(PointSet(B.space, [extra]))
print("with an extra point:", spectrum(B2, 1, ctx).histogram)
