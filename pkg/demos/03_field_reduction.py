"""
Field reduction and linear sets.

A point of PG(n, q^t) becomes a (t-1)-space of PG((n+1)t-1, q); together
these form the Desarguesian spread.  B(U) collects the spread elements that a
subspace U meets.  On the line PG(1, q^3) a plane U gives one of three
pictures: U is an element, U meets one element in a line, or U is scattered.
"""

from collections import Counter

from pgblock.gf import tower_for_order
from pgblock.pg import enumerate_subspaces
from pgblock.reduction import field_reduce, linear_set, classify_line_linear_set
from pgblock.verify import plane_taxonomy

T = tower_for_order(2, 3)
spread = field_reduce(1, T)
print(spread, "elements:", len(spread), "points per element:", spread.element_size)
print("S(P_0) rows:", spread.element(0).rows)

kinds = Counter()
sizes = Counter()
for U in enumerate_subspaces(spread.big, 2):
    kinds[classify_line_linear_set(spread, U)] += 1
    sizes[len(linear_set(spread, U))] += 1
print("plane kinds:", dict(kinds))
print("sizes:", dict(sizes))

print(plane_taxonomy(tower_for_order(3, 3))["table"])
