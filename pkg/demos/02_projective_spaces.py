"""
Points and subspaces of PG(n, q).

Points are canonical vectors (first nonzero coordinate 1) indexed in
lexicographic order; subspaces are stored by their reduced row echelon form.
"""

import numpy as np

from pgblock.gf import tower_for_order
from pgblock.pg import (
    space, gaussian_coeff, enumerate_subspaces, random_subspace, span, meet,
    count_subspaces_by_cells,
)

F = tower_for_order(3, 1).top
sp = space(3, F)
print(sp, "points:", sp.num_points)

# subspace counts three ways: closed form, Schubert cells, enumeration
for d in range(4):
    enumerated = sum(1 for _ in enumerate_subspaces(sp, d))
    print(f"d={d}: gaussian {gaussian_coeff(4, d + 1, 3)}, cells "
          f"{count_subspaces_by_cells(3, d, 3)}, enumerated {enumerated}")

rng = np.random.default_rng(1)
L = random_subspace(sp, 1, rng)
M = random_subspace(sp, 1, rng)
print("L =", L.rows)
print("M =", M.rows)
print("dim <L,M> =", span([L, M]).dim, " dim L^M =", meet(L, M).dim)
