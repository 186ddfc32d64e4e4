"""
Field towers GF(p) < GF(q) < GF(q^t).

Elements are plain ints.  An element of GF(q^t) is written in base q, with
digit j the coefficient of w^j, so splitting it over GF(q) is a base-q split
and GF(q) sits inside as the ints below q.
"""

from pgblock.gf import make_tower, FieldElement

T = make_tower(2, 2, 3)          # GF(2) < GF(4) < GF(64)
print("tower:", T.descriptor())
print("orders:", T.p, T.q, T.order)

F = T.top
w = T.basis_top[1]
print("w =", w, " w^3 =", F.pow(w, 3), " decomposed:", list(T.decompose(F.pow(w, 3))))

# Frobenius x -> x^q fixes exactly the subfield GF(q)
fixed = [x for x in range(F.order) if F.pow(x, T.q) == x]
print("fixed by x^4:", fixed)

# operator sugar
a, b = FieldElement(F, 37), FieldElement(F, 50)
print("a*b =", (a * b).value, " (a*b)/b == a:", (a * b) / b == a)
