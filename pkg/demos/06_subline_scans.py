"""
Sublines and Baer sublines against linear sets of PG(1, q^3).

Every subline PG(1, q) meets every plane-induced linear set in 0, 1, 2, 3 or
q+1 points.  For square q a Baer subline PG(1, q sqrt q) meets a subline in
at most sqrt(q)+1 points and a linear set of size q^2+1 or q^2+q+1 in at most
q+sqrt(q)+1.
"""

from pgblock.verify import scan_subline_intersections, scan_baer_intersections

for q in (2, 3, 4):
    rep = scan_subline_intersections(q)
    print(f"q={q}: {rep['sublines']} sublines x {rep['linear_sets']} linear sets")
    print("   histogram:", rep["histogram"], "pass:", rep["pass"])

rep = scan_baer_intersections(4)
print("Baer q=4:", rep["max_subline_baer"], "<=", rep["bounds"]["subline_baer"], ";",
      rep["max_baer_linear_set"], "<=", rep["bounds"]["baer_linear_set"])
