"""
Horocyclic product graphs
=========================

DL(q, r) glues a q-ary and an r-ary tree along opposite horocycle indices:
a vertex is a pair (x1, x2) with level(x1) + level(x2) = 0, and one edge
moves both coordinates by one level at once.
"""

from dl_harmonics.dl_graph import (
    DLParams,
    ball,
    dl_neighbours,
    dls_neighbours,
    export_dot,
    export_json,
    factor_map,
    origin,
)

p = DLParams(2, 3)
o = origin(p)

print("origin:", o)
print("degree:", len(dl_neighbours(o, p)), "= q + r =", p.q + p.r)

# ball growth in the pair metric
for radius in range(4):
    print("|B(o, %d)| = %d" % (radius, len(ball(p, radius))))

# the sibling variant is (q^2 + qr)-regular and factors onto the plain graph
ps = DLParams(2, 2)
os_ = origin(ps)
sib = dls_neighbours(os_, ps)
print("sibling-variant degree:", len(sib), "= q^2 + qr =", ps.q**2 + ps.q * ps.r)
images = {factor_map(v, ps) for v in sib}
print("factor map sends those %d neighbours onto %d plain vertices" % (len(sib), len(images)))

# exports for small pictures / further processing
dot = export_dot(ps, 1)
print()
print("DOT preview:")
for line in dot.splitlines()[:4]:
    print("   ", line)
blob = export_json(ps, 1)
print("JSON export: %d vertices, %d edges" % (len(blob["vertices"]), len(blob["edges"])))
