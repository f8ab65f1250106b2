"""
Trees with a distinguished end
==============================

Vertices of the homogeneous tree carry a level (a horocycle index taken
with respect to a distinguished end) and finitely many non-zero branch
labels.  Everything below the root is reached by `successor`; the single
upward edge is `predecessor`.
"""

from dl_harmonics.tree import (
    OMEGA,
    ROOT,
    TreeEnd,
    ball,
    busemann_wrt_end,
    confluent_omega,
    confluent_omega_end,
    distance,
    geodesic,
    neighbours,
    predecessor,
    successor,
)

q = 2

# walk two levels down from the root, picking branches 1 then 0
v = successor(successor(ROOT, 1, q), 0, q)
print("v           =", v)
print("predecessor =", predecessor(v))
print("neighbours  =", len(neighbours(v, q)), "(one up, %d down)" % q)

# the confluent of two vertices is where their upward rays meet
w = successor(successor(ROOT, 0, q), 1, q)
c = confluent_omega(v, w)
print("confluent of v and w:", c)
print(
    "distance(v, w) =",
    distance(v, w),
    " edges on the geodesic:",
    len(geodesic(v, w)) - 1,
)

# ends: omega is "straight up"; a word end descends forever along its labels
xi = TreeEnd.word({1: 1, 2: 1})
print("confluent of v with the word end:", confluent_omega_end(v, xi))
print(
    "busemann index of v: wrt omega",
    busemann_wrt_end(v, OMEGA),
    " wrt the word end",
    busemann_wrt_end(v, xi),
)

# metric balls around the root
for r in range(5):
    print("|ball(radius=%d)| = %d" % (r, len(ball(q, r))))
