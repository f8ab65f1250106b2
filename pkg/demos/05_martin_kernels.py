"""
Minimal harmonic functions from boundary points
===============================================

The two hitting factors solve first-step quadratics in closed form and
assemble into Martin kernels: one positive harmonic function for each
boundary point, normalised at the origin.
"""

from fractions import Fraction

from dl_harmonics.dl_graph import DLParams, dl_neighbours, origin
from dl_harmonics.kernels import (
    KernelSpec,
    combine,
    drift_kernel,
    f_minus,
    f_plus,
    minimal_kernel,
    rho_squared,
)
from dl_harmonics.tree import TreeEnd
from dl_harmonics.walks import DLWalk, apply, conjugate, is_harmonic_at

p = DLParams(2, 2)
alpha = Fraction(2, 3)

print("alpha =", alpha)
print("F-minus =", f_minus(alpha), "  F-plus =", f_plus(alpha, p.q), "  product =", rho_squared(alpha, p.q))

# a kernel attached to a word end of the first tree
spec = KernelSpec(1, TreeEnd.word({1: 1}), alpha, p)
k = minimal_kernel(spec)
o = origin(p)
op = DLWalk(p, alpha)
print("K(origin) =", k(o), " minimal:", k.minimal)
print("mean value property at the origin:", apply(op, k, o) == k(o))
nb = dl_neighbours(o, p)
print("values on the %d neighbours of o:" % len(nb), [k(v) for v in nb])

# non-negative combinations stay harmonic
h = combine([(Fraction(1, 2), spec), (Fraction(1, 2), KernelSpec(1, TreeEnd.omega(), alpha, p))], constant=Fraction(1))
print("combined function at the origin:", h(o), " harmonic:", is_harmonic_at(op, h, o))

# the drift kernel is harmonic too, and conjugating by it reverses the drift
g = drift_kernel(alpha)
print("drift kernel harmonic at o:", is_harmonic_at(op, g, o))
reversed_op = conjugate(op, g)
print("conjugated one-step law equals the alpha -> 1-alpha walk:",
      dict(reversed_op.transitions(o)) == dict(DLWalk(p, 1 - alpha).transitions(o)))
