"""
Lamp groups and their Cayley graphs
===================================

A group element is a finite lamp configuration over the integers plus the
lamplighter's position.  With the walk-and-switch generating set the Cayley
graph is exactly the horocyclic product DL(q, q); `encode`/`decode` is the
dictionary.
"""

from dl_harmonics.dl_graph import DLParams, dl_neighbours
from dl_harmonics.lamplighter import (
    BoundaryConfig,
    GeneratorModel,
    GroupElement,
    cayley_neighbours,
    decode,
    defect_minus,
    defect_oplus,
    defect_plus,
    encode,
    generators,
    identity,
    inverse,
    multiply,
)

q = 2
a = GroupElement.make({0: 1, 2: 1}, 3)
b = GroupElement.make({-1: 1}, -2)

print("a            =", a)
print("a * b        =", multiply(a, b, q))
print("a * a^-1 = e :", multiply(a, inverse(a, q), q) == identity())

gens = generators(GeneratorModel.WALK_SWITCH, q)
print("walk-and-switch generators:", len(gens))

# the dictionary: encode a group element, read its graph neighbours, and
# compare with the Cayley neighbours pushed through encode
p = DLParams(q, q)
v = encode(a)
print("encode(a)    =", v)
print("decode round trip:", decode(v) == a)
cayley = {encode(n) for n in cayley_neighbours(a, GeneratorModel.WALK_SWITCH, q)}
print("Cayley neighbours == graph neighbours:", cayley == set(dl_neighbours(v, p)))

# defects count how far a finite element deviates from a boundary
# configuration; they feed the q^defect kernels
plus = BoundaryConfig.make("+", {3: 1})
minus = BoundaryConfig.make("-", {-2: 1})
print("defect_plus (a, +config) =", defect_plus(a, plus))
print("defect_minus(a, -config) =", defect_minus(a, minus))
print("defect_oplus(a, +config) =", defect_oplus(a, plus))
