"""
Drifted walks: simulation against closed forms
==============================================
"""

from fractions import Fraction

from dl_harmonics.dl_graph import DLParams, origin
from dl_harmonics.kernels import f_minus
from dl_harmonics.tree import ROOT, predecessor
from dl_harmonics.walks import DLWalk, estimate_f, p1_walk, simulate, transitions

p = DLParams(2, 2)
alpha = Fraction(1, 3)

# one-step law of the pair walk at the origin
op = DLWalk(p, alpha)
print("one step from the origin (weight, target):")
for target, weight in transitions(op, origin(p)):
    print("  %-5s" % weight, target)

# a sampled trajectory; the seed fixes the path exactly
tree_op = p1_walk(p, alpha)
t = simulate(tree_op, ROOT, 8, seed=7)
print("levels along one sampled path:", [v.level for v in t.steps])

# Monte-Carlo estimate of the upward hitting probability vs the closed form;
# with the drift pointing away the walk only sometimes gets back up
down = Fraction(2, 3)
est = estimate_f(p1_walk(p, down), ROOT, predecessor(ROOT), trials=4000, horizon=400, seed=11)
print("estimated F(root, predecessor) = %.4f +/- %.4f" % (est.point_estimate, est.half_width_95))
print("exact     F                    = %s = %.4f" % (f_minus(down), float(f_minus(down))))
print("runs: %d hits, %d escaped, %d truncated" % (est.hits, est.escaped_runs, est.truncated_runs))
