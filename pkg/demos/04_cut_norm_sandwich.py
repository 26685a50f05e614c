"""
Cut norm and the norm sandwich
==============================

Exact and heuristic cut norms of step kernels, and the inequality
cut <= operator <= sqrt(8 * cut).
"""
import numpy as np

from graphonlab import graphons as G
from graphonlab import norms as N

K = N.StepKernel([[0.5, -0.5], [-0.5, 0.5]])
res = N.cutnorm_exact_step(K)
print("exact cut norm:", res.value, "S =", res.S, "T =", res.T)
print("heuristic:", N.cutnorm_heuristic(K, grid=32, restarts=8).value)
print("operator norm:", N.operator_norm(K), " HS norm:", N.hs_norm(K))

# difference of two graphons; the heuristic handles analytic kernels
D = N.DifferenceKernel(G.product(), G.constant(0.25))
print("||uv - 1/4||_cut >=", N.cutnorm_heuristic(D).value)

# relabelling blocks changes the cut norm but not the cut distance
M = np.array([[0.9, 0.1, 0.3], [0.1, 0.5, 0.7], [0.3, 0.7, 0.2]])
U, V = G.StepGraphon(M), G.StepGraphon(M[np.ix_([2, 0, 1], [2, 0, 1])])
print("cut norm of U - V:", N.cutnorm(N.DifferenceKernel(U, V)).value)
d, perm = N.cut_distance_step(U, V)
print(f"cut distance over block permutations: {abs(d):.3g} at permutation {perm}")

recs = N.sandwich_audit(100, max_blocks=12, seed=0)
worst = max(r.operator / r.upper for r in recs)
print(f"sandwich held on {sum(r.lower_ok and r.upper_ok for r in recs)}/100 kernels; "
      f"max operator / sqrt(8 cut) = {worst:.3f}")
