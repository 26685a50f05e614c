"""
Homomorphism densities
======================

Triangle densities of sampled graphs approach the graphon value 1/27.
"""
import numpy as np

from graphonlab import densities as D
from graphonlab import graphons as G
from graphonlab.sampling import sample_graph

W = G.product()
for name in D.MOTIFS:
    print(f"t({name}, uv) = {D.hom_density_graphon(name, W):.6f}")

K3 = np.ones((3, 3)) - np.eye(3)
print("t(triangle, K3) =", D.hom_density_graph("triangle", K3))

for n in (50, 200, 800):
    errs = [abs(D.hom_density_graph("triangle",
                                    sample_graph(W, n, "stochastic", "iid", seed=s).adjacency)
                - 1 / 27) for s in range(20)]
    print(f"n={n:4d}  median |t - 1/27| = {np.median(errs):.5f}")
