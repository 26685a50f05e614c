"""
Graphons and sampled graphs
===========================

Build a few graphons, check them on a grid, and draw weighted and
stochastic graphs from them.
"""
import numpy as np

from graphonlab import graphons as G
from graphonlab.sampling import induced_graphon, sample_graph

# analytic kernels come from a small registry
W = G.product()
print(W.name, "W(0.5, 0.5) =", W(0.5, 0.5))

# a two-block stochastic block model as a step graphon
sbm = G.StepGraphon([[0.8, 0.2], [0.2, 0.8]])
print(sbm.name, "W(0.25, 0.75) =", sbm(0.25, 0.75))

# random piecewise-Lipschitz graphon on 4 intervals, per-piece constants <= 4
fig1 = G.figure1_family(K=4, L_max=4.0, seed=7)
print("declared per-piece constants:\n", np.round(fig1.piece_constants, 3))

# grid audit: symmetry and range
for g in (W, sbm, fig1):
    rep = G.validate(g, 512)
    print(f"{g.name[:30]:30s} passed={rep.passed}")

# weighted sampling puts W(u_i, u_j) on every edge, stochastic sampling
# draws a Bernoulli edge with that probability
latents = "sorted"
Gw = sample_graph(W, 8, "weighted", latents, seed=1)
Gs = sample_graph(fig1, 200, "stochastic", latents, seed=1)
print("weighted sample:\n", np.round(Gw.adjacency, 3))
print("stochastic edge density:", Gs.adjacency.sum() / (200 * 199))

# the induced graphon of a graph is a step graphon on n equal blocks
Wg = induced_graphon(Gw.adjacency)
print("induced graphon blocks:", Wg.k)

# graphons serialise to JSON and back
print(G.from_json(fig1.to_json()).to_dict() == fig1.to_dict())
