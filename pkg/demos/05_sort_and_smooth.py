"""
Estimating Lipschitz constants by sort and smooth
=================================================

Normalise an adjacency matrix, sort it by degree, smooth it, and read off
global and per-piece Lipschitz constants.
"""
from pathlib import Path

import numpy as np

from graphonlab import graphons as G
from graphonlab.estimation import Surface, detect_partition, estimate_lipschitz, sort_and_smooth
from graphonlab.ingest import ingest_edgelist
from graphonlab.sampling import sample_graph

A = sample_graph(G.product(), 1000, "weighted", "sorted", seed=0).adjacency
res = sort_and_smooth(A)
x = res.surface.points
print("product: L =", round(res.estimate.global_L, 4),
      " max |surface - uv| =", round(np.abs(res.surface.values - np.outer(x, x)).max(), 4))

A = sample_graph(G.constant(0.5), 1000, "weighted", "sorted", seed=0).adjacency
print("constant: L =", sort_and_smooth(A).estimate.global_L)

# exact evaluation of a piecewise graphon: per-piece constants stay below
# the declared ones while jumps across boundaries blow up the global one
fig1 = G.figure1_family(4, 4.0, 7)
est = estimate_lipschitz(Surface.from_graphon(fig1, 1024), fig1.partition)
print("figure1 per-piece max:", round(est.piece_max, 4), " global:", round(est.global_L, 1))

# change-point detection recovers the pieces from the exact surface; on a
# noisy stochastic sample the jumps can drown in the smoothing error
surf = Surface.from_graphon(fig1, 1024)
print("declared breakpoints:", np.round(fig1.partition.breakpoints, 3))
print("detected (exact):    ", np.round(detect_partition(surf, 6).breakpoints, 3))
A = sample_graph(fig1, 1500, "stochastic", "sorted", seed=0).adjacency
res = sort_and_smooth(A, K_max=6)
print("detected (sample):   ", np.round(res.estimate.partition_used.breakpoints, 3))

# a sparse clustered edge list is far rougher on the mean-normalised scale
fixture = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "citation_like.txt"
if fixture.exists():
    est = sort_and_smooth(ingest_edgelist(fixture)).estimate
    print("citation-like fixture: L (L1 scale) =", round(est.global_L_l1, 2))
