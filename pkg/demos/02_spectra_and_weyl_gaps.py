"""
Operator spectra and Weyl gaps
==============================

Compare the eigenvalues of a graphon with those of graphs sampled from it
as the number of nodes grows.
"""
import numpy as np

from graphonlab import graphons as G
from graphonlab.sampling import sample_graph
from graphonlab.spectral import spectrum, spectrum_of_graph, weyl_gaps

# u*v is rank one: its only nonzero eigenvalue is int u^2 du = 1/3
spec_w = spectrum(G.product(), top_k=3)
print("product graphon:", spec_w.positive, "resolution", spec_w.resolution)

# step graphons are handled exactly
print("SBM:", spectrum(G.StepGraphon([[0.8, 0.2], [0.2, 0.8]])).positive)

# median gap at index 1 over a few trials per n
for n in (125, 250, 500, 1000):
    gaps = []
    for t in range(10):
        Gn = sample_graph(G.product(), n, "weighted", "sorted", seed=1000 * t + n)
        gaps.append(weyl_gaps(spec_w, spectrum_of_graph(Gn), 3)[0].gap)
    print(f"n={n:5d}  median |lambda_1(W) - lambda_1(W_G)| = {np.median(gaps):.5f}")

# a piecewise graphon has eigenvalues on both sign branches
fig1 = G.figure1_family(4, 4.0, 7)
s = spectrum(fig1, 3)
print("figure1 positive:", np.round(s.positive, 5), "negative:", np.round(s.negative, 5))
