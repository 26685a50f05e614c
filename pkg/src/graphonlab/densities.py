"""Homomorphism densities of small motifs in graphs and graphons."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import ParameterError
from .graphons import AnalyticGraphon, Graphon, StepGraphon


@dataclass(frozen=True)
class Motif:
    name: str
    n_nodes: int
    edges: tuple

    @property
    def degrees(self) -> list[int]:
        deg = [0] * self.n_nodes
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def subscripts(self) -> str:
        letters = "abcd"
        return ",".join(letters[a] + letters[b] for a, b in self.edges)


MOTIFS = {
    "edge": Motif("edge", 2, ((0, 1),)),
    "path2": Motif("path2", 3, ((0, 1), (1, 2))),
    "triangle": Motif("triangle", 3, ((0, 1), (1, 2), (2, 0))),
    "cycle4": Motif("cycle4", 4, ((0, 1), (1, 2), (2, 3), (3, 0))),
}


def get_motif(F) -> Motif:
    if isinstance(F, Motif):
        return F
    try:
        return MOTIFS[F]
    except KeyError:
        raise ParameterError(f"unknown motif {F!r}; choose from {sorted(MOTIFS)}") from None


def _weighted_density(F: Motif, M: np.ndarray, w: np.ndarray) -> float:
    """sum over node maps of prod_edges M * prod_nodes w."""
    letters = "abcd"[:F.n_nodes]
    spec = F.subscripts() + "," + ",".join(letters) + "->"
    operands = [M] * len(F.edges) + [w] * F.n_nodes
    return float(np.einsum(spec, *operands, optimize=True))


def hom_density_graph(F, A) -> float:
    """t(F, G): homomorphism count over all n^|V(F)| node maps, normalised.

    Weighted adjacencies contribute products of edge weights.
    """
    F = get_motif(F)
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n < 1:
        raise ParameterError("graph must have at least one node")
    return _weighted_density(F, A, np.full(n, 1.0 / n))


def hom_density_graphon(F, g: Graphon, m: int = 64) -> float:
    """t(F, W): closed form for constant/product graphons, exact for step
    graphons, midpoint quadrature on an ``m``-grid otherwise."""
    F = get_motif(F)
    if isinstance(g, AnalyticGraphon) and g.expression == "constant":
        return g.parameters[0] ** len(F.edges)
    if isinstance(g, AnalyticGraphon) and g.expression == "product":
        return float(prod(1.0 / (d + 1) for d in F.degrees))
    if isinstance(g, StepGraphon):
        return _weighted_density(F, g.block_matrix, g.lengths)
    if m < 64:
        raise ParameterError("quadrature size m must be at least 64")
    return _weighted_density(F, g.grid(m), np.full(m, 1.0 / m))
