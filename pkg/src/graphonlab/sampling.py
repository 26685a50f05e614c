"""Latent positions, weighted/stochastic graph sampling and induced graphons."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParameterError
from .graphons import Graphon, StepGraphon

LATENT_MODES = ("iid", "sorted", "grid")
KINDS = ("weighted", "stochastic")


@dataclass(frozen=True, eq=False)
class LatentAssignment:
    positions: np.ndarray
    mode: str
    seed: int | None = None

    @property
    def n(self) -> int:
        return len(self.positions)


@dataclass(frozen=True, eq=False)
class SampledGraph:
    adjacency: np.ndarray
    latents: LatentAssignment
    kind: str
    source: str
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]


def sample_latents(n: int, mode: str = "iid", seed=None) -> LatentAssignment:
    """Draw ``n`` latent positions.

    ``iid`` draws Uniform[0,1]; ``sorted`` sorts the very same draws;
    ``grid`` uses the midpoints (i - 1/2)/n and ignores the seed.
    """
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    n = int(n)
    if mode == "grid":
        pos = (np.arange(n) + 0.5) / n
    elif mode in ("iid", "sorted"):
        pos = np.random.default_rng(seed).uniform(0.0, 1.0, size=n)
        if mode == "sorted":
            pos = np.sort(pos)
    else:
        raise ParameterError(f"unknown latent mode {mode!r}; choose from {LATENT_MODES}")
    pos.setflags(write=False)
    return LatentAssignment(pos, mode, seed)


def edge_probabilities(g: Graphon, latents: LatentAssignment) -> np.ndarray:
    u = latents.positions
    P = np.array(g.evaluate(u[:, None], u[None, :]), dtype=float)
    np.fill_diagonal(P, 0.0)
    return P


def sample_weighted(g: Graphon, latents: LatentAssignment) -> SampledGraph:
    A = edge_probabilities(g, latents)
    return SampledGraph(A, latents, "weighted", g.name, latents.seed)


def sample_stochastic(g: Graphon, latents: LatentAssignment, seed=None) -> SampledGraph:
    """Bernoulli edges, one draw per unordered pair ``i < j``."""
    P = edge_probabilities(g, latents)
    n = P.shape[0]
    iu = np.triu_indices(n, k=1)
    draws = np.random.default_rng(seed).uniform(size=len(iu[0]))
    A = np.zeros((n, n))
    A[iu] = (draws < P[iu]).astype(float)
    A = A + A.T
    return SampledGraph(A, latents, "stochastic", g.name, seed)


def sample_graph(g: Graphon, n: int, kind: str = "weighted", mode: str = "iid",
                 seed=None) -> SampledGraph:
    """Convenience wrapper: latents and edges from one seed."""
    if kind not in KINDS:
        raise ParameterError(f"unknown sampling kind {kind!r}; choose from {KINDS}")
    ss = np.random.SeedSequence(seed)
    latent_seed, edge_seed = (int(s.generate_state(1)[0]) for s in ss.spawn(2))
    lat = sample_latents(n, mode, latent_seed)
    if kind == "weighted":
        G = sample_weighted(g, lat)
    else:
        G = sample_stochastic(g, lat, edge_seed)
    return SampledGraph(G.adjacency, lat, kind, g.name, seed)


def check_adjacency(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("adjacency must be a square matrix")
    if not np.all(np.isfinite(A)):
        raise InputError("adjacency has non-finite entries")
    if not np.array_equal(A, A.T):
        raise InputError("adjacency must be symmetric")
    return A


def induced_graphon(graph) -> StepGraphon:
    """Step graphon on the regular n-partition with the adjacency as blocks."""
    A = graph.adjacency if isinstance(graph, SampledGraph) else graph
    A = check_adjacency(A)
    if A.size and (A.min() < 0.0 or A.max() > 1.0):
        raise InputError("adjacency entries must lie in [0,1]")
    return StepGraphon(A)


def write_dense(path, A) -> None:
    np.savetxt(path, np.asarray(A), fmt="%.17g")


def write_edgelist(path, A) -> None:
    """One ``i j weight`` line per nonzero upper-triangle entry, 0-indexed."""
    A = np.asarray(A)
    i, j = np.nonzero(np.triu(A, k=1))
    with open(path, "w") as fh:
        for a, b in zip(i, j):
            fh.write(f"{a} {b} {A[a, b]:.17g}\n")
