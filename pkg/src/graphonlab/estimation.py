"""Sort-and-smooth graphon estimation and Lipschitz-constant fitting.

Pipeline: ``l1_normalize`` -> ``degree_sort`` -> ``smooth`` ->
(``detect_partition``) -> ``estimate_lipschitz``. Lipschitz constants are
always measured under the metric |du| + |dv|, for which the constant of a
differentiable kernel is the sup of max(|dW/du|, |dW/dv|).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import InputError, ParameterError
from .graphons import Graphon, Partition

FITS = ("local_linear", "polynomial", "histogram")


@dataclass(frozen=True)
class EstimationConfig:
    bin_width_exponent: float = 0.5
    fit: str = "local_linear"
    degree: int = 3
    bandwidth: float = 1.5  # local-linear kernel width, in bins
    resolution: int = 128

    def __post_init__(self):
        if not 0 < self.bin_width_exponent < 1:
            raise ParameterError("bin_width_exponent must lie in (0, 1)")
        if self.fit not in FITS:
            raise ParameterError(f"fit must be one of {FITS}")
        if not 0 <= self.degree <= 8:
            raise ParameterError("polynomial degree must lie in [0, 8]")
        if self.bandwidth <= 0:
            raise ParameterError("bandwidth must be positive")
        if self.resolution < 32:
            raise ParameterError("surface resolution must be at least 32")


@dataclass(frozen=True, eq=False)
class Normalized:
    matrix: np.ndarray
    l1_scale: float    # mean absolute entry of the input
    max_scale: float   # max of the mean-normalised matrix

    @property
    def total_scale(self) -> float:
        return self.l1_scale * self.max_scale


def l1_normalize(A) -> Normalized:
    """Divide by the mean absolute entry, then by the max of the result.

    Both factors are recorded; ``matrix * max_scale`` recovers the
    mean-normalised matrix.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("adjacency must be square")
    if not np.array_equal(A, A.T):
        raise InputError("adjacency must be symmetric")
    if np.any(A < 0):
        raise InputError("adjacency must be nonnegative")
    l1 = float(np.mean(np.abs(A)))
    if l1 == 0.0:
        raise InputError("cannot normalise an all-zero matrix")
    B = A / l1
    mx = float(B.max())
    return Normalized(B / mx, l1, mx)


def degree_sort(A):
    """Permute rows/columns by nondecreasing degree, ties by index."""
    A = np.asarray(A, dtype=float)
    perm = np.argsort(A.sum(axis=1), kind="stable")
    return A[np.ix_(perm, perm)], perm


@dataclass(frozen=True, eq=False)
class Surface:
    """Kernel values on a uniform midpoint grid of [0,1]^2."""

    values: np.ndarray
    clip_fraction: float = 0.0
    config: EstimationConfig | None = None
    scale: float = 1.0  # multiply by this to return to the mean-normalised scale

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def points(self) -> np.ndarray:
        return (np.arange(self.m) + 0.5) / self.m

    def __call__(self, u, v):
        x = self.points
        interp = RegularGridInterpolator((x, x), self.values, bounds_error=False,
                                         fill_value=None)
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        pts = np.stack([np.clip(u, x[0], x[-1]), np.clip(v, x[0], x[-1])], axis=-1)
        out = interp(pts)
        return float(out) if out.ndim == 0 else out

    @classmethod
    def from_graphon(cls, g: Graphon, m: int = 256) -> "Surface":
        return cls(g.grid(m))


def _bin_means(A, nb):
    n = A.shape[0]
    labels = (np.arange(n) * nb) // n
    starts = np.flatnonzero(np.r_[True, np.diff(labels) > 0])
    sizes = np.diff(np.r_[starts, n])
    sums = np.add.reduceat(np.add.reduceat(A, starts, axis=0), starts, axis=1)
    diag = np.add.reduceat(np.diag(A), starts)
    sums[np.diag_indices(nb)] -= diag
    counts = np.outer(sizes, sizes).astype(float)
    counts[np.diag_indices(nb)] -= sizes
    with np.errstate(invalid="ignore", divide="ignore"):
        H = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    centers = np.add.reduceat((np.arange(n) + 0.5) / n, starts) / sizes
    if np.any(np.isnan(H)):
        # single-node bins have no off-diagonal pairs on the diagonal
        H = np.where(np.isnan(H), np.nanmean(H), H)
    return H, centers


def _local_linear(H, centers, x, bw):
    dx = centers[None, :] - x[:, None]          # (m, nb)
    w = np.exp(-0.5 * (dx / bw) ** 2)
    s0, s1, s2 = w.sum(1), (w * dx).sum(1), (w * dx * dx).sum(1)
    t0 = w @ H @ w.T
    t1 = (w * dx) @ H @ w.T
    t2 = w @ H @ (w * dx).T
    m = len(x)
    G = np.empty((m, m, 3, 3))
    G[..., 0, 0] = np.outer(s0, s0)
    G[..., 0, 1] = G[..., 1, 0] = np.outer(s1, s0)
    G[..., 0, 2] = G[..., 2, 0] = np.outer(s0, s1)
    G[..., 1, 1] = np.outer(s2, s0)
    G[..., 1, 2] = G[..., 2, 1] = np.outer(s1, s1)
    G[..., 2, 2] = np.outer(s0, s2)
    rhs = np.stack([t0, t1, t2], axis=-1)[..., None]
    return np.linalg.solve(G, rhs)[..., 0, 0]


def _polynomial(H, centers, x, degree):
    from numpy.polynomial import legendre

    Vb = legendre.legvander(2 * centers - 1, degree)
    Vx = legendre.legvander(2 * x - 1, degree)
    # separable least squares: H ~ Vb C Vb^T
    pinv = np.linalg.pinv(Vb)
    C = pinv @ H @ pinv.T
    C = (C + C.T) / 2
    return Vx @ C @ Vx.T


def smooth(A, config: EstimationConfig | None = None) -> Surface:
    """Histogram bins of width n^-a followed by the configured fit.

    Diagonal entries are excluded from the bin means. The fitted surface is
    symmetrised, clipped to [0,1], and the clipped fraction is recorded.
    """
    config = config or EstimationConfig()
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    nb = int(np.floor(n ** config.bin_width_exponent + 1e-9))
    if nb < 2:
        raise InputError(f"n={n} gives fewer than 2 bins")
    H, centers = _bin_means(A, nb)
    x = (np.arange(config.resolution) + 0.5) / config.resolution
    if config.fit == "local_linear":
        S = _local_linear(H, centers, x, config.bandwidth / nb)
    elif config.fit == "polynomial":
        S = _polynomial(H, centers, x, config.degree)
    else:
        idx = np.clip((x * nb).astype(int), 0, nb - 1)
        S = H[np.ix_(idx, idx)]
    S = (S + S.T) / 2
    clipped = (S < 0) | (S > 1)
    S = np.clip(S, 0.0, 1.0)
    return Surface(S, float(clipped.mean()), config)


@dataclass(frozen=True, eq=False)
class LipschitzEstimate:
    global_L: float
    per_piece: np.ndarray | None
    partition_used: Partition | None
    config: EstimationConfig | None = None
    clip_fraction: float = 0.0
    scale: float = 1.0

    @property
    def K(self) -> int:
        return 1 if self.partition_used is None else self.partition_used.K

    @property
    def piece_max(self) -> float:
        if self.per_piece is None:
            return self.global_L
        return float(np.nanmax(self.per_piece))

    @property
    def global_L_l1(self) -> float:
        """Global constant on the mean-normalised (L1) scale."""
        return self.global_L * self.scale


def _quotients(values, h):
    du = np.abs(np.diff(values, axis=0)) / h
    dv = np.abs(np.diff(values, axis=1)) / h
    return du, dv


def estimate_lipschitz(surface: Surface, partition: Partition | None = None) -> LipschitzEstimate:
    """Finite-difference Lipschitz constants of a grid surface.

    Uses forward differences between neighbouring grid points along each
    axis. Per-piece constants only use pairs of points lying in the same
    partition cell, so jumps across boundaries are excluded there.
    """
    V = np.asarray(surface.values, dtype=float)
    m = V.shape[0]
    if m < 32:
        raise ParameterError("surface grid needs at least 32 points per axis")
    h = 1.0 / m
    du, dv = _quotients(V, h)
    global_L = float(max(du.max(), dv.max()))
    per_piece = None
    if partition is not None:
        cell = partition.locate((np.arange(m) + 0.5) / m)
        same = cell[1:] == cell[:-1]              # neighbour pairs within one cell
        K = partition.K
        per_piece = np.full((K, K), np.nan)
        for i in range(K):
            for j in range(K):
                ri, rj = cell == i, cell == j
                # u-direction pairs (rows r, r+1 both in cell i), column in j
                qu = du[(same & ri[:-1])][:, rj]
                qv = dv[ri][:, (same & rj[:-1])]
                vals = [q.max() for q in (qu, qv) if q.size]
                if vals:
                    per_piece[i, j] = max(vals)
    return LipschitzEstimate(global_L, per_piece, partition, surface.config,
                             surface.clip_fraction, surface.scale)


def detect_partition(surface: Surface, K_max: int, jump_factor: float = 8.0,
                     floor: float = 1e-9) -> Partition:
    """Change points from the mean absolute difference of adjacent rows.

    A gap between rows ``i`` and ``i+1`` is a candidate when its score
    exceeds ``jump_factor`` times the median score (and ``floor``). Up to
    ``K_max - 1`` candidates are kept, largest first, at least two grid
    steps apart.
    """
    if K_max < 1:
        raise ParameterError("K_max must be at least 1")
    V = np.asarray(surface.values, dtype=float)
    m = V.shape[0]
    scores = np.abs(np.diff(V, axis=0)).mean(axis=1)
    threshold = max(jump_factor * float(np.median(scores)), floor)
    chosen = []
    for i in np.argsort(-scores, kind="stable"):
        if len(chosen) >= K_max - 1 or scores[i] <= threshold:
            break
        if all(abs(int(i) - c) >= 2 for c in chosen):
            chosen.append(int(i))
    bps = sorted((c + 1) / m for c in chosen)
    return Partition([0.0, *bps, 1.0])


@dataclass(frozen=True, eq=False)
class PipelineResult:
    estimate: LipschitzEstimate
    surface: Surface
    permutation: np.ndarray
    normalization: Normalized
    sorted_matrix: np.ndarray = field(repr=False)


def sort_and_smooth(A, config: EstimationConfig | None = None, K_max: int | None = None,
                    partition: Partition | None = None) -> PipelineResult:
    """Full estimation pipeline on an adjacency matrix."""
    norm = l1_normalize(A)
    S, perm = degree_sort(norm.matrix)
    surf = smooth(S, config)
    surf = Surface(surf.values, surf.clip_fraction, surf.config, norm.max_scale)
    if partition is None and K_max is not None and K_max > 1:
        partition = detect_partition(surf, K_max)
    est = estimate_lipschitz(surf, partition)
    return PipelineResult(est, surf, perm, norm, S)
