"""Spectra of graphon operators and Weyl gaps between them.

Eigenvalues are reported on two signed branches: the positive branch in
descending order and the negative branch in ascending order, so index
``i`` means the i-th largest positive and ``-i`` the i-th most negative
eigenvalue. Entries past an operator's rank count as zero.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .errors import NumericalError, ParameterError
from .graphons import Graphon, StepGraphon
from .sampling import SampledGraph, check_adjacency

ZERO_TOL = 1e-12
DENSE_LIMIT = 4096  # above this, extremal eigenvalues come from ARPACK


@dataclass(frozen=True, eq=False)
class Spectrum:
    positive: np.ndarray
    negative: np.ndarray
    zero_mass: int | None
    source: str
    resolution: int | None = None
    converged: bool = True

    def value(self, index: int) -> float:
        """Eigenvalue at a signed index; zero past the end of a branch."""
        if index == 0:
            raise ParameterError("signed eigenvalue indices start at 1 / -1")
        branch = self.positive if index > 0 else self.negative
        i = abs(index) - 1
        return float(branch[i]) if i < len(branch) else 0.0

    def rows(self, top_k: int | None = None):
        """(source, signed_index, eigenvalue, resolution) rows."""
        out = []
        for sign, branch in ((1, self.positive), (-1, self.negative)):
            k = len(branch) if top_k is None else top_k
            for i in range(1, k + 1):
                out.append((self.source, sign * i, self.value(sign * i), self.resolution))
        return out


@dataclass(frozen=True)
class WeylGapRecord:
    index: int
    lambda_graphon: float
    lambda_sample: float
    gap: float


def _split(eigs, top_k, zero_tol=ZERO_TOL):
    eigs = np.asarray(eigs, dtype=float)
    pos = np.sort(eigs[eigs > zero_tol])[::-1][:top_k]
    neg = np.sort(eigs[eigs < -zero_tol])[:top_k]
    return pos, neg


def symmetric_eigenvalues(M: np.ndarray, top_k: int):
    """Eigenvalues of a symmetric matrix, or the extremal ones when large.

    Returns ``(eigs, complete)``; ``complete`` is False when only the
    ``top_k`` largest and smallest were computed.
    """
    m = M.shape[0]
    if m <= DENSE_LIMIT or 2 * top_k + 2 >= m:
        try:
            return scipy.linalg.eigvalsh(M, check_finite=True), True
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericalError(f"dense eigensolver failed on {m}x{m} matrix: {exc}") from exc
    v0 = np.random.default_rng(0).standard_normal(m)
    vals = []
    for which in ("LA", "SA"):
        try:
            w = scipy.sparse.linalg.eigsh(M, k=top_k, which=which, v0=v0,
                                          tol=1e-12, return_eigenvectors=False,
                                          maxiter=20 * m)
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise NumericalError(
                f"ARPACK did not converge ({which}) on {m}x{m} matrix") from exc
        vals.append(w)
    return np.concatenate(vals), False


def _is_uniform(b: np.ndarray) -> bool:
    k = len(b) - 1
    return np.array_equal(b, np.arange(k + 1) / k)


def spectrum_of_step(g: StepGraphon, top_k: int = 3, source: str | None = None) -> Spectrum:
    """Exact operator spectrum of a step graphon.

    For blocks of lengths ``l`` the operator is similar to ``S M S`` with
    ``S = diag(sqrt(l))``; uniform blocks reduce to ``M / k``.
    """
    M = g.block_matrix
    if _is_uniform(g.boundaries):
        B = M / g.k
    else:
        s = np.sqrt(g.lengths)
        B = s[:, None] * M * s[None, :]
    eigs, complete = symmetric_eigenvalues(B, top_k)
    pos, neg = _split(eigs, top_k)
    zero = int(np.sum(np.abs(eigs) <= ZERO_TOL)) if complete else None
    return Spectrum(pos, neg, zero, source or g.name)


def spectrum_of_graph(graph, top_k: int = 3, source: str | None = None) -> Spectrum:
    """Spectrum of the induced graphon of an adjacency matrix (eig(A)/n)."""
    if isinstance(graph, SampledGraph):
        source = source or f"{graph.source}:n={graph.n}"
        A = graph.adjacency
    else:
        A = check_adjacency(graph)
    n = A.shape[0]
    eigs, complete = symmetric_eigenvalues(A / n, top_k)
    pos, neg = _split(eigs, top_k)
    zero = int(np.sum(np.abs(eigs) <= ZERO_TOL)) if complete else None
    return Spectrum(pos, neg, zero, source or f"graph:n={n}")


def _padded(pos, neg, top_k):
    out = np.zeros(2 * top_k)
    out[:len(pos)] = pos
    out[top_k:top_k + len(neg)] = neg
    return out


def spectrum_of_analytic(g: Graphon, top_k: int = 3, m: int = 256,
                         tol: float = 1e-6, cap: int = 4096) -> Spectrum:
    """Nystrom (midpoint-rule) spectrum with resolution doubling.

    Starts at ``m`` and doubles until the ``top_k`` eigenvalues on both
    branches move by less than ``tol``, or ``cap`` is reached, in which
    case the result carries ``converged=False`` and a warning is issued.
    """
    if isinstance(g, StepGraphon):
        return spectrum_of_step(g, top_k)
    if m < 64:
        raise ParameterError("discretization size m must be at least 64")
    prev = None
    while True:
        eigs, complete = symmetric_eigenvalues(g.grid(m) / m, top_k)
        pos, neg = _split(eigs, top_k)
        cur = _padded(pos, neg, top_k)
        if prev is not None and np.max(np.abs(cur - prev)) < tol:
            converged = True
            break
        if 2 * m > cap:
            converged = False
            warnings.warn(f"spectrum of {g.name} not converged at m={m}",
                          RuntimeWarning, stacklevel=2)
            break
        prev = cur
        m *= 2
    zero = int(np.sum(np.abs(eigs) <= ZERO_TOL)) if complete else None
    return Spectrum(pos, neg, zero, g.name, m, converged)


def spectrum(g: Graphon, top_k: int = 3, **kw) -> Spectrum:
    if isinstance(g, StepGraphon):
        return spectrum_of_step(g, top_k)
    return spectrum_of_analytic(g, top_k, **kw)


def weyl_gaps(spec_w: Spectrum, spec_g: Spectrum, top_k: int = 3) -> list[WeylGapRecord]:
    records = []
    for index in [*range(1, top_k + 1), *range(-1, -top_k - 1, -1)]:
        a, b = spec_w.value(index), spec_g.value(index)
        records.append(WeylGapRecord(index, a, b, abs(a - b)))
    return records
