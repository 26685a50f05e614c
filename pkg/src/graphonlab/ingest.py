"""Edge-list ingestion.

Lines hold ``i j`` or ``i j w`` tokens separated by whitespace; ``#``
starts a comment. Self-loops are dropped and duplicate edges collapse to a
single entry (the last weight seen wins).
"""
from __future__ import annotations

import numpy as np

from .errors import InputError, ParameterError


def parse_edgelist(lines, one_indexed: bool = False):
    """Yield ``(i, j, w)`` triples, 0-indexed."""
    offset = 1 if one_indexed else 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) not in (2, 3):
            raise InputError(f"line {lineno}: expected 'i j' or 'i j w', got {raw.strip()!r}")
        try:
            i, j = int(tok[0]) - offset, int(tok[1]) - offset
            w = float(tok[2]) if len(tok) == 3 else 1.0
        except ValueError:
            raise InputError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
        if i < 0 or j < 0:
            raise InputError(f"line {lineno}: node index below the first valid index")
        if not np.isfinite(w):
            raise InputError(f"line {lineno}: non-finite weight")
        yield i, j, w


def edges_to_adjacency(edges, n: int | None = None, symmetrize: bool = True) -> np.ndarray:
    edges = list(edges)
    top = max((max(i, j) for i, j, _ in edges), default=-1) + 1
    if n is None:
        n = top
    elif top > n:
        raise InputError(f"node index {top - 1} out of range for n={n}")
    A = np.zeros((n, n))
    for i, j, w in edges:
        if i == j:
            continue
        A[i, j] = w
        if symmetrize:
            A[j, i] = w
    if not symmetrize and not np.array_equal(A, A.T):
        raise InputError("edge list is not symmetric; enable symmetrize")
    return A


def subsample(A: np.ndarray, size: int, seed=None):
    """Uniform node subsample without replacement, in the drawn order."""
    n = A.shape[0]
    if not 1 <= size <= n:
        raise ParameterError(f"subsample size must lie in [1, {n}]")
    idx = np.random.default_rng(seed).permutation(n)[:size]
    return A[np.ix_(idx, idx)], idx


def ingest_edgelist(path, one_indexed: bool = False, symmetrize: bool = True,
                    n: int | None = None, subsample_n: int | None = None, seed=None) -> np.ndarray:
    try:
        with open(path) as fh:
            edges = list(parse_edgelist(fh, one_indexed))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    A = edges_to_adjacency(edges, n, symmetrize)
    if subsample_n is not None:
        A, _ = subsample(A, subsample_n, seed)
    return A


def read_dense(path) -> np.ndarray:
    try:
        A = np.loadtxt(path, ndmin=2)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read dense matrix {path}: {exc}") from exc
    return A
