"""Graphon representations: analytic (registry), step, and piecewise-Lipschitz.

All graphons are immutable and evaluate vectorised over broadcastable
coordinate arrays. Symmetry holds exactly (bit-for-bit) by construction:
registry expressions only combine ``u`` and ``v`` through commutative
operations, step graphons require symmetric block matrices, and
piecewise graphons store only the upper triangle of their piece grid.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ParameterError

SYMMETRY_TOL = 1e-12


# ---------------------------------------------------------------------------
# expression registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expression:
    name: str
    func: Callable[..., np.ndarray]
    n_params: int
    # Lipschitz constant under the metric |du| + |dv|
    lipschitz: Callable[[Sequence[float]], float]
    check: Callable[[Sequence[float]], None] = lambda p: None


def _check_probability(p):
    if not 0.0 <= p[0] <= 1.0:
        raise ParameterError(f"constant graphon needs p in [0,1], got {p[0]}")


def _check_sinusoid(p):
    c, a, omega = p
    if not 0.0 <= c <= 1.0:
        raise ParameterError(f"sinusoid offset must lie in [0,1], got {c}")
    if abs(a) > min(c, 1.0 - c) + 1e-15:
        raise ParameterError("sinusoid amplitude would leave [0,1]")
    if not np.isfinite(omega):
        raise ParameterError("sinusoid frequency must be finite")


def _check_smooth_sbm(p):
    p_in, p_out, width = p
    if not (0.0 <= p_in <= 1.0 and 0.0 <= p_out <= 1.0):
        raise ParameterError("smooth_sbm probabilities must lie in [0,1]")
    if width <= 0:
        raise ParameterError("smooth_sbm width must be positive")


def _membership(x, width):
    return 1.0 / (1.0 + np.exp(-(x - 0.5) / width))


def _smooth_sbm(u, v, p_in, p_out, width):
    mu, mv = _membership(u, width), _membership(v, width)
    same = mu * mv + (1.0 - mu) * (1.0 - mv)
    cross = mu * (1.0 - mv) + (1.0 - mu) * mv
    return p_in * same + p_out * cross


REGISTRY: dict[str, Expression] = {
    "constant": Expression(
        "constant",
        lambda u, v, p: np.full(np.broadcast(u, v).shape, float(p), dtype=float),
        1, lambda p: 0.0, _check_probability),
    "product": Expression("product", lambda u, v: u * v, 0, lambda p: 1.0),
    "min": Expression("min", lambda u, v: np.minimum(u, v), 0, lambda p: 1.0),
    "max": Expression("max", lambda u, v: np.maximum(u, v), 0, lambda p: 1.0),
    "sinusoid": Expression(
        "sinusoid",
        lambda u, v, c, a, omega: c + a * np.sin(omega * (u + v)),
        3, lambda p: abs(p[1] * p[2]), _check_sinusoid),
    "smooth_sbm": Expression(
        "smooth_sbm", _smooth_sbm, 3,
        lambda p: abs(p[0] - p[1]) / (4.0 * p[2]), _check_smooth_sbm),
}


def _as_coords(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    bad = ~((u >= 0.0) & (u <= 1.0))
    bad_v = ~((v >= 0.0) & (v <= 1.0))
    if np.any(bad) or np.any(bad_v):
        raise ParameterError("graphon coordinates must lie in [0,1]")
    return u, v


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _ret(out):
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# graphon types
# ---------------------------------------------------------------------------

class Graphon:
    """Base class. Subclasses implement ``_eval`` on validated arrays."""

    variant = "abstract"

    def evaluate(self, u, v):
        u, v = _as_coords(u, v)
        return _ret(self._eval(u, v))

    __call__ = evaluate

    def _eval(self, u, v):
        raise NotImplementedError

    def grid(self, m: int) -> np.ndarray:
        """Kernel values on the ``m``-point midpoint grid."""
        x = (np.arange(m) + 0.5) / m
        return np.asarray(self._eval(x[:, None], x[None, :]), dtype=float)

    @property
    def lipschitz_constant(self) -> float | None:
        """Global Lipschitz constant, or None if the graphon may jump."""
        return None

    @property
    def piece_count(self) -> int:
        return 1

    @property
    def piece_lipschitz(self) -> float:
        """Max per-piece Lipschitz constant (piecewise-Lipschitz reading)."""
        return 0.0

    @property
    def name(self) -> str:
        return self.variant

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass(frozen=True, eq=False)
class AnalyticGraphon(Graphon):
    expression: str
    parameters: tuple = ()

    variant = "analytic"

    def __post_init__(self):
        if self.expression not in REGISTRY:
            raise ParameterError(
                f"unknown expression {self.expression!r}; "
                f"choose from {sorted(REGISTRY)}")
        expr = REGISTRY[self.expression]
        params = tuple(float(p) for p in self.parameters)
        if len(params) != expr.n_params:
            raise ParameterError(
                f"{self.expression} takes {expr.n_params} parameters, "
                f"got {len(params)}")
        expr.check(params)
        object.__setattr__(self, "parameters", params)

    def _eval(self, u, v):
        return REGISTRY[self.expression].func(u, v, *self.parameters)

    @property
    def lipschitz_constant(self):
        return REGISTRY[self.expression].lipschitz(self.parameters)

    @property
    def piece_lipschitz(self):
        return self.lipschitz_constant

    @property
    def name(self):
        if not self.parameters:
            return self.expression
        return f"{self.expression}({','.join(f'{p:g}' for p in self.parameters)})"

    def to_dict(self):
        return {"variant": self.variant, "expression": self.expression,
                "parameters": list(self.parameters)}


def constant(p: float) -> AnalyticGraphon:
    return AnalyticGraphon("constant", (p,))


def product() -> AnalyticGraphon:
    return AnalyticGraphon("product")


@dataclass(frozen=True, eq=False)
class Partition:
    breakpoints: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        if b.ndim != 1 or len(b) < 2:
            raise ParameterError("a partition needs at least the endpoints 0 and 1")
        if b[0] != 0.0 or b[-1] != 1.0:
            raise ParameterError("partition endpoints must be exactly 0 and 1")
        if np.any(np.diff(b) <= 0):
            raise ParameterError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", _readonly(b))

    @classmethod
    def uniform(cls, k: int) -> "Partition":
        if k < 1:
            raise ParameterError("need at least one interval")
        b = np.arange(k + 1) / k
        return cls(b)

    @property
    def K(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def locate(self, x) -> np.ndarray:
        """Interval index: half-open [b_{j-1}, b_j), the last one closed."""
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        return np.clip(idx, 0, self.K - 1)


@dataclass(frozen=True, eq=False)
class StepGraphon(Graphon):
    """Block-constant graphon. ``boundaries`` defaults to a uniform grid."""

    block_matrix: np.ndarray
    boundaries: np.ndarray | None = None

    variant = "step"

    def __post_init__(self):
        M = np.array(self.block_matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
            raise ParameterError("block matrix must be square and non-empty")
        if not np.array_equal(M, M.T):
            raise ParameterError("block matrix must be symmetric")
        if np.any(~np.isfinite(M)) or M.min() < 0.0 or M.max() > 1.0:
            raise ParameterError("block matrix entries must lie in [0,1]")
        k = M.shape[0]
        part = Partition.uniform(k) if self.boundaries is None else Partition(self.boundaries)
        if part.K != k:
            raise ParameterError("boundaries do not match block matrix size")
        object.__setattr__(self, "block_matrix", _readonly(M))
        object.__setattr__(self, "boundaries", part.breakpoints)
        object.__setattr__(self, "_partition", part)

    @property
    def partition(self) -> Partition:
        return self._partition

    @property
    def k(self) -> int:
        return self.block_matrix.shape[0]

    @property
    def lengths(self) -> np.ndarray:
        return self._partition.lengths

    def _eval(self, u, v):
        return self.block_matrix[self._partition.locate(u), self._partition.locate(v)]

    @property
    def lipschitz_constant(self):
        return 0.0 if self.k == 1 else None

    @property
    def piece_count(self):
        return self.k

    @property
    def name(self):
        return f"step[k={self.k}]"

    def to_dict(self):
        return {"variant": self.variant,
                "block_matrix": self.block_matrix.tolist(),
                "boundaries": self.boundaries.tolist()}


@dataclass(frozen=True, eq=False)
class PiecewiseLipschitzGraphon(Graphon):
    """K x K grid of analytic pieces over a partition of [0,1].

    ``pieces[i][j]`` for ``i <= j`` is used as given; the lower triangle is
    obtained by swapping the arguments, so only the upper triangle is read.
    Piece expressions are evaluated in global coordinates.
    """

    partition: Partition
    pieces: tuple
    piece_constants: np.ndarray

    variant = "piecewise"

    def __post_init__(self):
        K = self.partition.K
        pieces = tuple(tuple(row) for row in self.pieces)
        if len(pieces) != K or any(len(row) != K for row in pieces):
            raise ParameterError("piece grid must be K x K")
        for row in pieces:
            for p in row:
                if not isinstance(p, AnalyticGraphon):
                    raise ParameterError("pieces must be AnalyticGraphon instances")
        Lk = np.array(self.piece_constants, dtype=float)
        if Lk.shape != (K, K):
            raise ParameterError("piece_constants must be K x K")
        Lk = np.triu(Lk) + np.triu(Lk, 1).T
        if np.any(Lk < 0):
            raise ParameterError("Lipschitz constants must be nonnegative")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "piece_constants", _readonly(Lk))

    @property
    def K(self) -> int:
        return self.partition.K

    @property
    def L(self) -> float:
        return float(self.piece_constants.max())

    def _eval(self, u, v):
        u, v = np.broadcast_arrays(u, v)
        iu = self.partition.locate(u)
        iv = self.partition.locate(v)
        out = np.empty(u.shape, dtype=float)
        for i in range(self.K):
            for j in range(self.K):
                mask = (iu == i) & (iv == j)
                if not np.any(mask):
                    continue
                if i <= j:
                    out[mask] = self.pieces[i][j]._eval(u[mask], v[mask])
                else:
                    out[mask] = self.pieces[j][i]._eval(v[mask], u[mask])
        return out

    @property
    def lipschitz_constant(self):
        return self.L if self.K == 1 else None

    @property
    def piece_count(self):
        return self.K

    @property
    def piece_lipschitz(self):
        return self.L

    @property
    def name(self):
        return f"piecewise[K={self.K}]"

    def to_dict(self):
        return {"variant": self.variant,
                "breakpoints": self.partition.breakpoints.tolist(),
                "pieces": [[p.to_dict() for p in row] for row in self.pieces],
                "piece_constants": self.piece_constants.tolist()}


def figure1_family(K: int = 4, L_max: float = 4.0, seed: int = 0) -> PiecewiseLipschitzGraphon:
    """Random piecewise-Lipschitz graphon on K equal intervals.

    Each piece is ``c + a*sin(w*(u+v))`` with ``|a| <= min(c, 1-c)`` so the
    range stays in [0,1] without clipping. The declared per-piece constant
    is ``2|a*w|``, which bounds the piece under |du|+|dv| (actual constant
    ``|a*w|``) and also under the sum-of-partials reading. The piece with the
    largest declared constant is scaled to exactly ``L_max``.
    """
    if int(K) != K or K < 1:
        raise ParameterError("K must be a positive integer")
    if not (np.isfinite(L_max) and L_max > 0):
        raise ParameterError("L_max must be positive and finite")
    K = int(K)
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(K)
    for _ in range(1000):
        offsets = np.zeros((K, K))
        offsets[iu] = rng.uniform(0.25, 0.75, size=len(iu[0]))
        offsets = np.triu(offsets) + np.triu(offsets, 1).T
        # neighbouring rows must differ so that the jumps are visible
        if K == 1 or np.abs(np.diff(offsets, axis=0)).mean(axis=1).min() >= 0.1:
            break
    else:  # pragma: no cover - practically unreachable
        raise ParameterError("could not draw separable piece offsets")
    Lk = np.zeros((K, K))
    Lk[iu] = L_max * rng.uniform(0.25, 1.0, size=len(iu[0]))
    Lk[iu[0][0], iu[1][0]] = L_max
    amps = rng.uniform(0.1, 0.25, size=len(iu[0]))
    pieces = [[None] * K for _ in range(K)]
    for t, (i, j) in enumerate(zip(*iu)):
        c, a = offsets[i, j], amps[t]
        if a > min(c, 1.0 - c):
            raise ParameterError("infeasible amplitude scaling")
        omega = Lk[i, j] / (2.0 * a)
        pieces[i][j] = AnalyticGraphon("sinusoid", (c, a, omega))
    for i in range(K):
        for j in range(i):
            pieces[i][j] = pieces[j][i]
    return PiecewiseLipschitzGraphon(Partition.uniform(K), pieces, Lk)


# ---------------------------------------------------------------------------
# validation and serialisation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    symmetry_violation: float
    range_violation: float
    grid_resolution: int
    passed: bool = field(init=False)

    def __post_init__(self):
        ok = self.symmetry_violation <= SYMMETRY_TOL and self.range_violation <= SYMMETRY_TOL
        object.__setattr__(self, "passed", bool(ok))


def validate(g: Graphon, grid_resolution: int = 512) -> ValidationReport:
    if grid_resolution < 2:
        raise ParameterError("grid_resolution must be at least 2")
    x = np.linspace(0.0, 1.0, grid_resolution)
    W = np.asarray(g._eval(x[:, None], x[None, :]), dtype=float)
    sym = float(np.max(np.abs(W - W.T)))
    rng_violation = float(max(0.0, -W.min(), W.max() - 1.0))
    if not np.all(np.isfinite(W)):
        rng_violation = float("inf")
    return ValidationReport(sym, rng_violation, grid_resolution)


def from_dict(d: dict) -> Graphon:
    variant = d.get("variant")
    if variant == "analytic":
        return AnalyticGraphon(d["expression"], tuple(d.get("parameters", ())))
    if variant == "step":
        return StepGraphon(np.array(d["block_matrix"], dtype=float), d.get("boundaries"))
    if variant == "piecewise":
        pieces = [[from_dict(p) for p in row] for row in d["pieces"]]
        return PiecewiseLipschitzGraphon(
            Partition(d["breakpoints"]), pieces, np.array(d["piece_constants"]))
    if variant == "figure1":
        return figure1_family(d.get("K", 4), d.get("L_max", 4.0), d.get("seed", 0))
    raise ParameterError(f"unknown graphon variant {variant!r}")


def from_json(text: str) -> Graphon:
    return from_dict(json.loads(text))


def parse_graphon(spec: str) -> Graphon:
    """Resolve a graphon from a JSON file path, inline JSON, or shorthand.

    Shorthand is ``name`` or ``name:p1,p2,...`` with ``name`` a registry
    expression, or ``figure1:K,L_max,seed``.
    """
    import os

    spec = spec.strip()
    if spec.startswith("{"):
        return from_json(spec)
    if os.path.isfile(spec):
        with open(spec) as fh:
            return from_json(fh.read())
    name, _, rest = spec.partition(":")
    try:
        args = [float(t) for t in rest.split(",")] if rest else []
    except ValueError as exc:
        raise ParameterError(f"cannot parse graphon shorthand {spec!r}") from exc
    if name == "figure1":
        K, L, s = (args + [4, 4.0, 0][len(args):])[:3]
        return figure1_family(int(K), L, int(s))
    return AnalyticGraphon(name, tuple(args))
