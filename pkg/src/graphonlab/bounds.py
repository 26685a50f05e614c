"""Closed-form eigenvalue convergence bounds for sampled graphs.

Three families, all in natural logarithms:

* ``standard``  -- no structural assumption: sqrt(8 * 22 / sqrt(log n)),
  holding with probability 1 - exp(-n / (2 log n)).
* ``lipschitz`` -- globally Lipschitz graphon with constant L.
* ``piecewise`` -- K-interval piecewise-Lipschitz graphon, max constant L.

Invalid parameter combinations produce reports with ``valid=False`` and a
reason instead of raising, so sweeps can record infeasible points.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .errors import ParameterError

FAMILIES = ("standard", "lipschitz", "piecewise")


@dataclass(frozen=True)
class BoundParams:
    chi: float = 0.05
    x1: float = 0.3
    x2: float = 0.3
    delta: float = 0.05
    L: float | None = None
    K: int | None = None


@dataclass(frozen=True)
class BoundReport:
    family: str
    n: int
    value: float
    probability: float
    params: BoundParams
    valid: bool = True
    reason: str = ""
    clamped: bool = False

    def as_row(self) -> dict:
        row = {"family": self.family, "n": self.n, "value": self.value,
               "probability": self.probability, "valid": self.valid,
               "clamped": self.clamped, "reason": self.reason}
        row.update({k: v for k, v in asdict(self.params).items()})
        return row


def _sampling_term(n: int, chi: float) -> float:
    return math.sqrt(4.0 * n * math.log(2.0 * n / chi)) / n


def standard_bound(n: int, params: BoundParams | None = None) -> BoundReport:
    params = params or BoundParams()
    if n < 3:
        raise ParameterError("standard bound needs n >= 3")
    ln = math.log(n)
    value = math.sqrt(8.0 * 22.0 / math.sqrt(ln))
    prob = 1.0 - math.exp(-n / (2.0 * ln))
    return BoundReport("standard", n, value, prob, params)


def _invalid(family, n, params, reason):
    return BoundReport(family, n, math.nan, math.nan, params, False, reason)


def lipschitz_bound(n: int, params: BoundParams) -> BoundReport:
    """Lipschitz-case bound; the probability is computed literally as
    ``1 - chi * (1 - 2 x1) * (1 - x2)``."""
    chi, x1, x2, L = params.chi, params.x1, params.x2, params.L
    if L is None or not L > 0:
        return _invalid("lipschitz", n, params, "needs Lipschitz constant L > 0")
    if not (0 < x1 <= 0.3 and 0 < x2 <= 0.3):
        return _invalid("lipschitz", n, params, "x1, x2 must lie in (0, 0.3]")
    if not chi > 0:
        return _invalid("lipschitz", n, params, "chi must be positive")
    if n < 4.0 / x2:
        return _invalid("lipschitz", n, params, f"n < 4/x2 = {4.0 / x2:g}")
    first = 2.0 * L / n * math.log((n + 1) ** 2 / math.log(1.0 / (1.0 - x1)))
    value = first + _sampling_term(n, chi)
    prob = 1.0 - chi * (1.0 - 2.0 * x1) * (1.0 - x2)
    return BoundReport("lipschitz", n, value, prob, params)


def piecewise_dn(n: int, delta: float) -> float:
    return 1.0 / n + math.sqrt(8.0 * math.log(n / delta) / (n + 1))


def piecewise_bound(n: int, params: BoundParams) -> BoundReport:
    """Piecewise-Lipschitz bound; a single ``delta`` serves as both the
    radius parameter in d_n and the failure probability."""
    chi, delta, L, K = params.chi, params.delta, params.L, params.K
    if L is None or L < 0 or K is None or K < 1:
        return _invalid("piecewise", n, params, "needs L >= 0 and K >= 1")
    if not chi > 0:
        return _invalid("piecewise", n, params, "chi must be positive")
    lo = n * math.exp(-n / 5.0)
    if not lo < delta < math.exp(-1.0):
        return _invalid("piecewise", n, params,
                        f"delta outside ({lo:.3g}, e^-1)")
    dn = piecewise_dn(n, delta)
    slope = L * L - K * K
    clamped = slope < 0
    radicand = max(slope, 0.0) * dn * dn + K * dn
    value = 2.0 * math.sqrt(radicand) + _sampling_term(n, chi)
    prob = (1.0 - chi) * (1.0 - delta)
    return BoundReport("piecewise", n, value, prob, params, clamped=clamped)


def evaluate(family: str, n: int, params: BoundParams) -> BoundReport:
    if family == "standard":
        return standard_bound(n, params)
    if family == "lipschitz":
        return lipschitz_bound(n, params)
    if family == "piecewise":
        return piecewise_bound(n, params)
    raise ParameterError(f"unknown bound family {family!r}")


def geometric_grid(n_min: int, n_max: int, points: int) -> list[int]:
    if points < 2:
        return [int(n_min)]
    lo, hi = math.log(n_min), math.log(n_max)
    grid = [round(math.exp(lo + (hi - lo) * i / (points - 1))) for i in range(points)]
    return sorted(set(grid))


@dataclass
class CrossoverTable:
    n_grid: list
    standard: list
    lipschitz: list
    piecewise: list
    crossover_n: int | None = None
    rows: list = field(default_factory=list)


def crossover_table(n_grid, params: BoundParams) -> CrossoverTable:
    """All three bounds over ``n_grid``.

    ``crossover_n`` is the smallest grid point from which the piecewise
    bound stays strictly below the standard bound for the rest of the grid.
    """
    n_grid = [int(n) for n in n_grid]
    if not n_grid:
        raise ParameterError("empty n grid")
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ParameterError("n grid must be strictly ascending")
    std, lip, pw, rows = [], [], [], []
    for n in n_grid:
        reps = [evaluate(f, n, params) for f in FAMILIES]
        rows.extend(reps)
        std.append(reps[0].value)
        lip.append(reps[1].value if reps[1].valid else math.nan)
        pw.append(reps[2].value if reps[2].valid else math.nan)
    crossover = None
    for i in range(len(n_grid) - 1, -1, -1):
        if pw[i] < std[i]:
            crossover = n_grid[i]
        else:
            break
    return CrossoverTable(n_grid, std, lip, pw, crossover, rows)
