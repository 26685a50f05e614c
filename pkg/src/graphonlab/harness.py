"""Experiment orchestration: convergence sweeps, bound tables, estimation runs.

Every run is a pure function of its configuration. Trial seeds are derived
from ``(seed, n, trial)`` so adding or removing grid points never changes
the samples drawn for the others, and outputs are byte-identical on rerun.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import bounds as B
from . import report
from .densities import get_motif, hom_density_graph, hom_density_graphon
from .errors import ParameterError
from .estimation import (EstimationConfig, LipschitzEstimate, PipelineResult, Surface,
                         detect_partition, estimate_lipschitz, sort_and_smooth)
from .graphons import Graphon, StepGraphon, from_dict, parse_graphon
from .norms import sandwich_audit
from .sampling import KINDS, LATENT_MODES, sample_graph
from .spectral import Spectrum, spectrum, spectrum_of_graph, weyl_gaps

FORMATS = ("csv", "svg", "both")


def resolve_graphon(spec) -> Graphon:
    if isinstance(spec, Graphon):
        return spec
    if isinstance(spec, dict):
        return from_dict(spec)
    return parse_graphon(str(spec))


def trial_seed(seed: int, n: int, trial: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(n), int(trial)]).generate_state(1)[0])


def _wants(formats, kind):
    return formats in (kind, "both")


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepConfig:
    graphon: object = "product"
    n_grid: list = field(default_factory=lambda: [125, 250, 500, 1000, 2000])
    trials: int = 20
    seed: int = 0
    kind: str = "weighted"
    latents: str = "sorted"
    top_k: int = 3
    chi: float = 0.05
    x1: float = 0.3
    x2: float = 0.3
    delta: float = 0.05
    L: float | None = None
    K: int | None = None
    out_dir: str | None = None
    formats: str = "both"

    def __post_init__(self):
        self.n_grid = [int(n) for n in self.n_grid]
        if not self.n_grid:
            raise ParameterError("n_grid must not be empty")
        if any(n < 3 for n in self.n_grid):
            raise ParameterError("every n in n_grid must be at least 3")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ParameterError("n_grid must be strictly ascending")
        if self.trials < 1:
            raise ParameterError("trials must be at least 1")
        if self.kind not in KINDS:
            raise ParameterError(f"kind must be one of {KINDS}")
        if self.latents not in LATENT_MODES:
            raise ParameterError(f"latents must be one of {LATENT_MODES}")
        if self.top_k < 1:
            raise ParameterError("top_k must be at least 1")
        if self.formats not in FORMATS:
            raise ParameterError(f"formats must be one of {FORMATS}")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ParameterError(f"unknown sweep config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "SweepConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        d = asdict(self)
        if isinstance(self.graphon, Graphon):
            d["graphon"] = self.graphon.to_dict()
        return d

    def bound_params(self, g: Graphon) -> tuple[B.BoundParams, B.BoundParams]:
        """(lipschitz params, piecewise params) for graphon ``g``."""
        L_glob = self.L if self.L is not None else g.lipschitz_constant
        L_piece = self.L if self.L is not None else g.piece_lipschitz
        K = self.K if self.K is not None else g.piece_count
        lip = B.BoundParams(self.chi, self.x1, self.x2, self.delta, L_glob, 1)
        pw = B.BoundParams(self.chi, self.x1, self.x2, self.delta, L_piece, K)
        return lip, pw


SWEEP_COLUMNS = ["n", "trial", "index", "lambda_graphon", "lambda_sample", "gap"] + [
    f"{fam}_{col}" for fam in B.FAMILIES for col in ("value", "probability", "valid")]
SUMMARY_COLUMNS = ["n", "index", "median_gap", "mean_gap", "max_gap",
                   "standard_value", "lipschitz_value", "piecewise_value"]


@dataclass
class DominanceAudit:
    family: str
    rows: int
    violations: int
    rate: float
    allowed: float

    @property
    def passed(self) -> bool:
        return self.rate <= self.allowed


@dataclass
class SweepResult:
    config: SweepConfig
    graphon: Graphon
    graphon_spectrum: Spectrum
    rows: list
    bound_reports: dict

    def indices(self) -> list[int]:
        k = self.config.top_k
        return [*range(1, k + 1), *range(-1, -k - 1, -1)]

    def gaps(self, n: int, index: int) -> np.ndarray:
        return np.array([r["gap"] for r in self.rows if r["n"] == n and r["index"] == index])

    def median_gaps(self, index: int = 1) -> list[float]:
        return [float(np.median(self.gaps(n, index))) for n in self.config.n_grid]

    def summary_rows(self) -> list[dict]:
        out = []
        for n in self.config.n_grid:
            for idx in self.indices():
                g = self.gaps(n, idx)
                row = {"n": n, "index": idx, "median_gap": float(np.median(g)),
                       "mean_gap": float(np.mean(g)), "max_gap": float(np.max(g))}
                for fam in B.FAMILIES:
                    rep = self.bound_reports[(fam, n)]
                    row[f"{fam}_value"] = rep.value if rep.valid else None
                out.append(row)
        return out

    def dominance(self) -> list[DominanceAudit]:
        """Empirical violation rate of ``gap <= bound`` per family.

        Allowed rate is the mean stated failure probability plus three
        binomial standard deviations.
        """
        audits = []
        for fam in B.FAMILIES:
            valid = [r for r in self.rows if r[f"{fam}_valid"]]
            if not valid:
                continue
            N = len(valid)
            viol = sum(r["gap"] > r[f"{fam}_value"] for r in valid)
            p = float(np.mean([1.0 - r[f"{fam}_probability"] for r in valid]))
            p = min(max(p, 0.0), 1.0)
            allowed = p + 3.0 * math.sqrt(p * (1.0 - p) / N)
            audits.append(DominanceAudit(fam, N, viol, viol / N, allowed))
        return audits


def run_sweep(config: SweepConfig) -> SweepResult:
    g = resolve_graphon(config.graphon)
    spec_w = spectrum(g, config.top_k)
    lip, pw = config.bound_params(g)
    reports = {}
    for n in config.n_grid:
        reports[("standard", n)] = B.standard_bound(n, B.BoundParams(
            config.chi, config.x1, config.x2, config.delta))
        reports[("lipschitz", n)] = B.lipschitz_bound(n, lip)
        reports[("piecewise", n)] = B.piecewise_bound(n, pw)
    rows = []
    for n in config.n_grid:
        for t in range(config.trials):
            G = sample_graph(g, n, config.kind, config.latents, trial_seed(config.seed, n, t))
            spec_g = spectrum_of_graph(G, config.top_k)
            for rec in weyl_gaps(spec_w, spec_g, config.top_k):
                row = {"n": n, "trial": t, "index": rec.index,
                       "lambda_graphon": rec.lambda_graphon,
                       "lambda_sample": rec.lambda_sample, "gap": rec.gap}
                for fam in B.FAMILIES:
                    rep = reports[(fam, n)]
                    row[f"{fam}_value"] = rep.value if rep.valid else None
                    row[f"{fam}_probability"] = rep.probability if rep.valid else None
                    row[f"{fam}_valid"] = rep.valid
                rows.append(row)
    result = SweepResult(config, g, spec_w, rows, reports)
    if config.out_dir:
        write_sweep(result, config.out_dir, config.formats)
    return result


def write_sweep(result: SweepResult, out_dir, formats="both") -> None:
    os.makedirs(out_dir, exist_ok=True)
    cfg = result.config
    if _wants(formats, "csv"):
        report.write_csv(os.path.join(out_dir, "sweep.csv"), SWEEP_COLUMNS, result.rows)
        report.write_csv(os.path.join(out_dir, "sweep_summary.csv"), SUMMARY_COLUMNS,
                         result.summary_rows())
        report.write_csv(os.path.join(out_dir, "graphon_spectrum.csv"),
                         ["source", "signed_index", "eigenvalue", "resolution"],
                         result.graphon_spectrum.rows(cfg.top_k))
    if _wants(formats, "svg"):
        series = []
        for idx in result.indices():
            med = result.median_gaps(idx)
            series.append({"label": f"gap i={idx}", "x": cfg.n_grid, "y": med})
        for fam in B.FAMILIES:
            ys = [result.bound_reports[(fam, n)].value for n in cfg.n_grid]
            series.append({"label": f"{fam} bound", "x": cfg.n_grid, "y": ys,
                           "dash": True, "markers": False})
        report.line_chart(os.path.join(out_dir, "sweep.svg"), series,
                          title=f"Weyl gaps vs bounds: {result.graphon.name} ({cfg.kind})",
                          xlabel="n", ylabel="median |lambda_i(W) - lambda_i(W_G)|",
                          log_x=True, log_y=True)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

BOUND_COLUMNS = ["family", "n", "value", "probability", "valid", "clamped", "reason",
                 "chi", "x1", "x2", "delta", "L", "K"]
CROSSOVER_COLUMNS = ["n", "standard", "lipschitz", "piecewise", "piecewise_below_standard"]


def run_bounds(n_grid, params: B.BoundParams, out_dir=None, formats="both") -> B.CrossoverTable:
    table = B.crossover_table(n_grid, params)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        if _wants(formats, "csv"):
            report.write_csv(os.path.join(out_dir, "bounds.csv"), BOUND_COLUMNS,
                             [r.as_row() for r in table.rows])
            wide = [[n, s, l, p, bool(p < s)] for n, s, l, p in
                    zip(table.n_grid, table.standard, table.lipschitz, table.piecewise)]
            report.write_csv(os.path.join(out_dir, "crossover.csv"), CROSSOVER_COLUMNS, wide)
            report.write_csv(os.path.join(out_dir, "crossover_summary.csv"),
                             ["crossover_n", "L", "K", "chi", "delta"],
                             [[table.crossover_n, params.L, params.K, params.chi, params.delta]])
        if _wants(formats, "svg"):
            series = [{"label": fam, "x": table.n_grid, "y": getattr(table, fam),
                       "markers": False} for fam in B.FAMILIES]
            report.line_chart(os.path.join(out_dir, "bounds.svg"), series,
                              title=f"Convergence bounds (L={params.L}, K={params.K})",
                              xlabel="n", ylabel="bound value", log_x=True, log_y=True)
    return table


# ---------------------------------------------------------------------------
# estimation
# ---------------------------------------------------------------------------

ESTIMATE_COLUMNS = ["source", "n", "global_L", "global_L_l1", "K", "piece_max",
                    "clip_fraction", "l1_scale", "max_scale", "bin_width_exponent",
                    "fit", "degree", "bandwidth", "resolution"]


def run_estimate(A, config: EstimationConfig | None = None, K_max: int | None = None,
                 out_dir=None, formats="both", source="adjacency") -> PipelineResult:
    config = config or EstimationConfig()
    res = sort_and_smooth(A, config, K_max)
    if out_dir:
        extra = {"l1_scale": res.normalization.l1_scale,
                 "max_scale": res.normalization.max_scale, **asdict(config)}
        _write_estimate(res.estimate, res.surface, source, int(np.asarray(A).shape[0]),
                        extra, out_dir, formats)
    return res


def run_estimate_exact(g: Graphon, resolution: int = 1024, K_max: int | None = None,
                       out_dir=None, formats="both") -> LipschitzEstimate:
    """Lipschitz estimates on an exact evaluation of ``g`` (no sampling).

    Piecewise graphons use their declared partition; otherwise a partition
    is detected when ``K_max > 1``.
    """
    surf = Surface.from_graphon(g, resolution)
    part = getattr(g, "partition", None)
    if isinstance(g, StepGraphon) or part is None:
        part = detect_partition(surf, K_max) if K_max and K_max > 1 else None
    est = estimate_lipschitz(surf, part)
    if out_dir:
        _write_estimate(est, surf, f"{g.name}:exact", resolution,
                        {"resolution": resolution}, out_dir, formats)
    return est


def _write_estimate(est, surface, source, n, extra, out_dir, formats):
    os.makedirs(out_dir, exist_ok=True)
    if _wants(formats, "csv"):
        row = {"source": source, "n": n, "global_L": est.global_L,
               "global_L_l1": est.global_L_l1, "K": est.K, "piece_max": est.piece_max,
               "clip_fraction": est.clip_fraction, **extra}
        report.write_csv(os.path.join(out_dir, "estimate.csv"), ESTIMATE_COLUMNS, [row])
        if est.per_piece is not None:
            bp = est.partition_used.breakpoints
            pieces = [[i, j, bp[i], bp[i + 1], bp[j], bp[j + 1], est.per_piece[i, j]]
                      for i in range(est.K) for j in range(est.K)]
            report.write_csv(os.path.join(out_dir, "per_piece.csv"),
                             ["i", "j", "u_lo", "u_hi", "v_lo", "v_hi", "L"], pieces)
        x = surface.points
        report.write_csv(os.path.join(out_dir, "surface.csv"), ["u", "v", "value"],
                         [[x[i], x[j], surface.values[i, j]]
                          for i in range(len(x)) for j in range(len(x))])
    if _wants(formats, "svg"):
        report.heatmap(os.path.join(out_dir, "surface.svg"), surface.values,
                       title=f"sorted, smoothed surface ({source})")


# ---------------------------------------------------------------------------
# homomorphism densities
# ---------------------------------------------------------------------------

DENSITY_COLUMNS = ["motif", "source", "n_or_resolution", "trial", "density",
                   "graphon_density", "abs_error"]


def density_sweep(motif, g, n_grid, trials=20, seed=0, kind="stochastic",
                  latents="iid", m=64, out_dir=None) -> list[dict]:
    F = get_motif(motif)
    g = resolve_graphon(g)
    target = hom_density_graphon(F, g, m)
    rows = [{"motif": F.name, "source": g.name, "n_or_resolution": m, "trial": None,
             "density": target, "graphon_density": target, "abs_error": 0.0}]
    for n in n_grid:
        for t in range(trials):
            G = sample_graph(g, n, kind, latents, trial_seed(seed, n, t))
            d = hom_density_graph(F, G.adjacency)
            rows.append({"motif": F.name, "source": f"{g.name}:{kind}", "n_or_resolution": n,
                         "trial": t, "density": d, "graphon_density": target,
                         "abs_error": abs(d - target)})
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        report.write_csv(os.path.join(out_dir, "density.csv"), DENSITY_COLUMNS, rows)
    return rows


def median_density_errors(rows, n_grid) -> list[float]:
    return [float(np.median([r["abs_error"] for r in rows
                             if r["trial"] is not None and r["n_or_resolution"] == n]))
            for n in n_grid]


SANDWICH_COLUMNS = ["instance", "k", "cut_exact", "cut_heuristic", "operator", "hs",
                    "upper", "lower_ok", "upper_ok", "heuristic_ok"]


def run_sandwich_audit(n_instances=100, max_blocks=12, seed=0, out_dir=None, **kw):
    recs = sandwich_audit(n_instances, max_blocks, seed, **kw)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        report.write_csv(os.path.join(out_dir, "sandwich.csv"), SANDWICH_COLUMNS,
                         [asdict(r) for r in recs])
    return recs
