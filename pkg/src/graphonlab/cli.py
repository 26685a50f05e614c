"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 input/parse error, 4 numerical failure.
Options may also come from a JSON ``--config`` file whose keys are the
option destinations (e.g. ``n_grid``, ``trials``); flags given on the
command line override config values.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import bounds as B
from . import harness, report
from .errors import GraphonLabError, InputError, NumericalError, ParameterError
from .estimation import EstimationConfig
from .graphons import StepGraphon
from .ingest import ingest_edgelist, read_dense
from .norms import DifferenceKernel, cutnorm_exact_step, cutnorm_heuristic, step_form
from .sampling import sample_graph, write_dense, write_edgelist
from .spectral import spectrum, spectrum_of_graph

EXIT_USAGE, EXIT_INPUT, EXIT_NUMERICAL = 2, 3, 4

DEFAULTS = {
    "seed": 0, "out_dir": ".", "format": "both", "graphon": "product",
    "top_k": 3, "m": 256,
    "chi": 0.05, "x1": 0.3, "x2": 0.3, "delta": 0.05,
    "n_min": 100, "n_max": 10 ** 7, "points": 26,
    "trials": 20, "n_grid": None,
    "bin_width_exponent": 0.5, "fit": "local_linear", "degree": 3,
    "bandwidth": 1.5, "resolution": 128,
    "grid": 64, "restarts": 32, "max_blocks": 12,
    "motif": "triangle", "one_indexed": False, "symmetrize": True,
}


def _common(p):
    p.add_argument("--config", help="JSON file with option values")
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--format", choices=harness.FORMATS)


def _graph_source(p, graphon=True):
    if graphon:
        p.add_argument("--graphon", help="registry name[:params], figure1:K,L,seed, "
                                         "inline JSON, or JSON file")
    p.add_argument("--edgelist", help="edge-list file")
    p.add_argument("--adjacency", help="dense whitespace-delimited adjacency file")
    p.add_argument("--one-indexed", dest="one_indexed", action="store_true", default=None)
    p.add_argument("--subsample-n", dest="subsample_n", type=int)


def _sampling(p):
    p.add_argument("--n", type=int)
    p.add_argument("--kind", choices=("weighted", "stochastic"))
    p.add_argument("--latents", choices=("iid", "sorted", "grid"))


def _bound_params(p):
    for name in ("chi", "x1", "x2", "delta"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--L", dest="L", type=float)
    p.add_argument("--K", dest="K", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphonlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a graph from a graphon")
    _common(p)
    p.add_argument("--graphon")
    _sampling(p)

    p = sub.add_parser("spectrum", help="operator spectrum of a graphon or graph")
    _common(p)
    _graph_source(p)
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--m", type=int, help="starting discretization for analytic graphons")

    p = sub.add_parser("bounds", help="evaluate the three bounds over an n grid")
    _common(p)
    p.add_argument("--n-grid", dest="n_grid", type=int, nargs="*")
    p.add_argument("--n-min", dest="n_min", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--points", type=int)
    _bound_params(p)

    p = sub.add_parser("sweep", help="Weyl-gap convergence sweep")
    _common(p)
    p.add_argument("--graphon")
    p.add_argument("--n-grid", dest="n_grid", type=int, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--kind", choices=("weighted", "stochastic"))
    p.add_argument("--latents", choices=("iid", "sorted", "grid"))
    p.add_argument("--top-k", dest="top_k", type=int)
    _bound_params(p)

    p = sub.add_parser("estimate", help="sort-and-smooth Lipschitz estimation")
    _common(p)
    _graph_source(p)
    _sampling(p)
    p.add_argument("--bin-exponent", dest="bin_width_exponent", type=float)
    p.add_argument("--fit", choices=("local_linear", "polynomial", "histogram"))
    p.add_argument("--degree", type=int)
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--resolution", type=int)
    p.add_argument("--k-max", dest="k_max", type=int,
                   help="detect up to this many pieces")
    p.add_argument("--exact", action="store_true", default=None,
                   help="estimate on the graphon evaluated on a --resolution grid, "
                        "without sampling or smoothing")

    p = sub.add_parser("cutnorm", help="cut norm of a difference kernel, or sandwich audit")
    _common(p)
    p.add_argument("--graphon")
    p.add_argument("--other", help="second graphon (default: zero kernel)")
    p.add_argument("--heuristic", action="store_true", default=None)
    p.add_argument("--grid", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--audit", type=int, help="run the norm sandwich audit on N random kernels")
    p.add_argument("--max-blocks", dest="max_blocks", type=int)

    p = sub.add_parser("density", help="homomorphism densities")
    _common(p)
    _graph_source(p)
    p.add_argument("--motif", choices=("edge", "path2", "triangle", "cycle4"))
    p.add_argument("--n-grid", dest="n_grid", type=int, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--kind", choices=("weighted", "stochastic"))
    p.add_argument("--latents", choices=("iid", "sorted", "grid"))
    p.add_argument("--m", type=int)

    p = sub.add_parser("ingest", help="parse an edge list into an adjacency matrix")
    _common(p)
    p.add_argument("path")
    p.add_argument("--one-indexed", dest="one_indexed", action="store_true", default=None)
    p.add_argument("--no-symmetrize", dest="symmetrize", action="store_false", default=None)
    p.add_argument("--n", type=int)
    p.add_argument("--subsample-n", dest="subsample_n", type=int)
    return ap


def _options(args) -> dict:
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise InputError("config file must hold a JSON object")
        opts.update(cfg)
    opts.update({k: v for k, v in vars(args).items() if v is not None})
    return opts


def _load_graph(o):
    """Adjacency from --edgelist / --adjacency, or None."""
    if o.get("edgelist"):
        return ingest_edgelist(o["edgelist"], o["one_indexed"], True, None,
                               o.get("subsample_n"), o["seed"]), os.path.basename(o["edgelist"])
    if o.get("adjacency"):
        A = read_dense(o["adjacency"])
        return A, os.path.basename(o["adjacency"])
    return None, None


def _out(o):
    os.makedirs(o["out_dir"], exist_ok=True)
    return o["out_dir"]


def cmd_sample(o):
    g = harness.resolve_graphon(o["graphon"])
    G = sample_graph(g, o["n"], o["kind"], o["latents"], o["seed"])
    out = _out(o)
    write_dense(os.path.join(out, "adjacency.txt"), G.adjacency)
    write_edgelist(os.path.join(out, "edges.txt"), G.adjacency)
    report.write_csv(os.path.join(out, "latents.csv"), ["node", "position"],
                     list(enumerate(G.latents.positions)))
    print(f"sampled {G.kind} graph from {g.name}: n={G.n}, "
          f"edge mass={G.adjacency.sum() / 2:.6g}")


def cmd_spectrum(o):
    A, label = _load_graph(o)
    t0 = time.perf_counter()
    if A is not None:
        spec = spectrum_of_graph(A, o["top_k"], source=label)
    else:
        g = harness.resolve_graphon(o["graphon"])
        spec = spectrum(g, o["top_k"], m=o["m"]) if not isinstance(g, StepGraphon) \
            else spectrum(g, o["top_k"])
    elapsed = time.perf_counter() - t0
    out = _out(o)
    report.write_csv(os.path.join(out, "spectrum.csv"),
                     ["source", "signed_index", "eigenvalue", "resolution"],
                     spec.rows(o["top_k"]))
    print(f"{spec.source}: positive={np.round(spec.positive, 8).tolist()} "
          f"negative={np.round(spec.negative, 8).tolist()} "
          f"resolution={spec.resolution} converged={spec.converged} ({elapsed:.2f}s)")
    if not spec.converged:
        return EXIT_NUMERICAL


def _bound_params_from(o, L=None, K=None):
    return B.BoundParams(o["chi"], o["x1"], o["x2"], o["delta"],
                         o.get("L", L), o.get("K", K))


def cmd_bounds(o):
    grid = o["n_grid"]
    if grid is None:
        grid = B.geometric_grid(o["n_min"], o["n_max"], o["points"])
    if not grid:
        raise ParameterError("empty n grid")
    params = _bound_params_from(o, 5.0, 4)
    table = harness.run_bounds(grid, params, _out(o), o["format"])
    print(f"crossover n (piecewise < standard from here on): {table.crossover_n}")


def cmd_sweep(o):
    keys = {f for f in harness.SweepConfig.__dataclass_fields__}
    cfg = {k: o[k] for k in keys if k in o and o[k] is not None}
    cfg["formats"] = o["format"]
    cfg.setdefault("n_grid", [125, 250, 500, 1000, 2000])
    cfg["out_dir"] = _out(o)
    config = harness.SweepConfig.from_dict(cfg)
    result = harness.run_sweep(config)
    with open(os.path.join(config.out_dir, "config.json"), "w") as fh:
        json.dump(config.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("median i=1 gaps:", [f"{v:.6g}" for v in result.median_gaps(1)])
    for a in result.dominance():
        print(f"{a.family}: {a.violations}/{a.rows} violations "
              f"(allowed rate {a.allowed:.4g}) {'ok' if a.passed else 'FAIL'}")


def cmd_estimate(o):
    if o.get("exact"):
        g = harness.resolve_graphon(o["graphon"])
        est = harness.run_estimate_exact(g, o["resolution"], o.get("k_max"), _out(o),
                                         o["format"])
        print(f"{g.name} (exact, m={o['resolution']}): global_L={est.global_L:.6g}, "
              f"K={est.K}, piece_max={est.piece_max:.6g}")
        return
    A, label = _load_graph(o)
    if A is None:
        g = harness.resolve_graphon(o["graphon"])
        G = sample_graph(g, o["n"], o["kind"], o["latents"], o["seed"])
        A, label = G.adjacency, f"{g.name}:{o['kind']}:n={o['n']}"
    config = EstimationConfig(o["bin_width_exponent"], o["fit"], o["degree"],
                              o["bandwidth"], o["resolution"])
    res = harness.run_estimate(A, config, o.get("k_max"), _out(o), o["format"], label)
    est = res.estimate
    print(f"{label}: global_L={est.global_L:.6g} (L1 scale {est.global_L_l1:.6g}), "
          f"K={est.K}, piece_max={est.piece_max:.6g}, clip={est.clip_fraction:.3g}")


def cmd_cutnorm(o):
    out = _out(o)
    if o.get("audit"):
        recs = harness.run_sandwich_audit(o["audit"], o["max_blocks"], o["seed"], out,
                                          grid=o["grid"], restarts=o["restarts"])
        bad = sum(not (r.lower_ok and r.upper_ok) for r in recs)
        bad_h = sum(not r.heuristic_ok for r in recs)
        print(f"sandwich audit: {len(recs)} kernels, {bad} sandwich violations, "
              f"{bad_h} heuristic > exact")
        return
    left = harness.resolve_graphon(o["graphon"])
    right = harness.resolve_graphon(o["other"]) if o.get("other") else \
        StepGraphon(np.zeros((1, 1)))
    K = DifferenceKernel(left, right)
    sk = step_form(K)
    if o.get("heuristic") or sk is None or sk.k > 22:
        res = cutnorm_heuristic(K, o["grid"], o["restarts"], o["seed"])
    else:
        res = cutnorm_exact_step(sk)
    report.write_csv(os.path.join(out, "cutnorm.csv"),
                     ["value", "exact", "sign", "index_space", "S", "T"],
                     [[res.value, res.exact, res.sign, res.index_space,
                       " ".join(map(str, res.S)), " ".join(map(str, res.T))]])
    with open(os.path.join(out, "cutnorm.json"), "w") as fh:
        json.dump(res.to_dict(), fh, indent=2)
        fh.write("\n")
    print(f"cut norm = {res.value:.12g} ({'exact' if res.exact else 'lower bound'})")


def cmd_density(o):
    A, label = _load_graph(o)
    out = _out(o)
    if A is not None:
        from .densities import hom_density_graph

        d = hom_density_graph(o["motif"], A)
        report.write_csv(os.path.join(out, "density.csv"),
                         ["motif", "source", "n_or_resolution", "density"],
                         [[o["motif"], label, A.shape[0], d]])
        print(f"t({o['motif']}, {label}) = {d:.12g}")
        return
    grid = o["n_grid"] or [50, 200, 800]
    rows = harness.density_sweep(o["motif"], o["graphon"], grid, o["trials"], o["seed"],
                                 o["kind"], o["latents"], o.get("m") or 64, out)
    med = harness.median_density_errors(rows, grid)
    print(f"t({o['motif']}, W) = {rows[0]['density']:.12g}; median |error| by n:",
          [f"{v:.4g}" for v in med])


def cmd_ingest(o):
    A = ingest_edgelist(o["path"], o["one_indexed"], o["symmetrize"], o.get("n"),
                        o.get("subsample_n"), o["seed"])
    out = _out(o)
    write_dense(os.path.join(out, "adjacency.txt"), A)
    write_edgelist(os.path.join(out, "edges.txt"), A)
    print(f"ingested {A.shape[0]} nodes, {int(np.count_nonzero(np.triu(A, 1)))} edges")


COMMANDS = {"sample": cmd_sample, "spectrum": cmd_spectrum, "bounds": cmd_bounds,
            "sweep": cmd_sweep, "estimate": cmd_estimate, "cutnorm": cmd_cutnorm,
            "density": cmd_density, "ingest": cmd_ingest}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        o = _options(args)
        # per-command sampling defaults; sweep falls back to SweepConfig's
        kind, latents = {"sample": ("weighted", "iid"), "estimate": ("weighted", "sorted"),
                         "density": ("stochastic", "iid")}.get(args.command, (None, None))
        if kind:
            o.setdefault("kind", kind)
            o.setdefault("latents", latents)
        if args.command in ("sample", "estimate"):
            o.setdefault("n", 200)
        return COMMANDS[args.command](o) or 0
    except ParameterError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GraphonLabError as exc:  # pragma: no cover
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
