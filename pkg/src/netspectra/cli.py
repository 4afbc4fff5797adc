"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric
error. Progress goes to stderr; data goes to files or stdout only. Flags
may also be supplied through a flat key=value config file (--config);
explicit command-line flags win over file values.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .density import (density_to_csv, estimate_density, shared_grid,
                      spectrum, spectrum_to_file)
from .divergence import (DivergenceValue, js_divergence, kl_divergence,
                         spectral_entropy)
from .edgelist import read_edge_list, write_edge_list
from .errors import (ConfigError, DomainError, EdgeListError,
                     GridMismatchError, NetspectraError, NoFeasibleModelError,
                     NumericError)
from .estimation import ParameterGrid, ReferenceCache, fit
from .experiments import ExperimentConfig, run_experiment
from .graphs import FAMILIES, ModelSpec, canonical_family, generate
from .jstest import js_test, paired_graph_sets
from .metrics import metrics
from .selection import classify_network

_REQUIRED = object()


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))


def main(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "handler", None) is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        overrides = _load_config_file(args.config) if args.config else {}
        return args.handler(args, overrides) or 0
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EdgeListError, GridMismatchError, FileNotFoundError,
            IsADirectoryError, NotADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NumericError, NoFeasibleModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except NetspectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


# -- option plumbing ---------------------------------------------------------

def _load_config_file(path) -> dict:
    """Flat key=value (or 'key value') lines; '#' starts a comment."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, value = line.partition("=")
        else:
            key, _, value = line.partition(" ")
        key = key.strip().replace("-", "_")
        if not key or not value.strip():
            raise ConfigError(f"malformed config line {lineno}: {raw!r}")
        values[key] = value.strip()
    return values


def _get(args, overrides, name, convert, default=_REQUIRED):
    """CLI flag > config-file value > default; _REQUIRED means mandatory."""
    cli_value = getattr(args, name, None)
    if cli_value is not None:
        return cli_value
    if name in overrides:
        try:
            return convert(overrides[name])
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad config value for {name}: {exc}") from exc
    if default is _REQUIRED:
        raise ConfigError(f"--{name.replace('_', '-')} is required")
    return default


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int_list(text: str) -> tuple:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _str_list(text: str) -> tuple:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _theta_grid(text: str) -> tuple:
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ConfigError(
            f"theta grid must look like 'lo:hi:step', got {text!r}") from None
    if step <= 0 or hi < lo:
        raise ConfigError("theta grid needs step > 0 and hi >= lo")
    count = int(round((hi - lo) / step)) + 1
    return tuple(round(lo + i * step, 9) for i in range(count))


def _expand_inputs(paths) -> list:
    """Files pass through; directories expand to their sorted regular files."""
    out = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            out.extend(sorted(q for q in p.iterdir() if q.is_file()))
        else:
            out.append(p)
    return out


def _read_graph_named(path):
    try:
        return read_edge_list(path)
    except EdgeListError as exc:
        raise EdgeListError(f"{path}: {exc}") from exc


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json_out(payload: dict, out) -> None:
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", out)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "inf" if math.isinf(value) else format(value, ".10g")
    return str(value)


# -- simple commands ---------------------------------------------------------

def cmd_generate(args, overrides) -> int:
    family = canonical_family(_get(args, overrides, "family", str))
    n = _get(args, overrides, "n", int)
    theta = _get(args, overrides, "theta", float)
    seed = _get(args, overrides, "seed", int)
    spec = ModelSpec(family, n, theta,
                     m1=_get(args, overrides, "m1", int, None),
                     n0=_get(args, overrides, "n0", int, None),
                     k=_get(args, overrides, "k", int, None))
    g = generate(spec, seed)
    out = _get(args, overrides, "out", str, None)
    if out:
        write_edge_list(g, out)
    else:
        write_edge_list(g, sys.stdout)
    return 0


def cmd_spectrum(args, overrides) -> int:
    g = _read_graph_named(args.inputs[0])
    s = spectrum(g)
    out = _get(args, overrides, "out", str, None)
    spectrum_to_file(s, out if out else sys.stdout)
    return 0


def cmd_density(args, overrides) -> int:
    points = _get(args, overrides, "grid_points", int, 512)
    spectra = [spectrum(_read_graph_named(p)) for p in args.inputs]
    d = estimate_density(spectra, points=points)
    out = _get(args, overrides, "out", str, None)
    density_to_csv(d, out if out else sys.stdout)
    return 0


def cmd_entropy(args, overrides) -> int:
    points = _get(args, overrides, "grid_points", int, 512)
    d = estimate_density(spectrum(_read_graph_named(args.inputs[0])),
                         points=points)
    value = spectral_entropy(d)
    _json_out(DivergenceValue("entropy", value).to_dict(),
              _get(args, overrides, "out", str, None))
    return 0


def _two_densities(args, overrides):
    if len(args.inputs) != 2:
        raise ConfigError("exactly two edge-list files are required")
    points = _get(args, overrides, "grid_points", int, 512)
    s1 = spectrum(_read_graph_named(args.inputs[0]))
    s2 = spectrum(_read_graph_named(args.inputs[1]))
    grid = shared_grid([s1.values, s2.values], points=points)
    return estimate_density(s1, grid=grid), estimate_density(s2, grid=grid)


def cmd_kl(args, overrides) -> int:
    d1, d2 = _two_densities(args, overrides)
    _json_out(DivergenceValue("kl", kl_divergence(d1, d2)).to_dict(),
              _get(args, overrides, "out", str, None))
    return 0


def cmd_js(args, overrides) -> int:
    d1, d2 = _two_densities(args, overrides)
    _json_out(DivergenceValue("js", js_divergence(d1, d2)).to_dict(),
              _get(args, overrides, "out", str, None))
    return 0


def cmd_fit(args, overrides) -> int:
    g = _read_graph_named(args.inputs[0])
    family = canonical_family(_get(args, overrides, "family", str))
    seed = _get(args, overrides, "seed", int)
    reps = _get(args, overrides, "reps", int, 50)
    points = _get(args, overrides, "grid_points", int, 512)
    grid_spec = _get(args, overrides, "theta_grid", _theta_grid)
    if isinstance(grid_spec, str):
        grid_spec = _theta_grid(grid_spec)
    m1 = _get(args, overrides, "m1", int, None)
    n0 = _get(args, overrides, "n0", int, None)
    k = _get(args, overrides, "k", int, None)
    if family == "scale-free" and m1 is None:
        m1 = max(1, round(g.edge_count / g.n))
        n0 = n0 if n0 is not None else m1
    if family == "small-world" and k is None:
        k = max(2, 2 * round(g.edge_count / g.n))
        k = min(k, (g.n - 1) - ((g.n - 1) % 2))
    pgrid = ParameterGrid(family, grid_spec, g.n, mc_replicates=reps,
                          m1=m1, n0=n0, k=k)
    cache_dir = _get(args, overrides, "cache_dir", str, None)
    cache = ReferenceCache(cache_dir) if cache_dir else None
    observed = estimate_density(spectrum(g), points=points)
    result = fit(observed, pgrid, seed, cache=cache)
    _json_out(result.to_dict(), _get(args, overrides, "out", str, None))
    return 0


def cmd_select(args, overrides) -> int:
    seed = _get(args, overrides, "seed", int)
    reps = _get(args, overrides, "reps", int, 50)
    points = _get(args, overrides, "grid_points", int, 512)
    cache_dir = _get(args, overrides, "cache_dir", str, None)
    cache = ReferenceCache(cache_dir) if cache_dir else ReferenceCache()
    target = Path(args.inputs[0])
    out = _get(args, overrides, "out", str, None)
    if not target.is_dir():
        g = _read_graph_named(target)
        result = classify_network(g, seed=seed, cache=cache, points=points,
                                  mc_replicates=reps)
        _json_out(result.to_dict(), out)
        return 0
    columns = ["file", "n", "edges", "kl_erdos_renyi", "kl_scale_free",
               "kl_small_world", "chosen"]
    lines = [",".join(columns)]
    for path in sorted(q for q in target.iterdir() if q.is_file()):
        g = _read_graph_named(path)
        result = classify_network(g, seed=seed, cache=cache, points=points,
                                  mc_replicates=reps)
        kls = {r.family: r.kl for r in result.ranked}
        lines.append(",".join([
            path.name, str(g.n), str(g.edge_count),
            _fmt(kls.get("erdos-renyi")), _fmt(kls.get("scale-free")),
            _fmt(kls.get("small-world")), result.chosen,
        ]))
        print(f"{path.name}: {result.chosen}", file=sys.stderr)
    _emit("\n".join(lines) + "\n", out)
    return 0


def cmd_js_test(args, overrides) -> int:
    seed = _get(args, overrides, "seed", int)
    bootstrap = _get(args, overrides, "bootstrap", int, 1000)
    points = _get(args, overrides, "grid_points", int, 512)
    statistic = _get(args, overrides, "statistic", str, "spectrum")
    if statistic not in ("spectrum", "degree"):
        raise ConfigError("statistic must be 'spectrum' or 'degree'")
    files1 = _expand_inputs(args.set1)
    files2 = _expand_inputs(args.set2)
    if not files1 or not files2:
        raise ConfigError("both --set1 and --set2 need at least one graph")
    graphs1 = [_read_graph_named(p) for p in files1]
    graphs2 = [_read_graph_named(p) for p in files2]
    s1, s2 = paired_graph_sets(graphs1, graphs2, statistic=statistic,
                               points=points)
    sample_out = _get(args, overrides, "sample_out", str, None)
    result = js_test(s1, s2, replicates=bootstrap, seed=seed,
                     keep_sample=sample_out is not None)
    if sample_out:
        lines = ["replicate,js"] + [f"{i},{v:.10g}"
                                    for i, v in enumerate(result.sample)]
        Path(sample_out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _json_out(result.to_dict(), _get(args, overrides, "out", str, None))
    return 0


def cmd_metrics(args, overrides) -> int:
    target = Path(args.inputs[0])
    out = _get(args, overrides, "out", str, None)
    if not target.is_dir():
        g = _read_graph_named(target)
        payload = {"file": target.name, "nodes": g.n, **metrics(g).to_dict()}
        _json_out(payload, out)
        return 0
    columns = ["file", "nodes", "edge_count", "average_degree", "diameter",
               "clustering_coefficient", "average_path_length"]
    lines = [",".join(columns)]
    for path in sorted(q for q in target.iterdir() if q.is_file()):
        g = _read_graph_named(path)
        m = metrics(g)
        lines.append(",".join([
            path.name, str(g.n), str(m.edge_count),
            _fmt(m.average_degree), str(m.diameter),
            _fmt(m.clustering_coefficient), _fmt(m.average_path_length),
        ]))
        print(f"{path.name}: done", file=sys.stderr)
    _emit("\n".join(lines) + "\n", out)
    return 0


# -- experiment commands -------------------------------------------------------

def _cmd_experiment(kind: str):
    def handler(args, overrides) -> int:
        config = ExperimentConfig(
            kind=kind,
            seed=_get(args, overrides, "seed", int),
            out_dir=Path(_get(args, overrides, "out", str)),
            reps=_get(args, overrides, "reps", int, None),
            sizes=_get(args, overrides, "sizes", _int_list, None),
            families=_get(args, overrides, "families", _str_list, None),
            bootstrap=_get(args, overrides, "bootstrap", int, None),
            set_size=_get(args, overrides, "set_size", int, None),
            grid_points=_get(args, overrides, "grid_points", int, 512),
            jobs=_get(args, overrides, "jobs", int, 1),
            full=bool(_get(args, overrides, "full", _bool, False)),
            plot=bool(_get(args, overrides, "plot", _bool, True)),
            cache_dir=_get(args, overrides, "cache_dir", str, None),
        )
        written = run_experiment(config)
        for path in written:
            print(f"wrote {path}", file=sys.stderr)
        return 0

    return handler


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netspectra",
        description="Spectral characterization of random graphs.")
    sub = parser.add_subparsers(dest="command")

    def add(name, handler, help_text, inputs=0):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--config", default=None,
                       help="flat key=value file supplying defaults for flags")
        p.add_argument("--out", default=None,
                       help="output file (or directory for exp-* commands)")
        p.add_argument("--seed", type=int, default=None,
                       help="master seed (required for stochastic commands)")
        p.add_argument("--grid-points", dest="grid_points", type=int,
                       default=None, help="density grid resolution")
        if inputs == 1:
            p.add_argument("--in", dest="inputs", nargs=1, required=True,
                           metavar="FILE", help="edge-list input")
        elif inputs == 2:
            p.add_argument("--in", dest="inputs", nargs=2, required=True,
                           metavar=("A", "B"), help="two edge-list inputs")
        elif inputs == "many":
            p.add_argument("--in", dest="inputs", nargs="+", required=True,
                           metavar="FILE", help="edge-list inputs")
        return p

    p = add("generate", cmd_generate, "sample one random graph")
    p.add_argument("--family", default=None, choices=None,
                   help=f"one of {', '.join(FAMILIES)} (aliases er/sf/sw)")
    p.add_argument("--n", type=int, default=None, help="node count")
    p.add_argument("--theta", type=float, default=None,
                   help="family parameter (p, attachment exponent, or p_r)")
    p.add_argument("--m1", type=int, default=None, help="edges per new node")
    p.add_argument("--n0", type=int, default=None, help="seed node count")
    p.add_argument("--k", type=int, default=None, help="ring neighbor count")

    add("spectrum", cmd_spectrum, "scaled adjacency eigenvalues", inputs=1)
    add("density", cmd_density, "spectral density CSV (pools inputs)",
        inputs="many")
    add("entropy", cmd_entropy, "spectral entropy of one graph", inputs=1)
    add("kl", cmd_kl, "KL divergence between two graphs' densities", inputs=2)
    add("js", cmd_js, "JS divergence between two graphs' densities", inputs=2)

    p = add("fit", cmd_fit, "minimum-KL parameter fit", inputs=1)
    p.add_argument("--family", default=None)
    p.add_argument("--theta-grid", dest="theta_grid", default=None,
                   metavar="LO:HI:STEP", help="candidate grid")
    p.add_argument("--reps", type=int, default=None,
                   help="reference graphs per candidate (default 50)")
    p.add_argument("--m1", type=int, default=None)
    p.add_argument("--n0", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--cache-dir", dest="cache_dir", default=None)

    p = add("select", cmd_select, "classify one graph or a directory of them",
            inputs=1)
    p.add_argument("--reps", type=int, default=None,
                   help="reference graphs per candidate (default 50)")
    p.add_argument("--cache-dir", dest="cache_dir", default=None)

    p = add("js-test", cmd_js_test, "bootstrap JS test between two graph sets")
    p.add_argument("--set1", nargs="+", required=True, metavar="PATH",
                   help="edge-list files or directories")
    p.add_argument("--set2", nargs="+", required=True, metavar="PATH")
    p.add_argument("--bootstrap", type=int, default=None,
                   help="bootstrap replicates (default 1000)")
    p.add_argument("--statistic", default=None,
                   help="'spectrum' (default) or 'degree'")
    p.add_argument("--sample-out", dest="sample_out", default=None,
                   help="CSV path for the full replicate sample")

    p = add("metrics", cmd_metrics, "topology metrics for a graph or directory",
            inputs=1)

    experiment_help = {
        "exp-entropy": "entropy-vs-parameter curves per family",
        "exp-table1": "estimator accuracy table (mean and sd of fits)",
        "exp-fig2": "model-selection accuracy vs graph size",
        "exp-roc": "spectrum-vs-degree test power (ROC/AUC)",
        "exp-null": "null-hypothesis p-value calibration",
    }
    experiment_kind = {
        "exp-entropy": "entropy-curve",
        "exp-table1": "estimate-table",
        "exp-fig2": "selection-accuracy",
        "exp-roc": "roc",
        "exp-null": "null-pvalues",
    }
    for name, help_text in experiment_help.items():
        p = add(name, _cmd_experiment(experiment_kind[name]), help_text)
        p.add_argument("--reps", type=int, default=None,
                       help="repetitions per cell (desk-scale default)")
        p.add_argument("--sizes", type=_int_list, default=None,
                       help="comma-separated node counts")
        p.add_argument("--families", type=_str_list, default=None,
                       help="comma-separated subset of families")
        p.add_argument("--bootstrap", type=int, default=None)
        p.add_argument("--set-size", dest="set_size", type=int, default=None,
                       help="graphs per set in the two-sample experiments")
        p.add_argument("--jobs", type=int, default=None,
                       help="worker processes (results identical to --jobs 1)")
        p.add_argument("--full", dest="full", action="store_true",
                       default=None, help="paper-scale repetition counts")
        p.add_argument("--no-plot", dest="plot", action="store_false",
                       default=None, help="skip figure rendering")
        p.add_argument("--cache-dir", dest="cache_dir", default=None)

    return parser


if __name__ == "__main__":
    entrypoint()
