"""Simulation-study harness behind the exp-* CLI subcommands.

Every experiment writes plot-ready CSV files plus a JSON manifest echoing
the configuration, library versions, and wall time; matplotlib figures are
rendered alongside the CSVs unless disabled. All outputs go through a
write-to-temp, atomic-rename step so a failing run leaves nothing behind.
Data files are byte-identical across runs with the same config and seed
(the manifest carries the wall time and is exempt).

Repetitions are independent tasks keyed by derived seeds, so `jobs` workers
produce exactly the same numbers as a sequential run.
"""
from __future__ import annotations

import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__ as _version
from .density import estimate_density, sample_density, shared_grid, spectrum
from .divergence import er_entropy_theoretical, spectral_entropy
from .errors import ConfigError
from .estimation import ParameterGrid, ReferenceCache, fit, reference_density
from .graphs import (ERDOS_RENYI, FAMILIES, SCALE_FREE, SMALL_WORLD,
                     ModelSpec, canonical_family, generate)
from .jstest import js_test, paired_graph_sets
from .rng import derive_seed
from .selection import default_candidates, select_model

KINDS = ("entropy-curve", "estimate-table", "selection-accuracy", "roc",
         "null-pvalues")

# family -> (true theta, structural kwargs) used across the studies
TABLE_TRUTH = {
    ERDOS_RENYI: (0.50, {}),
    SCALE_FREE: (1.50, {"m1": 1, "n0": 1}),
    SMALL_WORLD: (0.30, {"k": 4}),
}
TABLE_GRID = {
    ERDOS_RENYI: [round(0.40 + 0.01 * i, 6) for i in range(21)],
    SCALE_FREE: [round(1.00 + 0.05 * i, 6) for i in range(21)],
    SMALL_WORLD: [round(0.10 + 0.01 * i, 6) for i in range(41)],
}
SELECTION_TRUTH = {
    ERDOS_RENYI: (0.30, {}),
    SCALE_FREE: (1.00, {"m1": 1, "n0": 1}),
    SMALL_WORLD: (0.30, {"k": 4}),
}
ROC_PAIRS = {
    ERDOS_RENYI: (0.50, 0.52, {}),
    SCALE_FREE: (1.00, 1.10, {"m1": 1, "n0": 1}),
    SMALL_WORLD: (0.30, 0.31, {"k": 4}),
}
NULL_PARAMS = {
    ERDOS_RENYI: (0.50, {}),
    SCALE_FREE: (1.00, {"m1": 1, "n0": 1}),
    SMALL_WORLD: (0.30, {"k": 4}),
}
ENTROPY_SWEEPS = {
    # n=500 throughout; scale-free/small-world structural constants sized
    # for a ~600-edge budget at that n
    ERDOS_RENYI: ([round(0.1 * i, 6) for i in range(1, 10)], {}),
    SCALE_FREE: ([0.5, 1.0, 1.5, 2.0, 2.5, 3.0], {"m1": 1, "n0": 1}),
    SMALL_WORLD: ([round(0.1 * i, 6) for i in range(0, 11)], {"k": 2}),
}

_DESK = {
    "entropy-curve": {"reps": 100, "sizes": (500,)},
    "estimate-table": {"reps": 30, "sizes": (100, 300)},
    "selection-accuracy": {"reps": 100, "sizes": (10, 120)},
    "roc": {"reps": 200, "sizes": (100,), "bootstrap": 500, "set_size": 50},
    "null-pvalues": {"reps": 500, "sizes": (100,), "bootstrap": 500,
                     "set_size": 50},
}
_FULL = {
    "entropy-curve": {"reps": 100, "sizes": (500,)},
    "estimate-table": {"reps": 50, "sizes": (50, 100, 200, 300, 500)},
    "selection-accuracy": {"reps": 1000,
                           "sizes": tuple(range(10, 121, 10))},
    "roc": {"reps": 10000, "sizes": (100,), "bootstrap": 1000, "set_size": 50},
    "null-pvalues": {"reps": 10000, "sizes": (100,), "bootstrap": 1000,
                     "set_size": 50},
}
MC_REPLICATES = 50


@dataclass
class ExperimentConfig:
    """One experiment request; unset counts fall back to desk-scale defaults."""

    kind: str
    seed: int
    out_dir: Path
    reps: int | None = None
    sizes: tuple | None = None
    families: tuple | None = None
    bootstrap: int | None = None
    set_size: int | None = None
    grid_points: int = 512
    jobs: int = 1
    full: bool = False
    plot: bool = True
    cache_dir: Path | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if not isinstance(self.seed, int):
            raise ConfigError("an integer seed is required (no wall-clock default)")
        self.out_dir = Path(self.out_dir)
        defaults = (_FULL if self.full else _DESK)[self.kind]
        if self.reps is None:
            self.reps = defaults["reps"]
        if self.sizes is None:
            self.sizes = tuple(defaults["sizes"])
        if self.bootstrap is None:
            self.bootstrap = defaults.get("bootstrap", 1000)
        if self.set_size is None:
            self.set_size = defaults.get("set_size", 50)
        if self.families is None:
            self.families = FAMILIES
        else:
            self.families = tuple(canonical_family(f) for f in self.families)
        for name in ("reps", "bootstrap", "set_size", "grid_points", "jobs"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if not (1 <= len(self.sizes) and all(int(n) >= 1 for n in self.sizes)):
            raise ConfigError("sizes must be positive integers")
        self.sizes = tuple(int(n) for n in self.sizes)
        if self.cache_dir is None:
            self.cache_dir = self.out_dir / "cache"

    def echo(self) -> dict:
        return {
            "kind": self.kind, "seed": self.seed,
            "out_dir": str(self.out_dir), "reps": self.reps,
            "sizes": list(self.sizes), "families": list(self.families),
            "bootstrap": self.bootstrap, "set_size": self.set_size,
            "grid_points": self.grid_points, "jobs": self.jobs,
            "full": self.full, "plot": self.plot,
            "cache_dir": str(self.cache_dir),
        }


def run_experiment(config: ExperimentConfig) -> list:
    """Dispatch on config.kind; returns the list of written files."""
    runner = {
        "entropy-curve": run_entropy_curve,
        "estimate-table": run_estimate_table,
        "selection-accuracy": run_selection_accuracy,
        "roc": run_roc,
        "null-pvalues": run_null_pvalues,
    }[config.kind]
    return runner(config)


# -- entropy curve ---------------------------------------------------------

def run_entropy_curve(config: ExperimentConfig) -> list:
    started = time.time()
    n = config.sizes[0]
    rows = []
    for family in config.families:
        thetas, structural = ENTROPY_SWEEPS[family]
        for theta in thetas:
            tasks = [(family, n, theta, _structural_tuple(structural),
                      derive_seed(config.seed, family, n, theta, rep),
                      config.grid_points)
                     for rep in range(config.reps)]
            values = _map_tasks(_entropy_task, tasks, config.jobs)
            theory = (er_entropy_theoretical(theta)
                      if family == ERDOS_RENYI and 0.0 < theta < 1.0 else None)
            rows.append({
                "family": family, "theta": theta, "n": n,
                "reps": config.reps,
                "mean_entropy": float(np.mean(values)),
                "sd_entropy": float(np.std(values, ddof=1)) if len(values) > 1 else 0.0,
                "theoretical": theory,
            })
            _progress(f"entropy-curve {family} theta={theta} done")
    csv_text = _csv(["family", "theta", "n", "reps", "mean_entropy",
                     "sd_entropy", "theoretical"], rows)
    outputs = {"entropy-curve.csv": csv_text}
    figures = {}
    if config.plot:
        from .plots import entropy_curve_figure
        figures["entropy-curve.png"] = lambda path: entropy_curve_figure(rows, path)
    return _commit(config, outputs, figures, started)


def _entropy_task(task) -> float:
    family, n, theta, structural, seed, points = task
    spec = ModelSpec(family, n, theta, **dict(structural))
    g = generate(spec, np.random.default_rng(seed))
    return spectral_entropy(estimate_density(spectrum(g), points=points))


# -- parameter estimation table --------------------------------------------

def run_estimate_table(config: ExperimentConfig) -> list:
    started = time.time()
    cache = ReferenceCache(config.cache_dir)
    rows = []
    for family in config.families:
        theta_true, structural = TABLE_TRUTH[family]
        grid_values = TABLE_GRID[family]
        for n in config.sizes:
            pgrid = ParameterGrid(family, tuple(grid_values), n,
                                  mc_replicates=MC_REPLICATES, **structural)
            cell_grid = _cell_grid(
                [pgrid.spec_for(theta_true),
                 pgrid.spec_for(grid_values[0]),
                 pgrid.spec_for(grid_values[-1])],
                config.seed, config.grid_points)
            refs_seed = derive_seed(config.seed, "refs", family, n)
            for theta in grid_values:  # prime the shared reference cache
                spec = pgrid.spec_for(theta)
                from .estimation import candidate_seed
                reference_density(spec, MC_REPLICATES,
                                  candidate_seed(refs_seed, spec),
                                  grid=cell_grid, cache=cache)
            tasks = [(family, n, theta_true, _structural_tuple(structural),
                      tuple(grid_values), refs_seed,
                      derive_seed(config.seed, "obs", family, n, rep),
                      _grid_tuple(cell_grid), str(config.cache_dir))
                     for rep in range(config.reps)]
            hats = _map_tasks(_table_task, tasks, config.jobs)
            rows.append({
                "family": family, "n": n, "theta_true": theta_true,
                "reps": config.reps, "mc_replicates": MC_REPLICATES,
                "theta_hat_mean": float(np.mean(hats)),
                "theta_hat_sd": float(np.std(hats, ddof=1)) if len(hats) > 1 else 0.0,
            })
            _progress(f"estimate-table {family} n={n}: "
                      f"mean={rows[-1]['theta_hat_mean']:.4f}")
    csv_text = _csv(["family", "n", "theta_true", "reps", "mc_replicates",
                     "theta_hat_mean", "theta_hat_sd"], rows)
    outputs = {"estimate-table.csv": csv_text}
    figures = {}
    if config.plot:
        from .plots import estimate_table_figure
        figures["estimate-table.png"] = lambda path: estimate_table_figure(rows, path)
    return _commit(config, outputs, figures, started)


def _table_task(task) -> float:
    (family, n, theta_true, structural, grid_values, refs_seed, obs_seed,
     grid_tuple, cache_dir) = task
    cache = _process_cache(cache_dir)
    spec = ModelSpec(family, n, theta_true, **dict(structural))
    g = generate(spec, np.random.default_rng(obs_seed))
    observed = estimate_density(spectrum(g), grid=_grid_from_tuple(grid_tuple))
    pgrid = ParameterGrid(family, grid_values, n, mc_replicates=MC_REPLICATES,
                          **dict(structural))
    return fit(observed, pgrid, refs_seed, cache=cache).theta_hat


# -- selection accuracy (3-way classification) ------------------------------

def run_selection_accuracy(config: ExperimentConfig) -> list:
    started = time.time()
    rows = []
    for family in config.families:
        theta_true, structural = SELECTION_TRUTH[family]
        for n in config.sizes:
            truth = ModelSpec(family, n, theta_true, **dict(structural))
            cell_grid = _cell_grid([truth] * 5, config.seed,
                                   config.grid_points, pad_frac=0.2)
            refs_seed = derive_seed(config.seed, "refs", family, n)
            tasks = [(family, n, theta_true, _structural_tuple(structural),
                      refs_seed,
                      derive_seed(config.seed, "obs", family, n, rep),
                      _grid_tuple(cell_grid), str(config.cache_dir))
                     for rep in range(config.reps)]
            chosen = _map_tasks(_selection_task, tasks, config.jobs)
            counts = {fam: chosen.count(fam) for fam in FAMILIES}
            rows.append({
                "true_family": family, "n": n, "reps": config.reps,
                "frac_erdos_renyi": counts[ERDOS_RENYI] / config.reps,
                "frac_scale_free": counts[SCALE_FREE] / config.reps,
                "frac_small_world": counts[SMALL_WORLD] / config.reps,
            })
            _progress(f"selection-accuracy {family} n={n}: "
                      f"{counts[family] / config.reps:.2f} correct")
    csv_text = _csv(["true_family", "n", "reps", "frac_erdos_renyi",
                     "frac_scale_free", "frac_small_world"], rows)
    outputs = {"selection-accuracy.csv": csv_text}
    figures = {}
    if config.plot:
        from .plots import selection_accuracy_figure
        figures["selection-accuracy.png"] = (
            lambda path: selection_accuracy_figure(rows, path))
    return _commit(config, outputs, figures, started)


def _selection_task(task) -> str:
    (family, n, theta_true, structural, refs_seed, obs_seed, grid_tuple,
     cache_dir) = task
    cache = _process_cache(cache_dir)
    spec = ModelSpec(family, n, theta_true, **dict(structural))
    g = generate(spec, np.random.default_rng(obs_seed))
    observed = estimate_density(spectrum(g), grid=_grid_from_tuple(grid_tuple))
    candidates = default_candidates(g, mc_replicates=MC_REPLICATES)
    return select_model(observed, candidates, refs_seed, cache=cache).chosen


# -- ROC power study --------------------------------------------------------

def run_roc(config: ExperimentConfig) -> list:
    started = time.time()
    n = config.sizes[0]
    pval_rows = []
    curve_rows = []
    auc_rows = []
    for family in config.families:
        theta0, theta1, structural = ROC_PAIRS[family]
        pvals = {}  # (variant, hypothesis) -> list of p-values
        for hypothesis, thetas in (("null", (theta0, theta0)),
                                   ("alt", (theta0, theta1))):
            tasks = [(family, n, thetas, _structural_tuple(structural),
                      config.set_size, config.bootstrap,
                      derive_seed(config.seed, family, hypothesis, e),
                      config.grid_points)
                     for e in range(config.reps)]
            results = _map_tasks(_jsexp_task, tasks, config.jobs)
            for variant in ("spectrum", "degree"):
                pvals[(variant, hypothesis)] = [r[variant] for r in results]
            for e, r in enumerate(results):
                for variant in ("spectrum", "degree"):
                    pval_rows.append({
                        "family": family, "variant": variant,
                        "hypothesis": hypothesis, "index": e,
                        "p_value": r[variant],
                    })
            _progress(f"roc {family} {hypothesis} done ({config.reps} experiments)")
        for variant in ("spectrum", "degree"):
            null_p = np.array(pvals[(variant, "null")])
            alt_p = np.array(pvals[(variant, "alt")])
            auc_rows.append({"family": family, "variant": variant,
                             "auc": _auc(alt_p, null_p)})
            for t, sens, fpr in _roc_points(alt_p, null_p):
                curve_rows.append({
                    "family": family, "variant": variant, "threshold": t,
                    "sensitivity": sens, "one_minus_specificity": fpr,
                })
    outputs = {
        "roc-pvalues.csv": _csv(["family", "variant", "hypothesis", "index",
                                 "p_value"], pval_rows),
        "roc-curves.csv": _csv(["family", "variant", "threshold",
                                "sensitivity", "one_minus_specificity"],
                               curve_rows),
        "roc-auc.csv": _csv(["family", "variant", "auc"], auc_rows),
    }
    figures = {}
    if config.plot:
        from .plots import roc_figure
        figures["roc.png"] = lambda path: roc_figure(curve_rows, auc_rows, path)
    return _commit(config, outputs, figures, started)


def _jsexp_task(task) -> dict:
    """One two-sample experiment; returns a p-value per statistic variant."""
    family, n, thetas, structural, set_size, bootstrap, seed, points = task
    kwargs = dict(structural)
    specs = (ModelSpec(family, n, thetas[0], **kwargs),
             ModelSpec(family, n, thetas[1], **kwargs))
    graphs1 = [generate(specs[0], np.random.default_rng(derive_seed(seed, 1, i)))
               for i in range(set_size)]
    graphs2 = [generate(specs[1], np.random.default_rng(derive_seed(seed, 2, i)))
               for i in range(set_size)]
    out = {}
    for variant in ("spectrum", "degree"):
        s1, s2 = paired_graph_sets(graphs1, graphs2, statistic=variant,
                                   points=points)
        out[variant] = js_test(s1, s2, replicates=bootstrap,
                               seed=derive_seed(seed, "boot", variant)).p_value
    return out


# -- null-hypothesis p-value calibration ------------------------------------

def run_null_pvalues(config: ExperimentConfig) -> list:
    started = time.time()
    n = config.sizes[0]
    rows = []
    hist_rows = []
    for family in config.families:
        theta, structural = NULL_PARAMS[family]
        tasks = [(family, n, (theta, theta), _structural_tuple(structural),
                  config.set_size, config.bootstrap,
                  derive_seed(config.seed, family, "null", e),
                  config.grid_points)
                 for e in range(config.reps)]
        results = _map_tasks(_jsexp_task, tasks, config.jobs)
        pvals = np.array([r["spectrum"] for r in results])
        rows.extend({"family": family, "index": e, "p_value": p}
                    for e, p in enumerate(pvals))
        counts, edges = np.histogram(pvals, bins=10, range=(0.0, 1.0))
        for k in range(10):
            hist_rows.append({
                "family": family, "bin_lo": edges[k], "bin_hi": edges[k + 1],
                "count": int(counts[k]),
                "frequency": counts[k] / len(pvals),
            })
        _progress(f"null-pvalues {family} done ({config.reps} experiments)")
    outputs = {
        "null-pvalues.csv": _csv(["family", "index", "p_value"], rows),
        "null-histogram.csv": _csv(["family", "bin_lo", "bin_hi", "count",
                                    "frequency"], hist_rows),
    }
    figures = {}
    if config.plot:
        from .plots import pvalue_histogram_figure
        figures["null-pvalues.png"] = (
            lambda path: pvalue_histogram_figure(rows, path))
    return _commit(config, outputs, figures, started)


# -- shared plumbing ---------------------------------------------------------

def _structural_tuple(structural: dict) -> tuple:
    return tuple(sorted(structural.items()))


def _grid_tuple(grid: np.ndarray) -> tuple:
    return (float(grid[0]), float(grid[-1]), len(grid))


def _grid_from_tuple(t: tuple) -> np.ndarray:
    return np.linspace(t[0], t[1], t[2])


def _cell_grid(specs, seed: int, points: int, probes: int = 2,
               pad_frac: float = 0.05) -> np.ndarray:
    """Fixed evaluation grid for one experiment cell.

    Pools the spectra of a few probe graphs per spec and pads the range, so
    observed graphs and near-truth references land on one shared grid and
    reference densities can be cached across repetitions.
    """
    samples = []
    for j, spec in enumerate(specs):
        for i in range(probes):
            probe_seed = derive_seed(seed, "probe", spec.family, spec.n,
                                     spec.theta, j, i)
            g = generate(spec, np.random.default_rng(probe_seed))
            samples.append(spectrum(g).values)
    base = shared_grid(samples, points=points)
    lo, hi = float(base[0]), float(base[-1])
    pad = pad_frac * (hi - lo)
    return np.linspace(lo - pad, hi + pad, points)


def _auc(alt_p: np.ndarray, null_p: np.ndarray) -> float:
    """P(alt p-value < null p-value), ties counted half."""
    less = (alt_p[:, None] < null_p[None, :]).mean()
    ties = (alt_p[:, None] == null_p[None, :]).mean()
    return float(less + 0.5 * ties)


def _roc_points(alt_p: np.ndarray, null_p: np.ndarray):
    thresholds = np.concatenate([[0.0], np.unique(np.concatenate([alt_p, null_p])),
                                 [1.0]])
    for t in thresholds:
        yield float(t), float((alt_p <= t).mean()), float((null_p <= t).mean())


_PROCESS_CACHES: dict = {}


def _process_cache(cache_dir: str) -> ReferenceCache:
    if cache_dir not in _PROCESS_CACHES:
        _PROCESS_CACHES[cache_dir] = ReferenceCache(cache_dir)
    return _PROCESS_CACHES[cache_dir]


def _map_tasks(worker, tasks, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, len(tasks) // (4 * jobs))
        return list(pool.map(worker, tasks, chunksize=chunk))


def _progress(message: str) -> None:
    print(message, file=sys.stderr)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def _csv(columns: list, rows: list) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(row[c]) for c in columns) for row in rows)
    return "\n".join(lines) + "\n"


def _commit(config: ExperimentConfig, outputs: dict, figures: dict,
            started: float) -> list:
    """Write every output atomically; figures render to temps first too."""
    config.out_dir.mkdir(parents=True, exist_ok=True)
    staged = []  # (temp path, final path)
    try:
        for name, text in outputs.items():
            fd, tmp = tempfile.mkstemp(dir=config.out_dir, prefix=f".{name}.")
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
            staged.append((tmp, config.out_dir / name))
        for name, render in figures.items():
            fd, tmp = tempfile.mkstemp(dir=config.out_dir, prefix=f".{name}.",
                                       suffix=".png")
            os.close(fd)
            staged.append((tmp, config.out_dir / name))
            render(tmp)
        manifest = {
            "config": config.echo(),
            "versions": _versions(),
            "wall_time_s": round(time.time() - started, 3),
            "outputs": sorted([n for n in outputs] + [n for n in figures]),
        }
        fd, tmp = tempfile.mkstemp(dir=config.out_dir, prefix=".manifest.")
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            json.dump(manifest, handle, indent=2, sort_keys=True)
            handle.write("\n")
        staged.append((tmp, config.out_dir / "manifest.json"))
    except BaseException:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise
    written = []
    for tmp, final in staged:
        os.replace(tmp, final)
        written.append(final)
    return written


def _versions() -> dict:
    import scipy

    return {"netspectra": _version, "numpy": np.__version__,
            "scipy": scipy.__version__}
