"""Adjacency spectra and Gaussian-kernel spectral density estimation.

The density estimator follows a fixed recipe: pool the sample, pick a
bandwidth from the sample (see `kernel_bandwidth`), evaluate a Gaussian
kernel density on a uniform grid spanning the sample plus three bandwidths
of tail, and renormalize to unit trapezoid integral.

Bandwidth rule. Dense-graph spectra contain a handful of detached extreme
eigenvalues far from the bulk, so the scale is taken from the 2.5%-97.5%
inter-quantile span W (order-statistic quantiles, so repeated samples give
identical spans) rather than the raw range. The kernel width is then

    h = min(W / ceil(log2(N) + 1),  10 * W / N)

with N the typical sample size (the length of one spectrum): a Sturges
bin width for small samples, capped at ten mean level spacings for large
ones. Eigenvalues of large graphs are rigid, so a kernel a few spacings
wide already yields a smooth density; classical N^(-1/5) rules oversmooth
badly here. On evaluation the width is floored at one grid step so the
kernel stays resolvable. A constant sample falls back to a narrow kernel
at the common value instead of failing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, GridMismatchError, NumericError
from .graphs import Graph

DEFAULT_POINTS = 512
TAIL_SIGMAS = 3.0
QUANTILE_TRIM = 0.025
SPACING_FACTOR = 10.0
DEGENERATE_REL = 1e-3
_KDE_CHUNK = 4096


@dataclass(frozen=True)
class Spectrum:
    """All adjacency eigenvalues of one graph, descending, scaled by 1/sqrt(n)."""

    values: np.ndarray
    n: int

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or len(vals) != self.n:
            raise DomainError("spectrum must hold exactly n eigenvalues")
        if np.any(np.diff(vals) > 0):
            raise DomainError("spectrum values must be sorted descending")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def unscaled(self) -> np.ndarray:
        return self.values * math.sqrt(self.n)


def spectrum(g: Graph) -> Spectrum:
    """Full symmetric eigendecomposition of the adjacency matrix."""
    try:
        eigs = np.linalg.eigvalsh(g.adjacency())
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    scaled = np.sort(eigs)[::-1] / math.sqrt(g.n)
    return Spectrum(scaled, g.n)


@dataclass(frozen=True)
class SpectralDensity:
    """Normalized density on a uniform grid; trapezoid integral equals one."""

    grid: np.ndarray
    values: np.ndarray
    bandwidth: float

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or len(grid) < 2 or vals.shape != grid.shape:
            raise DomainError("density needs matching 1-D grid and values")
        steps = np.diff(grid)
        if np.any(steps <= 0):
            raise DomainError("grid must be strictly increasing")
        if np.max(steps) - np.min(steps) > 1e-9 * np.max(steps):
            raise DomainError("grid must be uniformly spaced")
        if np.any(vals < 0):
            raise DomainError("density values must be nonnegative")
        if abs(np.trapezoid(vals, grid) - 1.0) > 1e-6:
            raise DomainError("density must integrate to one")
        if not self.bandwidth > 0:
            raise DomainError("bandwidth must be positive")
        grid = grid.copy()
        vals = vals.copy()
        grid.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", vals)

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def same_grid(self, other: "SpectralDensity") -> bool:
        return self.grid.shape == other.grid.shape and bool(
            np.array_equal(self.grid, other.grid))


def kernel_bandwidth(sample: np.ndarray, typical_count: int | None = None) -> float:
    """Bandwidth for a pooled sample; see the module docstring for the rule."""
    sample = np.asarray(sample, dtype=float)
    if sample.size == 0:
        raise DomainError("cannot pick a bandwidth for an empty sample")
    if typical_count is None:
        typical_count = sample.size
    typical_count = max(1, int(typical_count))
    lo, hi = np.quantile(sample, [QUANTILE_TRIM, 1.0 - QUANTILE_TRIM],
                         method="inverted_cdf")
    span = float(hi - lo)
    if span <= 0.0:
        return DEGENERATE_REL * max(1.0, float(np.max(np.abs(sample))))
    bins = math.ceil(math.log2(typical_count) + 1) if typical_count > 1 else 1
    return min(span / bins, SPACING_FACTOR * span / typical_count)


def sample_density(sample, grid=None, points: int = DEFAULT_POINTS,
                   typical_count: int | None = None) -> SpectralDensity:
    """Gaussian KDE of a 1-D sample, renormalized on its grid.

    With grid=None a natural grid of `points` uniform abscissae spanning
    [min - 3h, max + 3h] is used. The sample is sorted first so the result
    does not depend on input order, even at the last floating-point bit.
    """
    sample = np.sort(np.asarray(sample, dtype=float).ravel())
    if sample.size == 0:
        raise DomainError("cannot estimate a density from an empty sample")
    h = kernel_bandwidth(sample, typical_count)
    grid = _grid_array(grid, sample, h, points)
    h_used = max(h, float(grid[1] - grid[0]))
    dens = np.zeros_like(grid)
    for start in range(0, sample.size, _KDE_CHUNK):
        chunk = sample[start:start + _KDE_CHUNK]
        z = (grid[:, None] - chunk[None, :]) / h_used
        dens += np.exp(-0.5 * z * z).sum(axis=1)
    dens /= sample.size * h_used * math.sqrt(2.0 * math.pi)
    total = float(np.trapezoid(dens, grid))
    if not math.isfinite(total) or total <= 0.0:
        raise NumericError("sample carries no mass on the requested grid")
    return SpectralDensity(grid, dens / total, h_used)


def estimate_density(spectra, grid=None, points: int = DEFAULT_POINTS) -> SpectralDensity:
    """Pooled KDE of one spectrum or several (their eigenvalues combined).

    Several spectra realize a Monte Carlo average of the underlying
    ensemble density. The bandwidth sample size is the typical length of
    one spectrum, so duplicating a spectrum leaves the estimate unchanged.
    """
    items = [spectra] if isinstance(spectra, Spectrum) else list(spectra)
    if not items:
        raise DomainError("need at least one spectrum")
    pooled = np.concatenate([s.values for s in items])
    typical = int(round(sum(s.n for s in items) / len(items)))
    return sample_density(pooled, grid=grid, points=points, typical_count=typical)


def average_density(densities: Sequence[SpectralDensity]) -> SpectralDensity:
    """Pointwise mean of densities on one shared grid, renormalized."""
    densities = list(densities)
    if not densities:
        raise DomainError("need at least one density to average")
    first = densities[0]
    for d in densities[1:]:
        if not first.same_grid(d):
            raise GridMismatchError("densities must share an identical grid")
    mean = np.mean([d.values for d in densities], axis=0)
    mean /= np.trapezoid(mean, first.grid)
    bw = float(np.mean([d.bandwidth for d in densities]))
    return SpectralDensity(first.grid, mean, bw)


def shared_grid(samples: Iterable[np.ndarray], points: int = DEFAULT_POINTS) -> np.ndarray:
    """Grid covering every sample's natural range, for comparable densities."""
    samples = [np.asarray(s, dtype=float) for s in samples]
    if not samples or any(s.size == 0 for s in samples):
        raise DomainError("shared grid needs nonempty samples")
    lo = math.inf
    hi = -math.inf
    for s in samples:
        h = kernel_bandwidth(s)
        lo = min(lo, float(s.min()) - TAIL_SIGMAS * h)
        hi = max(hi, float(s.max()) + TAIL_SIGMAS * h)
    return np.linspace(lo, hi, points)


def semicircle_density(p: float, grid: np.ndarray) -> np.ndarray:
    """Closed-form spectral density of a dense ER graph (Wigner semicircle).

    Radius 2*sqrt(p(1-p)) around zero on the 1/sqrt(n) eigenvalue scale.
    """
    if not 0.0 < p < 1.0:
        raise DomainError("semicircle form needs 0 < p < 1")
    grid = np.asarray(grid, dtype=float)
    radius_sq = 4.0 * p * (1.0 - p)
    vals = np.sqrt(np.clip(radius_sq - grid ** 2, 0.0, None))
    return vals / (2.0 * math.pi * p * (1.0 - p))


def _grid_array(grid, sample: np.ndarray, h: float, points: int) -> np.ndarray:
    if grid is None:
        if points < 2:
            raise DomainError("grid needs at least two points")
        return np.linspace(sample[0] - TAIL_SIGMAS * h,
                           sample[-1] + TAIL_SIGMAS * h, points)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise DomainError("grid must be a 1-D array with at least two points")
    return grid


def density_to_csv(density: SpectralDensity, target) -> None:
    """Write 'lambda,density' rows at full double precision."""
    with _open_text(target, "w") as handle:
        handle.write("lambda,density\n")
        for x, y in zip(density.grid, density.values):
            handle.write(f"{x:.17g},{y:.17g}\n")


def density_from_csv(source, bandwidth: float | None = None) -> SpectralDensity:
    """Read a density CSV; bandwidth defaults to the grid step if unknown."""
    with _open_text(source, "r") as handle:
        header = handle.readline().strip()
        if header != "lambda,density":
            raise DomainError("density CSV must start with 'lambda,density'")
        rows = [line.strip().split(",") for line in handle if line.strip()]
    grid = np.array([float(r[0]) for r in rows])
    vals = np.array([float(r[1]) for r in rows])
    if bandwidth is None:
        bandwidth = float(grid[1] - grid[0])
    return SpectralDensity(grid, vals, bandwidth)


def spectrum_to_file(spec: Spectrum, target) -> None:
    """One scaled eigenvalue per line, preceded by a convention comment."""
    with _open_text(target, "w") as handle:
        handle.write(f"# n={spec.n} scaling=1/sqrt(n) order=descending\n")
        for v in spec.values:
            handle.write(f"{v:.17g}\n")


def spectrum_from_file(source) -> Spectrum:
    with _open_text(source, "r") as handle:
        values = []
        n = None
        for line in handle:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for field in line[1:].split():
                    if field.startswith("n="):
                        n = int(field[2:])
                continue
            values.append(float(line))
    if n is None:
        n = len(values)
    return Spectrum(np.array(values), n)


class _open_text:
    def __init__(self, target, mode):
        self.target = target
        self.mode = mode
        self.owned = None

    def __enter__(self):
        if isinstance(self.target, (str, Path)):
            self.owned = open(self.target, self.mode, encoding="utf-8")
            return self.owned
        return self.target

    def __exit__(self, *exc):
        if self.owned is not None:
            self.owned.close()
        return False
