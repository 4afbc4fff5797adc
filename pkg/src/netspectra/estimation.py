"""Minimum-KL parameter estimation against Monte Carlo reference densities.

For each candidate parameter value the family's unknown spectral density is
approximated by averaging the densities of `mc_replicates` simulated graphs
on the observed density's grid; the estimate is the candidate minimizing
KL(observed || reference). Grid search only: the KL profile is Monte Carlo
noisy, and the candidate set is explicit.

Reference construction dominates runtime, so replicate spectra and rendered
densities are cached, optionally on disk. Candidate evaluations are
independent; the cache supports concurrent readers and atomic writes
(single-writer semantics via write-to-temp plus rename).
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .density import (SpectralDensity, average_density, density_from_csv,
                      density_to_csv, sample_density, shared_grid, spectrum)
from .divergence import kl_divergence
from .errors import DomainError, NoFeasibleModelError
from .graphs import ModelSpec, canonical_family, generate
from .rng import derive_seed

DEFAULT_REPLICATES = 50


@dataclass(frozen=True)
class ParameterGrid:
    """Candidate parameter values for one family, plus structural constants."""

    family: str
    values: tuple
    n: int
    mc_replicates: int = DEFAULT_REPLICATES
    m1: int | None = None
    n0: int | None = None
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", canonical_family(self.family))
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DomainError("candidate grid must not be empty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise DomainError("candidate values must be strictly increasing")
        if self.mc_replicates < 1:
            raise DomainError("mc_replicates must be at least 1")
        object.__setattr__(self, "values", vals)
        for v in vals:
            self.spec_for(v)  # validates each candidate against its family domain

    def spec_for(self, theta: float) -> ModelSpec:
        return ModelSpec(self.family, self.n, float(theta),
                         m1=self.m1, n0=self.n0, k=self.k)


@dataclass(frozen=True)
class FitResult:
    family: str
    theta_hat: float
    kl_at_theta_hat: float
    trace: tuple
    reference_cache_key: str

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "theta_hat": self.theta_hat,
            "kl": "inf" if math.isinf(self.kl_at_theta_hat) else self.kl_at_theta_hat,
            "trace": [[t, "inf" if math.isinf(v) else v] for t, v in self.trace],
            "reference_cache_key": self.reference_cache_key,
        }


class ReferenceCache:
    """Two-level cache for reference spectra and rendered densities.

    Replicate eigenvalue matrices are keyed by (family, n, structural,
    theta, replicates, seed); rendered densities additionally by the grid.
    With a root directory, entries persist as .npy files and density CSVs
    with JSON sidecars describing the key fields.
    """

    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)
        self._spectra: dict = {}
        self._densities: dict = {}

    # -- spectra ---------------------------------------------------------
    def get_spectra(self, key: str) -> np.ndarray | None:
        if key in self._spectra:
            return self._spectra[key]
        if self.root is not None:
            path = self.root / f"{key}-spectra.npy"
            if path.exists():
                mat = np.load(path)
                self._spectra[key] = mat
                return mat
        return None

    def put_spectra(self, key: str, matrix: np.ndarray, meta: dict) -> None:
        self._spectra[key] = matrix
        if self.root is not None:
            _atomic_bytes(self.root / f"{key}-spectra.npy",
                          _npy_bytes(matrix))
            _atomic_bytes(self.root / f"{key}-spectra.json",
                          json.dumps(meta, sort_keys=True).encode())

    # -- rendered densities ----------------------------------------------
    def get_density(self, key: str) -> SpectralDensity | None:
        if key in self._densities:
            return self._densities[key]
        if self.root is not None:
            path = self.root / f"{key}-density.csv"
            if path.exists():
                meta_path = self.root / f"{key}-density.json"
                bw = None
                if meta_path.exists():
                    bw = json.loads(meta_path.read_text()).get("bandwidth")
                dens = density_from_csv(path, bandwidth=bw)
                self._densities[key] = dens
                return dens
        return None

    def put_density(self, key: str, density: SpectralDensity, meta: dict) -> None:
        self._densities[key] = density
        if self.root is not None:
            tmp = self.root / f".{key}-density.tmp"
            density_to_csv(density, tmp)
            os.replace(tmp, self.root / f"{key}-density.csv")
            meta = dict(meta, bandwidth=density.bandwidth)
            _atomic_bytes(self.root / f"{key}-density.json",
                          json.dumps(meta, sort_keys=True).encode())


def candidate_seed(master_seed: int, spec: ModelSpec) -> int:
    """Stable per-candidate seed so candidates are decorrelated but repeatable."""
    return derive_seed(master_seed, spec.family, spec.n, spec.theta,
                       spec.structural_label())


def reference_density(spec: ModelSpec, replicates: int, seed: int,
                      grid=None, cache: ReferenceCache | None = None,
                      points: int = 512) -> SpectralDensity:
    """Average density of `replicates` simulated graphs on a shared grid."""
    if replicates < 1:
        raise DomainError("need at least one replicate")
    cache = cache if cache is not None else ReferenceCache()
    matrix = _reference_spectra(spec, replicates, seed, cache)
    if grid is None:
        grid = shared_grid(list(matrix), points=points)
    grid = np.asarray(grid, dtype=float)
    dkey = _density_key(spec, replicates, seed, grid)
    hit = cache.get_density(dkey)
    if hit is not None:
        return hit
    parts = [sample_density(row, grid=grid, typical_count=spec.n) for row in matrix]
    dens = average_density(parts)
    cache.put_density(dkey, dens, _meta(spec, replicates, seed, grid))
    return dens


def fit(observed: SpectralDensity, grid: ParameterGrid, seed: int,
        cache: ReferenceCache | None = None) -> FitResult:
    """Grid-search the candidate set for the KL-minimizing parameter.

    Infinite KL values are legitimate (support violations) and rank last;
    ties break toward the smallest candidate index. Raises
    NoFeasibleModelError when every candidate is infinite.
    """
    cache = cache if cache is not None else ReferenceCache()
    trace = []
    best_idx = None
    best_kl = math.inf
    for i, theta in enumerate(grid.values):
        spec = grid.spec_for(theta)
        ref = reference_density(spec, grid.mc_replicates,
                                candidate_seed(seed, spec),
                                grid=observed.grid, cache=cache)
        value = kl_divergence(observed, ref)
        trace.append((theta, value))
        if value < best_kl:
            best_idx = i
            best_kl = value
    if best_idx is None:
        raise NoFeasibleModelError(
            f"every {grid.family} candidate has infinite divergence")
    return FitResult(
        family=grid.family,
        theta_hat=grid.values[best_idx],
        kl_at_theta_hat=best_kl,
        trace=tuple(trace),
        reference_cache_key=_family_key(grid, seed, observed.grid),
    )


# -- keys and helpers -----------------------------------------------------

def _reference_spectra(spec: ModelSpec, replicates: int, seed: int,
                       cache: ReferenceCache) -> np.ndarray:
    skey = _spectra_key(spec, replicates, seed)
    hit = cache.get_spectra(skey)
    if hit is not None:
        return hit
    children = np.random.SeedSequence(seed).spawn(replicates)
    rows = [spectrum(generate(spec, np.random.default_rng(child))).values
            for child in children]
    matrix = np.vstack(rows)
    cache.put_spectra(skey, matrix, _meta(spec, replicates, seed, None))
    return matrix


def _meta(spec: ModelSpec, replicates: int, seed: int, grid) -> dict:
    meta = {
        "family": spec.family,
        "n": spec.n,
        "theta": spec.theta,
        "structural": spec.structural_label(),
        "replicates": replicates,
        "seed": seed,
    }
    if grid is not None:
        meta["grid"] = _grid_signature(grid)
    return meta


def _grid_signature(grid: np.ndarray) -> str:
    return f"{grid[0]:.12g}:{grid[-1]:.12g}:{len(grid)}"


def _digest(*parts) -> str:
    text = "|".join(str(p) for p in parts)
    return hashlib.blake2s(text.encode(), digest_size=10).hexdigest()


def _spectra_key(spec: ModelSpec, replicates: int, seed: int) -> str:
    return _digest("spectra", spec.family, spec.n, f"{spec.theta:.12g}",
                   spec.structural_label(), replicates, seed)


def _density_key(spec: ModelSpec, replicates: int, seed: int,
                 grid: np.ndarray) -> str:
    return _digest("density", spec.family, spec.n, f"{spec.theta:.12g}",
                   spec.structural_label(), replicates, seed,
                   _grid_signature(grid))


def _family_key(grid: ParameterGrid, seed: int, garr: np.ndarray) -> str:
    structural = f"m1={grid.m1},n0={grid.n0},k={grid.k}"
    return _digest("refs", grid.family, grid.n, structural,
                   grid.mc_replicates, seed, _grid_signature(garr))


def _npy_bytes(arr: np.ndarray) -> bytes:
    import io

    buf = io.BytesIO()
    np.save(buf, arr)
    return buf.getvalue()


def _atomic_bytes(path: Path, payload: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
