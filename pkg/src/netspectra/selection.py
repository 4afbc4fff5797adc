"""Model selection among candidate graph families.

Each family is fitted by minimum-KL grid search and scored with the
AIC-flavored criterion 2*KL + 2*dim(theta). All built-in families have a
one-dimensional parameter, so the penalty cannot change the ranking; it is
computed and reported anyway. Raw KL values are reported alongside scores.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .density import SpectralDensity, estimate_density, spectrum
from .errors import NoFeasibleModelError
from .estimation import ParameterGrid, ReferenceCache, fit
from .graphs import ERDOS_RENYI, SCALE_FREE, SMALL_WORLD, Graph

THETA_DIM = 1


@dataclass(frozen=True)
class RankedCandidate:
    family: str
    theta_hat: float
    kl: float
    score: float

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "theta_hat": self.theta_hat,
            "kl": "inf" if math.isinf(self.kl) else self.kl,
            "score": "inf" if math.isinf(self.score) else self.score,
        }


@dataclass(frozen=True)
class SelectionResult:
    ranked: tuple
    chosen: str

    def to_dict(self) -> dict:
        return {"chosen": self.chosen,
                "ranked": [r.to_dict() for r in self.ranked]}


def select_model(observed: SpectralDensity, candidates: Sequence[ParameterGrid],
                 seed: int, cache: ReferenceCache | None = None) -> SelectionResult:
    """Fit every candidate family and rank by penalized KL score.

    Infeasible families (all-infinite KL) rank last with an infinite score;
    if every family is infeasible the error propagates. Ties keep the
    candidate list order, so the first-listed candidate wins.
    """
    if not candidates:
        raise NoFeasibleModelError("no candidate families given")
    cache = cache if cache is not None else ReferenceCache()
    entries = []
    feasible = False
    for grid in candidates:
        try:
            result = fit(observed, grid, seed, cache=cache)
            kl = result.kl_at_theta_hat
            theta = result.theta_hat
            feasible = feasible or math.isfinite(kl)
        except NoFeasibleModelError:
            kl = math.inf
            theta = math.nan
        entries.append(RankedCandidate(grid.family, theta, kl,
                                       2.0 * kl + 2.0 * THETA_DIM))
    if not feasible:
        raise NoFeasibleModelError("every candidate family is infeasible")
    ranked = tuple(sorted(entries, key=lambda r: r.score))
    return SelectionResult(ranked=ranked, chosen=ranked[0].family)


def default_candidates(g: Graph, mc_replicates: int = 50,
                       er_halfwidth: float = 0.10,
                       er_step: float = 0.01,
                       sf_range: tuple = (0.25, 3.0),
                       sf_step: float = 0.05,
                       sw_step: float = 0.01) -> list:
    """Candidate grids with structural constants matched to the observed graph.

    Density matching keeps the KL comparison about structure rather than
    edge-count mismatch: the ER window is centered on the empirical edge
    probability, the scale-free edges-per-step reproduces the observed
    edges-per-node, and the ring neighbor count is the nearest even match
    to the observed mean degree.
    """
    n = g.n
    m = g.edge_count
    grids = []

    if n >= 2:
        p_hat = m / (n * (n - 1) / 2.0)
        lo = max(0.005, p_hat - er_halfwidth)
        hi = min(0.995, p_hat + er_halfwidth)
        values = np.round(np.arange(lo, hi + er_step / 2, er_step), 6)
        values = [float(v) for v in values if 0.0 < v < 1.0]
        if values:
            grids.append(ParameterGrid(ERDOS_RENYI, tuple(values), n,
                                       mc_replicates=mc_replicates))

    m1 = max(1, round(m / n)) if n else 1
    m1 = min(m1, n - 1) if n > 1 else 1
    if n > m1 >= 1:
        count = int(round((sf_range[1] - sf_range[0]) / sf_step)) + 1
        values = tuple(round(sf_range[0] + i * sf_step, 6) for i in range(count))
        grids.append(ParameterGrid(SCALE_FREE, values, n,
                                   mc_replicates=mc_replicates, m1=m1, n0=m1))

    k = 2 * round(m / n) if n else 0
    k = max(2, k)
    k_cap = (n - 1) - ((n - 1) % 2)
    k = min(k, k_cap)
    if 0 < k < n:
        count = int(round(1.0 / sw_step)) + 1
        values = tuple(round(i * sw_step, 6) for i in range(count))
        grids.append(ParameterGrid(SMALL_WORLD, values, n,
                                   mc_replicates=mc_replicates, k=k))
    return grids


def classify_network(g: Graph, candidates: Sequence[ParameterGrid] | None = None,
                     seed: int = 0, cache: ReferenceCache | None = None,
                     grid=None, points: int = 512,
                     mc_replicates: int = 50) -> SelectionResult:
    """Spectrum -> density -> select_model, with derived candidates by default."""
    observed = estimate_density(spectrum(g), grid=grid, points=points)
    if candidates is None:
        candidates = default_candidates(g, mc_replicates=mc_replicates)
    return select_model(observed, candidates, seed, cache=cache)
