"""Classical topology metrics: degree, clustering, path lengths, diameter.

Disconnected graphs are handled by averaging over finite distances only
(within components); the diameter is the largest finite distance.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from .graphs import Graph

_BATCH = 256


@dataclass(frozen=True)
class GraphMetrics:
    edge_count: int
    average_degree: float
    diameter: int
    clustering_coefficient: float
    average_path_length: float

    def to_dict(self) -> dict:
        return asdict(self)


def metrics(g: Graph) -> GraphMetrics:
    """Compute edge count, mean degree, diameter, clustering, and mean path length."""
    m = g.edge_count
    diameter, apl = _diameter_and_apl(g)
    return GraphMetrics(
        edge_count=m,
        average_degree=2.0 * m / g.n,
        diameter=diameter,
        clustering_coefficient=clustering_coefficient(g),
        average_path_length=apl,
    )


def clustering_coefficient(g: Graph) -> float:
    """Average local clustering; nodes with degree < 2 contribute 0."""
    if not g.edges:
        return 0.0
    a = _sparse_adjacency(g)
    triangles = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    deg = g.degrees().astype(float)
    local = np.zeros(g.n)
    mask = deg >= 2
    local[mask] = 2.0 * triangles[mask] / (deg[mask] * (deg[mask] - 1.0))
    return float(local.mean())


def _sparse_adjacency(g: Graph) -> sp.csr_matrix:
    if not g.edges:
        return sp.csr_matrix((g.n, g.n))
    idx = np.array(sorted(g.edges), dtype=np.int64)
    rows = np.concatenate([idx[:, 0], idx[:, 1]])
    cols = np.concatenate([idx[:, 1], idx[:, 0]])
    data = np.ones(len(rows))
    return sp.csr_matrix((data, (rows, cols)), shape=(g.n, g.n))


def _diameter_and_apl(g: Graph) -> tuple[int, float]:
    """Largest finite distance and mean finite distance over ordered pairs."""
    if not g.edges:
        return 0, 0.0
    a = _sparse_adjacency(g)
    total = 0.0
    pairs = 0
    longest = 0.0
    for start in range(0, g.n, _BATCH):
        idx = np.arange(start, min(start + _BATCH, g.n))
        dist = dijkstra(a, directed=False, unweighted=True, indices=idx)
        finite = np.isfinite(dist) & (dist > 0)
        if finite.any():
            total += dist[finite].sum()
            pairs += int(finite.sum())
            longest = max(longest, float(dist[finite].max()))
    if pairs == 0:
        return 0, 0.0
    return int(longest), total / pairs
