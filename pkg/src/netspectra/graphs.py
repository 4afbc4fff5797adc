"""Undirected simple graphs and the three random-graph families.

Graphs are immutable value objects: a node count plus a set of unordered
edges with 0-based ids. Generators are deterministic given (params, seed).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DomainError
from .rng import make_rng

ERDOS_RENYI = "erdos-renyi"
SCALE_FREE = "scale-free"
SMALL_WORLD = "small-world"
FAMILIES = (ERDOS_RENYI, SCALE_FREE, SMALL_WORLD)

_ALIASES = {
    "er": ERDOS_RENYI,
    "erdos-renyi": ERDOS_RENYI,
    "erdos_renyi": ERDOS_RENYI,
    "sf": SCALE_FREE,
    "scale-free": SCALE_FREE,
    "scale_free": SCALE_FREE,
    "sw": SMALL_WORLD,
    "small-world": SMALL_WORLD,
    "small_world": SMALL_WORLD,
}


def canonical_family(name: str) -> str:
    try:
        return _ALIASES[name.strip().lower()]
    except KeyError:
        raise DomainError(f"unknown graph family: {name!r}") from None


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph: `n` nodes, edges as (u, v) pairs with u < v."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("node count must be positive")
        for u, v in self.edges:
            if u == v:
                raise DomainError(f"self-loop on node {u}")
            if not (0 <= u < v < self.n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph, normalizing pair order and dropping duplicates."""
        canon = frozenset((min(u, v), max(u, v)) for u, v in pairs)
        return cls(n, canon)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        """Dense symmetric 0/1 adjacency matrix."""
        a = np.zeros((self.n, self.n))
        if self.edges:
            idx = np.array(sorted(self.edges), dtype=np.int64)
            a[idx[:, 0], idx[:, 1]] = 1.0
            a[idx[:, 1], idx[:, 0]] = 1.0
        return a

    def adjacency_sets(self) -> list:
        nbrs = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return nbrs


@dataclass(frozen=True)
class ModelSpec:
    """A random-graph family plus its scalar parameter and structural constants.

    theta is p for Erdos-Renyi, the attachment exponent for scale-free, and
    the rewiring probability for small-world. m1/n0 apply to scale-free,
    k to small-world.
    """

    family: str
    n: int
    theta: float
    m1: int | None = None
    n0: int | None = None
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", canonical_family(self.family))
        if self.n < 1:
            raise DomainError("node count must be positive")
        if self.family == ERDOS_RENYI:
            if not 0.0 <= self.theta <= 1.0:
                raise DomainError("edge probability must lie in [0, 1]")
        elif self.family == SCALE_FREE:
            if self.theta < 0.0:
                raise DomainError("attachment exponent must be >= 0")
            m1 = self.m1 if self.m1 is not None else 1
            n0 = self.n0 if self.n0 is not None else m1
            object.__setattr__(self, "m1", m1)
            object.__setattr__(self, "n0", n0)
            if not (self.n > n0 >= m1 >= 1):
                raise DomainError("need n > n0 >= m1 >= 1 for scale-free growth")
        elif self.family == SMALL_WORLD:
            if not 0.0 <= self.theta <= 1.0:
                raise DomainError("rewiring probability must lie in [0, 1]")
            if self.k is None:
                raise DomainError("small-world spec needs the ring neighbor count k")
            if self.k % 2 != 0 or not (0 < self.k < self.n):
                raise DomainError("k must be even and satisfy 0 < k < n")

    def structural_label(self) -> str:
        if self.family == SCALE_FREE:
            return f"m1={self.m1},n0={self.n0}"
        if self.family == SMALL_WORLD:
            return f"k={self.k}"
        return ""


def generate(spec: ModelSpec, seed) -> Graph:
    """Generate one graph from a model spec."""
    if spec.family == ERDOS_RENYI:
        return generate_er(spec.n, spec.theta, seed)
    if spec.family == SCALE_FREE:
        return generate_scale_free(spec.n, spec.theta, spec.m1, spec.n0, seed)
    return generate_small_world(spec.n, spec.k, spec.theta, seed)


def generate_er(n: int, p: float, seed) -> Graph:
    """Erdos-Renyi G(n, p): each unordered pair kept independently with prob p.

    Pairs are visited in lexicographic order with one uniform draw each, so
    the same (n, p, seed) always yields the same edge set.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError("edge probability must lie in [0, 1]")
    if n < 1:
        raise DomainError("node count must be positive")
    rng = make_rng(seed)
    edges = []
    for u in range(n - 1):
        hits = np.nonzero(rng.random(n - u - 1) < p)[0]
        edges.extend((u, u + 1 + int(j)) for j in hits)
    return Graph(n, frozenset(edges))


def generate_scale_free(n: int, p_s: float, m1: int = 1, n0: int | None = None,
                        seed=None) -> Graph:
    """Preferential-attachment growth with attachment weight (degree+1)**p_s.

    Starts from n0 isolated seed nodes; every new node attaches to m1
    distinct existing nodes, sampled by exact cumulative-weight inversion.
    The +1 degree offset keeps zero-degree targets reachable. Degrees are
    frozen while one node picks its m1 targets and updated afterwards.
    """
    if n0 is None:
        n0 = m1
    spec = ModelSpec(SCALE_FREE, n, p_s, m1=m1, n0=n0)
    rng = make_rng(seed)
    deg = np.zeros(n)
    edges = []
    for t in range(spec.n0, n):
        weights = (deg[:t] + 1.0) ** p_s
        chosen = []
        for _ in range(spec.m1):
            total = weights.sum()
            cum = np.cumsum(weights)
            j = int(np.searchsorted(cum, rng.random() * total, side="right"))
            j = min(j, t - 1)
            chosen.append(j)
            weights[j] = 0.0
        for j in chosen:
            edges.append((j, t))
            deg[j] += 1
            deg[t] += 1
    return Graph.from_edges(n, edges)


def generate_small_world(n: int, k: int, p_r: float, seed) -> Graph:
    """Watts-Strogatz ring lattice with clockwise lap-by-lap rewiring.

    Lap d considers each node's edge to its d-th clockwise neighbor once;
    with probability p_r the far endpoint is re-drawn uniformly, redrawing
    on self-loops/duplicates. After n failed draws the edge stays in place,
    so the edge count n*k/2 is preserved for every p_r and seed.
    """
    if k % 2 != 0 or not (0 < k < n):
        raise DomainError("k must be even and satisfy 0 < k < n")
    if not 0.0 <= p_r <= 1.0:
        raise DomainError("rewiring probability must lie in [0, 1]")
    rng = make_rng(seed)
    nbrs = [set() for _ in range(n)]
    for i in range(n):
        for d in range(1, k // 2 + 1):
            j = (i + d) % n
            nbrs[i].add(j)
            nbrs[j].add(i)
    for d in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + d) % n
            if rng.random() >= p_r:
                continue
            nbrs[i].discard(j)
            nbrs[j].discard(i)
            for _ in range(n):
                t = int(rng.integers(n))
                if t != i and t not in nbrs[i]:
                    nbrs[i].add(t)
                    nbrs[t].add(i)
                    break
            else:
                nbrs[i].add(j)
                nbrs[j].add(i)
    pairs = [(i, j) for i in range(n) for j in nbrs[i] if i < j]
    return Graph(n, frozenset(pairs))
