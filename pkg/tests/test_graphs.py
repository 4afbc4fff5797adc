import math

import numpy as np
import pytest

from netspectra import (DomainError, Graph, ModelSpec, generate, generate_er,
                        generate_scale_free, generate_small_world)
from netspectra.metrics import clustering_coefficient


def check_invariants(g: Graph):
    assert g.n >= 1
    for u, v in g.edges:
        assert u != v
        assert 0 <= u < v < g.n


class TestGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(DomainError):
            Graph(3, frozenset({(1, 1)}))

    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            Graph(3, frozenset({(0, 3)}))

    def test_from_edges_normalizes_and_dedups(self):
        g = Graph.from_edges(4, [(2, 0), (0, 2), (1, 3)])
        assert g.edges == frozenset({(0, 2), (1, 3)})

    def test_degrees_and_adjacency_agree(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        a = g.adjacency()
        assert np.array_equal(a, a.T)
        assert np.array_equal(a.sum(axis=0), g.degrees())


class TestErdosRenyi:
    def test_p_zero_empty(self):
        assert generate_er(10, 0.0, seed=1).edge_count == 0

    def test_p_one_complete(self):
        assert generate_er(10, 1.0, seed=1).edge_count == 45

    def test_p_out_of_domain(self):
        with pytest.raises(DomainError):
            generate_er(10, 1.5, seed=1)

    def test_mean_edge_count_matches_binomial(self):
        # 124750 pairs at p=0.5: mean 62375, one-draw sigma sqrt(124750/4)
        counts = [generate_er(500, 0.5, seed=s).edge_count for s in range(200)]
        sigma = math.sqrt(124750 * 0.25)
        assert abs(np.mean(counts) - 62375) < 3 * sigma

    def test_binomial_mean_other_density(self):
        counts = [generate_er(200, 0.1, seed=s).edge_count for s in range(100)]
        pairs = 200 * 199 / 2
        sigma = math.sqrt(pairs * 0.1 * 0.9)
        assert abs(np.mean(counts) - pairs * 0.1) < 4 * sigma

    def test_deterministic(self):
        assert generate_er(50, 0.3, seed=7) == generate_er(50, 0.3, seed=7)

    def test_invariants(self):
        for seed, p in [(0, 0.1), (1, 0.5), (2, 0.9)]:
            check_invariants(generate_er(40, p, seed=seed))


class TestScaleFree:
    def test_single_attachment_grows_a_tree(self):
        g = generate_scale_free(5, 1.0, m1=1, n0=1, seed=3)
        assert g.edge_count == 4
        # connected: every non-seed node reaches node 0
        nbrs = g.adjacency_sets()
        seen = {0}
        frontier = [0]
        while frontier:
            u = frontier.pop()
            for v in nbrs[u]:
                if v not in seen:
                    seen.add(v)
                    frontier.append(v)
        assert seen == set(range(5))

    def test_edge_count_is_growth_steps_times_m1(self):
        g = generate_scale_free(500, 1.0, m1=2, n0=2, seed=11)
        assert g.edge_count == (500 - 2) * 2  # isolated seed nodes add none

    def test_rejects_m1_above_n0(self):
        with pytest.raises(DomainError):
            generate_scale_free(10, 1.0, m1=3, n0=2, seed=0)

    def test_deterministic(self):
        a = generate_scale_free(60, 1.5, m1=2, n0=2, seed=5)
        b = generate_scale_free(60, 1.5, m1=2, n0=2, seed=5)
        assert a == b

    def test_invariants(self):
        for seed, ps in [(0, 0.0), (1, 1.0), (2, 2.5)]:
            check_invariants(generate_scale_free(50, ps, m1=2, n0=3, seed=seed))

    def test_attachment_exponent_shapes_degree_tail(self):
        # Oracle: an independent straightforward simulation of the attachment
        # process, tracking probabilities explicitly. The generator at
        # exponent 1 should match the linear-attachment reference much more
        # closely than an exponent-3 reference, in Kolmogorov-Smirnov
        # distance between degree samples, averaged over seeds.
        def reference_degrees(n, exponent, rng):
            deg = [0]
            for t in range(1, n):
                weights = [(d + 1) ** exponent for d in deg]
                total = sum(weights)
                r = rng.random() * total
                acc = 0.0
                for j, w in enumerate(weights):
                    acc += w
                    if r <= acc:
                        break
                deg[j] += 1
                deg.append(1)
            return np.array(deg)

        def ks_distance(a, b):
            values = np.union1d(a, b)
            cdf_a = np.searchsorted(np.sort(a), values, side="right") / len(a)
            cdf_b = np.searchsorted(np.sort(b), values, side="right") / len(b)
            return np.max(np.abs(cdf_a - cdf_b))

        n = 1000
        d_lin, d_cub = [], []
        for s in range(50):
            ours = generate_scale_free(n, 1.0, m1=1, n0=1, seed=s).degrees()
            rng = np.random.default_rng(10_000 + s)
            d_lin.append(ks_distance(ours, reference_degrees(n, 1.0, rng)))
            d_cub.append(ks_distance(ours, reference_degrees(n, 3.0, rng)))
        assert np.mean(d_cub) > np.mean(d_lin)


class TestSmallWorld:
    def test_no_rewiring_gives_ring_lattice(self):
        g = generate_small_world(20, 4, 0.0, seed=1)
        assert np.all(g.degrees() == 4)
        expected = {(i, (i + d) % 20) for i in range(20) for d in (1, 2)}
        expected = {(min(u, v), max(u, v)) for u, v in expected}
        assert g.edges == frozenset(expected)

    @pytest.mark.parametrize("p_r", [0.0, 0.1, 0.5, 1.0])
    def test_edge_count_preserved(self, p_r):
        for seed in range(5):
            g = generate_small_world(20, 4, p_r, seed=seed)
            assert g.edge_count == 40

    def test_rejects_odd_k(self):
        with pytest.raises(DomainError):
            generate_small_world(10, 3, 0.1, seed=0)

    def test_rejects_k_at_least_n(self):
        with pytest.raises(DomainError):
            generate_small_world(10, 10, 0.1, seed=0)

    def test_full_rewiring_kills_clustering(self):
        # At p_r=1 the graph is ER-like; matched-density ER clustering is
        # K/(n-1) ~ 0.04, far below the 0.5 of the pristine lattice.
        ccs = [clustering_coefficient(generate_small_world(100, 4, 1.0, seed=s))
               for s in range(100)]
        assert np.mean(ccs) < 0.15

    def test_deterministic(self):
        a = generate_small_world(30, 4, 0.3, seed=9)
        b = generate_small_world(30, 4, 0.3, seed=9)
        assert a == b

    def test_invariants(self):
        for seed, pr in [(0, 0.0), (1, 0.3), (2, 1.0)]:
            check_invariants(generate_small_world(25, 6, pr, seed=seed))


class TestModelSpec:
    def test_dispatch_matches_direct_calls(self):
        spec = ModelSpec("er", 30, 0.2)
        assert generate(spec, seed=4) == generate_er(30, 0.2, seed=4)
        spec = ModelSpec("scale-free", 30, 1.0, m1=2, n0=2)
        assert generate(spec, seed=4) == generate_scale_free(30, 1.0, 2, 2, seed=4)
        spec = ModelSpec("small-world", 30, 0.3, k=4)
        assert generate(spec, seed=4) == generate_small_world(30, 4, 0.3, seed=4)

    def test_validates_per_family(self):
        with pytest.raises(DomainError):
            ModelSpec("er", 10, 1.2)
        with pytest.raises(DomainError):
            ModelSpec("scale-free", 10, -0.5)
        with pytest.raises(DomainError):
            ModelSpec("small-world", 10, 0.3, k=3)
        with pytest.raises(DomainError):
            ModelSpec("nonesuch", 10, 0.3)
