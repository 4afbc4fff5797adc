import math

import numpy as np
import pytest

from netspectra import (DomainError, Graph, GridMismatchError,
                        SpectralDensity, Spectrum, average_density,
                        density_from_csv, density_to_csv, estimate_density,
                        generate_er, sample_density, semicircle_density,
                        shared_grid, spectrum, spectrum_from_file,
                        spectrum_to_file)


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


class TestSpectrum:
    def test_single_edge(self):
        g = Graph.from_edges(2, [(0, 1)])
        s = spectrum(g)
        assert s.values == pytest.approx([1 / math.sqrt(2), -1 / math.sqrt(2)])

    def test_empty_graph_all_zero(self):
        s = spectrum(Graph(5))
        assert np.allclose(s.values, 0.0)

    def test_cycle_four(self):
        # eigenvalues of C_n are 2*cos(2*pi*k/n): {2, 0, 0, -2} for n=4
        s = spectrum(cycle_graph(4))
        assert s.unscaled() == pytest.approx([2.0, 0.0, 0.0, -2.0], abs=1e-9)

    def test_cycle_eigenvalue_formula(self):
        n = 7
        s = spectrum(cycle_graph(n))
        expected = np.sort(2 * np.cos(2 * np.pi * np.arange(n) / n))[::-1]
        assert s.unscaled() == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("seed,p", [(0, 0.1), (1, 0.5), (2, 0.85)])
    def test_trace_identities(self, seed, p):
        g = generate_er(120, p, seed=seed)
        s = spectrum(g)
        unscaled = s.unscaled()
        assert abs(unscaled.sum()) < 1e-8 * g.n
        assert abs((unscaled ** 2).sum() - 2 * g.edge_count) < 1e-6 * g.n

    def test_descending_order_enforced(self):
        with pytest.raises(DomainError):
            Spectrum(np.array([0.0, 1.0]), 2)


class TestEstimateDensity:
    def test_symmetric_sample_gives_symmetric_density(self):
        d = estimate_density(Spectrum(np.array([1.0, 0.0, -1.0]), 3))
        assert np.max(np.abs(d.values - d.values[::-1])) < 1e-10

    def test_unit_integral_enforced(self):
        for seed in range(3):
            g = generate_er(60, 0.3, seed=seed)
            d = estimate_density(spectrum(g))
            assert abs(np.trapezoid(d.values, d.grid) - 1.0) < 1e-6

    def test_er_density_tracks_semicircle_center(self):
        # at p=0.5 the closed form peaks at 2/pi; the bulk should sit in
        # |lambda| <= 1 apart from the detached largest eigenvalue
        g = generate_er(500, 0.5, seed=42)
        d = estimate_density(spectrum(g))
        i0 = int(np.argmin(np.abs(d.grid)))
        assert d.values[i0] == pytest.approx(2 / math.pi, rel=0.15)
        bulk = (d.grid >= -1.2) & (d.grid <= 1.2)
        mass_bulk = np.trapezoid(np.where(bulk, d.values, 0.0), d.grid)
        assert mass_bulk > 0.95

    def test_permutation_invariance_is_exact(self):
        rng = np.random.default_rng(3)
        sample = rng.normal(size=200)
        d1 = sample_density(sample)
        d2 = sample_density(sample[::-1])
        assert np.array_equal(d1.values, d2.values)

    def test_doubling_multiplicities_changes_nothing(self):
        g = generate_er(80, 0.4, seed=5)
        s = spectrum(g)
        single = estimate_density(s)
        doubled = estimate_density([s, s])
        assert np.array_equal(single.grid, doubled.grid)
        assert np.max(np.abs(single.values - doubled.values)) < 1e-12

    def test_degenerate_sample_falls_back_to_narrow_bump(self):
        d = sample_density(np.full(10, 4.0))
        peak = d.grid[int(np.argmax(d.values))]
        assert peak == pytest.approx(4.0, abs=0.01)
        assert abs(np.trapezoid(d.values, d.grid) - 1.0) < 1e-6

    def test_empty_sample_rejected(self):
        with pytest.raises(DomainError):
            sample_density(np.array([]))

    def test_explicit_grid_is_respected(self):
        grid = np.linspace(-2, 2, 256)
        d = sample_density(np.array([-0.5, 0.0, 0.5]), grid=grid)
        assert np.array_equal(d.grid, grid)


class TestAverageDensity:
    def test_idempotent(self):
        d = estimate_density(spectrum(generate_er(50, 0.4, seed=1)))
        avg = average_density([d, d])
        assert np.allclose(avg.values, d.values, atol=1e-12)

    def test_disjoint_bumps_average_is_bimodal_and_normalized(self):
        grid = np.linspace(-1, 4, 512)
        b1 = sample_density(np.zeros(5) + 0.0, grid=grid)
        b2 = sample_density(np.zeros(5) + 3.0, grid=grid)
        avg = average_density([b1, b2])
        assert abs(np.trapezoid(avg.values, avg.grid) - 1.0) < 1e-6
        i_mid = int(np.argmin(np.abs(avg.grid - 1.5)))
        i_a = int(np.argmin(np.abs(avg.grid)))
        i_b = int(np.argmin(np.abs(avg.grid - 3.0)))
        assert avg.values[i_a] > avg.values[i_mid]
        assert avg.values[i_b] > avg.values[i_mid]

    def test_grid_mismatch_raises(self):
        d1 = sample_density(np.array([0.0, 1.0]), grid=np.linspace(-1, 2, 64))
        d2 = sample_density(np.array([0.0, 1.0]), grid=np.linspace(-1, 2, 65))
        with pytest.raises(GridMismatchError):
            average_density([d1, d2])

    def test_fifty_er_densities_approach_semicircle(self):
        # the residual concentrates at the bulk edge, where the finite-n
        # mean density genuinely departs from the asymptotic closed form
        spectra = [spectrum(generate_er(500, 0.5, seed=s)) for s in range(50)]
        grid = shared_grid([s.values for s in spectra])
        parts = [estimate_density(s, grid=grid) for s in spectra]
        avg = average_density(parts)
        closed = semicircle_density(0.5, grid)
        assert np.max(np.abs(avg.values - closed)) < 0.085


class TestSemicircleLaw:
    def test_mean_l1_distance_over_20_seeds(self):
        spectra = [spectrum(generate_er(500, 0.5, seed=100 + s)) for s in range(20)]
        grid = shared_grid([s.values for s in spectra])
        closed = semicircle_density(0.5, grid)
        l1s = []
        for s in spectra:
            d = estimate_density(s, grid=grid)
            l1s.append(np.trapezoid(np.abs(d.values - closed), grid))
        assert np.mean(l1s) < 0.1

    def test_closed_form_is_normalized(self):
        grid = np.linspace(-1.5, 1.5, 4096)
        vals = semicircle_density(0.5, grid)
        assert np.trapezoid(vals, grid) == pytest.approx(1.0, abs=1e-4)

    def test_domain(self):
        with pytest.raises(DomainError):
            semicircle_density(0.0, np.linspace(-1, 1, 8))


class TestSerialization:
    def test_density_csv_round_trip(self, tmp_path):
        d = estimate_density(spectrum(generate_er(40, 0.3, seed=2)))
        path = tmp_path / "d.csv"
        density_to_csv(d, path)
        back = density_from_csv(path, bandwidth=d.bandwidth)
        assert np.array_equal(back.grid, d.grid)
        assert np.array_equal(back.values, d.values)
        assert path.read_text().splitlines()[0] == "lambda,density"

    def test_spectrum_file_round_trip(self, tmp_path):
        s = spectrum(generate_er(30, 0.5, seed=9))
        path = tmp_path / "s.txt"
        spectrum_to_file(s, path)
        back = spectrum_from_file(path)
        assert back.n == s.n
        assert np.allclose(back.values, s.values, atol=1e-15)


class TestSpectralDensityInvariants:
    def test_rejects_unnormalized(self):
        grid = np.linspace(0, 1, 16)
        with pytest.raises(DomainError):
            SpectralDensity(grid, np.full(16, 2.0), 0.1)

    def test_rejects_negative_values(self):
        grid = np.linspace(0, 1, 16)
        vals = np.full(16, 1.0)
        vals[3] = -0.5
        vals[4] = 2.5
        with pytest.raises(DomainError):
            SpectralDensity(grid, vals, 0.1)

    def test_rejects_nonuniform_grid(self):
        grid = np.array([0.0, 0.1, 0.3, 0.4])
        with pytest.raises(DomainError):
            SpectralDensity(grid, np.full(4, 2.5), 0.1)
