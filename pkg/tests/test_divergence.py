import math

import numpy as np
import pytest

from netspectra import (DomainError, GridMismatchError, SpectralDensity,
                        er_entropy_theoretical, estimate_density, generate_er,
                        js_divergence, kl_divergence, sample_density,
                        spectral_entropy, spectrum)
from netspectra.divergence import DivergenceValue

LN2 = math.log(2.0)


def tabulated_gaussian(mu, sigma, grid):
    vals = np.exp(-0.5 * ((grid - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
    vals /= np.trapezoid(vals, grid)
    return SpectralDensity(grid, vals, sigma)


def random_density(rng, grid):
    sample = rng.normal(loc=rng.uniform(-1, 1), scale=rng.uniform(0.3, 1.0),
                        size=60)
    return sample_density(sample, grid=grid)


class TestEntropy:
    def test_standard_normal_matches_analytic(self):
        grid = np.linspace(-10, 10, 4096)
        d = tabulated_gaussian(0.0, 1.0, grid)
        assert spectral_entropy(d) == pytest.approx(0.5 * math.log(2 * math.pi * math.e),
                                                    abs=1e-3)

    def test_grid_refinement_barely_moves_entropy(self):
        coarse = tabulated_gaussian(0.0, 1.0, np.linspace(-8, 8, 512))
        fine = tabulated_gaussian(0.0, 1.0, np.linspace(-8, 8, 1024))
        assert abs(spectral_entropy(coarse) - spectral_entropy(fine)) < 1e-4

    def test_narrow_density_entropy_is_negative(self):
        grid = np.linspace(-1, 1, 2048)
        d = tabulated_gaussian(0.0, 0.01, grid)
        assert spectral_entropy(d) < 0


class TestErEntropyClosedForm:
    def test_value_at_half(self):
        assert er_entropy_theoretical(0.5) == pytest.approx(math.log(math.pi) - 0.5)
        assert er_entropy_theoretical(0.5) == pytest.approx(0.644729, abs=1e-6)

    def test_symmetry(self):
        assert er_entropy_theoretical(0.3) == pytest.approx(er_entropy_theoretical(0.7))

    def test_maximum_at_half(self):
        ps = np.linspace(0.01, 0.99, 99)
        values = [er_entropy_theoretical(p) for p in ps]
        assert ps[int(np.argmax(values))] == pytest.approx(0.5)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.1])
    def test_domain_errors(self, p):
        with pytest.raises(DomainError):
            er_entropy_theoretical(p)

    def test_er_spectra_at_p_and_one_minus_p_have_equal_entropy(self):
        n, p, reps = 200, 0.3, 100
        h_lo = [spectral_entropy(estimate_density(spectrum(generate_er(n, p, seed=s))))
                for s in range(reps)]
        h_hi = [spectral_entropy(estimate_density(spectrum(generate_er(n, 1 - p, seed=1000 + s))))
                for s in range(reps)]
        assert abs(np.mean(h_lo) - np.mean(h_hi)) < 2e-2


class TestKl:
    def test_identical_densities_give_exact_zero(self):
        d = estimate_density(spectrum(generate_er(50, 0.4, seed=0)))
        assert kl_divergence(d, d) == 0.0

    def test_gaussian_closed_form(self):
        # KL(N(0,1) || N(0.5,1)) = (mu1-mu2)^2 / 2 = 0.125. The grid covers
        # both to six sigma; much wider and the support threshold would
        # (correctly) flag the far tail of the reference as empty.
        grid = np.linspace(-6.0, 6.5, 4096)
        d1 = tabulated_gaussian(0.0, 1.0, grid)
        d2 = tabulated_gaussian(0.5, 1.0, grid)
        assert kl_divergence(d1, d2) == pytest.approx(0.125, abs=1e-3)

    def test_support_violation_is_infinite(self):
        grid = np.linspace(-1, 4, 1024)
        b1 = sample_density(np.linspace(0, 1, 50), grid=grid)
        b2 = sample_density(np.linspace(2.5, 3.5, 50), grid=grid)
        assert kl_divergence(b1, b2) == math.inf

    def test_grid_mismatch(self):
        d1 = sample_density(np.array([0.0, 1.0]), grid=np.linspace(-1, 2, 64))
        d2 = sample_density(np.array([0.0, 1.0]), grid=np.linspace(-1, 2, 65))
        with pytest.raises(GridMismatchError):
            kl_divergence(d1, d2)

    def test_nonnegative_and_zero_iff_equal(self):
        rng = np.random.default_rng(11)
        grid = np.linspace(-5, 5, 512)
        for _ in range(25):
            d1 = random_density(rng, grid)
            d2 = random_density(rng, grid)
            v = kl_divergence(d1, d2)
            assert v >= 0.0
            if np.max(np.abs(d1.values - d2.values)) > 1e-12:
                assert v > 0.0


class TestJs:
    def test_identity(self):
        d = estimate_density(spectrum(generate_er(50, 0.4, seed=1)))
        assert js_divergence(d, d) == 0.0

    def test_symmetry_is_bitwise(self):
        rng = np.random.default_rng(5)
        grid = np.linspace(-5, 5, 512)
        for _ in range(20):
            d1 = random_density(rng, grid)
            d2 = random_density(rng, grid)
            assert js_divergence(d1, d2) == js_divergence(d2, d1)

    def test_disjoint_supports_reach_ln2(self):
        grid = np.linspace(-1, 4, 2048)
        b1 = sample_density(np.linspace(0, 0.5, 40), grid=grid)
        b2 = sample_density(np.linspace(3.0, 3.5, 40), grid=grid)
        assert js_divergence(b1, b2) == pytest.approx(LN2, abs=1e-6)

    def test_bounds_hold_on_random_pairs(self):
        rng = np.random.default_rng(7)
        grid = np.linspace(-5, 5, 512)
        for _ in range(30):
            v = js_divergence(random_density(rng, grid), random_density(rng, grid))
            assert 0.0 <= v <= LN2 + 1e-12

    def test_sqrt_js_triangle_inequality(self):
        rng = np.random.default_rng(13)
        grid = np.linspace(-5, 5, 512)
        for _ in range(30):
            a = random_density(rng, grid)
            b = random_density(rng, grid)
            c = random_density(rng, grid)
            ab = math.sqrt(js_divergence(a, b))
            bc = math.sqrt(js_divergence(b, c))
            ac = math.sqrt(js_divergence(a, c))
            assert ac <= ab + bc + 1e-9


class TestDivergenceValue:
    def test_serializes_infinity_as_string(self):
        assert DivergenceValue("kl", math.inf).to_dict() == {"kind": "kl",
                                                             "value": "inf"}
        assert DivergenceValue("entropy", -0.25).to_dict() == {"kind": "entropy",
                                                               "value": -0.25}
