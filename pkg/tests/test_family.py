import math

import numpy as np
import pytest

from powerparts.bigcount import PartitionKind, count_partitions
from powerparts.family import (SAMPLE_TAIL_EPS, FamilyPoint, TruncationError,
                               _h_deriv_poly, char_fn_normalized, family_point,
                               fulcrum, fulcrum_derivative,
                               fulcrum_derivative_at, mean, pgf_modulus_ratio,
                               pmf, sample, variance)

from _oracles import char_fn_from_table

U = PartitionKind.UNRESTRICTED
D = PartitionKind.DISTINCT


class TestFulcrum:
    def test_matches_direct_product_k1(self):
        direct = -math.fsum(math.log(1.0 - math.exp(-j)) for j in range(1, 61))
        assert math.isclose(fulcrum(U, 1, -1.0).real, direct, rel_tol=1e-12)

    def test_distinct_matches_direct_product(self):
        direct = math.fsum(math.log(1.0 + math.exp(-j)) for j in range(1, 61))
        assert math.isclose(fulcrum(D, 1, -1.0).real, direct, rel_tol=1e-12)

    @pytest.mark.parametrize("k", [1, 2, 3])
    @pytest.mark.parametrize("s", [0.5, 2.0])
    def test_real_axis_is_real(self, k, s):
        assert fulcrum(U, k, complex(-s)).imag == 0.0

    def test_reflection(self):
        z = complex(-0.3, 0.7)
        for kind in (U, D):
            assert fulcrum(kind, 2, z.conjugate()) == fulcrum(kind, 2, z).conjugate()

    def test_domain_error(self):
        with pytest.raises(ValueError):
            fulcrum(U, 1, 0.5)
        with pytest.raises(ValueError):
            fulcrum(U, 1, complex(0.0, 1.0))

    def test_truncation_failure_reports_bound(self):
        with pytest.raises(TruncationError) as exc:
            fulcrum(U, 1, complex(-1e-9), eps=1e-12)
        assert exc.value.achieved > exc.value.requested
        assert exc.value.terms >= 10**8

    def test_tail_certificate_is_a_bound(self):
        # the certified truncation really bounds what a longer sum adds
        from powerparts.family import _series_terms
        for k, s in ((1, 0.05), (2, 0.2)):
            tr = _series_terms(k, s, 1e-8)
            extra = math.fsum(
                -math.log(-math.expm1(-float(j) ** k * s))
                for j in range(tr.terms + 1, tr.terms + 5001))
            assert extra <= tr.tail_bound <= 1e-8

    def test_looser_eps_stays_within_its_bound(self):
        tight = fulcrum(U, 1, complex(-0.1), eps=1e-13).real
        loose = fulcrum(U, 1, complex(-0.1), eps=1e-6).real
        assert abs(tight - loose) <= 1e-6


class TestFulcrumDerivative:
    def test_first_derivative_formula(self):
        direct = math.fsum(j * math.exp(-j) / (1.0 - math.exp(-j))
                           for j in range(1, 61))
        assert math.isclose(fulcrum_derivative(U, 1, 1, 1.0), direct, rel_tol=1e-13)

    def test_second_derivative_formula(self):
        direct = math.fsum(j * j * math.exp(-j) / (1.0 - math.exp(-j)) ** 2
                           for j in range(1, 61))
        assert math.isclose(fulcrum_derivative(U, 1, 2, 1.0), direct, rel_tol=1e-13)

    @pytest.mark.parametrize("kind", [U, D])
    @pytest.mark.parametrize("k", [1, 2])
    def test_matches_finite_difference(self, kind, k):
        s, h = 0.5, 1e-6
        fd = (fulcrum(kind, k, complex(-(s - h))).real
              - fulcrum(kind, k, complex(-(s + h))).real) / (2.0 * h)
        assert math.isclose(fd, fulcrum_derivative(kind, k, 1, s), rel_tol=1e-6)

    def test_polynomial_coefficients(self):
        assert _h_deriv_poly(1) == (0, 1)
        assert _h_deriv_poly(2) == (0, 1, 1)
        assert _h_deriv_poly(3) == (0, 1, 3, 2)

    @pytest.mark.parametrize("m", [4, 5, 6])
    def test_higher_orders_consistent(self, m):
        # each order must be the derivative in -s of the one below it
        s, h = 0.7, 1e-4
        fd = (fulcrum_derivative(U, 1, m - 1, s - h)
              - fulcrum_derivative(U, 1, m - 1, s + h)) / (2.0 * h)
        assert math.isclose(fd, fulcrum_derivative(U, 1, m, s), rel_tol=1e-6)

    def test_order_cap(self):
        fulcrum_derivative(U, 1, 8, 0.5)
        with pytest.raises(ValueError):
            fulcrum_derivative(U, 1, 9, 0.5)
        with pytest.raises(ValueError):
            fulcrum_derivative(U, 1, 0, 0.5)

    @pytest.mark.parametrize("k", [1, 2])
    def test_domination_third_derivative(self, k):
        # complex-argument modulus never exceeds the real-axis value
        for s in (0.05, 0.3, 1.0):
            ref = fulcrum_derivative_at(U, k, 3, complex(-s)).real
            for theta in (-2.0, -0.5, 0.1, 1.3, 3.0):
                val = abs(fulcrum_derivative_at(U, k, 3, complex(-s, theta)))
                assert val <= ref * (1.0 + 1e-12)


class TestMeanVariance:
    def test_mean_large_s_single_term(self):
        assert math.isclose(mean(U, 1, 20.0), math.exp(-20.0), rel_tol=1e-7)

    def test_variance_is_t_dm_dt(self):
        s, h = 0.3, 1e-6
        fd = -(mean(U, 1, s + h) - mean(U, 1, s - h)) / (2.0 * h)
        assert math.isclose(variance(U, 1, s), fd, rel_tol=1e-5)

    def test_mean_asymptotic_head_k2(self):
        from powerparts.special import constants
        approx = constants(2).Omega * 0.01 ** -1.5
        assert abs(mean(U, 2, 0.01) / approx - 1.0) < 0.05

    @pytest.mark.parametrize("kind", [U, D])
    @pytest.mark.parametrize("k", [1, 2])
    def test_mean_strictly_decreasing(self, kind, k):
        grid = [0.5 * 2.0**-i for i in range(8)]
        vals = [mean(kind, k, s) for s in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))  # decreasing s, growing mean

    @pytest.mark.parametrize("kind", [U, D])
    def test_variance_positive(self, kind):
        for s in (0.01, 0.1, 1.0, 5.0):
            assert variance(kind, 2, s) > 0.0

    def test_moments_match_table(self, tables_2000):
        table = tables_2000[(U, 1)]
        pt = family_point(U, 1, 0.3)
        probs = [pmf(pt, n, table) for n in range(601)]
        m1 = math.fsum(n * p for n, p in enumerate(probs))
        assert math.isclose(m1, pt.mean, rel_tol=1e-6)


class TestCharFn:
    def test_at_origin(self):
        assert char_fn_normalized(U, 1, 0.1, 0.0) == 1.0 + 0.0j

    def test_modulus_bounded(self):
        for theta in (0.3, 1.0, 4.0, 11.0):
            assert abs(char_fn_normalized(U, 1, 0.08, theta)) <= 1.0 + 1e-12

    def test_modulus_equals_pgf_ratio(self):
        s, theta = 0.1, 1.7
        sigma = math.sqrt(variance(U, 1, s))
        lhs = abs(char_fn_normalized(U, 1, s, theta))
        rhs = pgf_modulus_ratio(U, 1, s, theta / sigma)
        assert math.isclose(lhs, rhs, rel_tol=1e-12)

    def test_against_pmf_sum(self):
        # direct summation over an exact table with support past mean + 20 sigma
        s = 0.05
        table = count_partitions(U, 1, 4096)
        expected = char_fn_from_table(table, s, 1.0)
        got = char_fn_normalized(U, 1, s, 1.0)
        assert abs(got - expected) < 1e-6


class TestPgfModulusRatio:
    def test_phi_zero(self):
        assert pgf_modulus_ratio(U, 1, 0.2, 0.0) == 1.0

    @pytest.mark.parametrize("k", [1, 2])
    def test_full_turn(self, k):
        assert math.isclose(pgf_modulus_ratio(U, k, 0.5, 2.0 * math.pi), 1.0,
                            rel_tol=1e-12)

    def test_in_unit_interval(self):
        for phi in (0.05, 0.3, 1.0, math.pi):
            v = pgf_modulus_ratio(U, 1, 0.1, phi)
            assert 0.0 < v < 1.0

    def test_bounded_by_inner_regime_fit(self, thresholds):
        d1 = thresholds["twl"]["1"]["d1_floor"]
        s, phi = 0.1, 0.05
        assert pgf_modulus_ratio(U, 1, s, phi) <= math.exp(-d1 * phi**2 * s**-3.0)


class TestPmf:
    def test_n_zero(self, tables_2000):
        pt = family_point(U, 1, 0.5)
        expected = math.exp(-fulcrum(U, 1, complex(-0.5)).real)
        assert math.isclose(pmf(pt, 0, tables_2000[(U, 1)]), expected, rel_tol=1e-12)

    def test_n_one_direct(self, tables_2000):
        pt = family_point(U, 1, 1.0)
        p1 = math.exp(-1.0) * math.exp(-fulcrum(U, 1, complex(-1.0)).real)
        assert math.isclose(pmf(pt, 1, tables_2000[(U, 1)]), p1, rel_tol=1e-12)

    def test_normalization(self, tables_2000):
        pt = family_point(U, 1, 0.3)  # mean ~16, sigma ~11; 15 sigma inside 2000
        total = math.fsum(pmf(pt, n, tables_2000[(U, 1)]) for n in range(2001))
        assert abs(total - 1.0) < 1e-9

    def test_zero_coefficient(self, tables_2000):
        pt = family_point(D, 2, 0.2)
        assert pmf(pt, 2, tables_2000[(D, 2)]) == 0.0

    def test_mismatch_rejected(self, tables_2000):
        pt = family_point(U, 1, 0.5)
        with pytest.raises(ValueError):
            pmf(pt, 1, tables_2000[(U, 2)])
        with pytest.raises(ValueError):
            pmf(pt, 5000, tables_2000[(U, 1)])


class TestSample:
    @pytest.mark.parametrize("kind,k,s", [(U, 1, 0.1), (U, 2, 0.05),
                                          (D, 1, 0.1), (D, 2, 0.05)])
    def test_moments(self, kind, k, s):
        pt = family_point(kind, k, s)
        draws = sample(pt, 100_000, seed=1234)
        se_mean = math.sqrt(pt.variance / draws.size)
        assert abs(draws.mean() - pt.mean) < 5.0 * se_mean
        # variance of the sample variance ~ (m4 - var^2)/n; use a loose z-test
        sample_var = draws.var()
        z4 = np.mean(((draws - pt.mean) / math.sqrt(pt.variance)) ** 4)
        se_var = pt.variance * math.sqrt(max(z4 - 1.0, 0.1) / draws.size)
        assert abs(sample_var - pt.variance) < 5.0 * se_var

    def test_empirical_pmf_at_zero(self, tables_2000):
        pt = family_point(U, 1, 0.5)
        p0 = pmf(pt, 0, tables_2000[(U, 1)])
        draws = sample(pt, 100_000, seed=99)
        emp = float(np.mean(draws == 0))
        se = math.sqrt(p0 * (1.0 - p0) / draws.size)
        assert abs(emp - p0) < 5.0 * se

    def test_deterministic(self):
        pt = family_point(D, 1, 0.2)
        a = sample(pt, 1000, seed=7)
        b = sample(pt, 1000, seed=7)
        assert np.array_equal(a, b)

    def test_nonnegative_integers(self):
        pt = family_point(U, 2, 0.3)
        draws = sample(pt, 5000, seed=3)
        assert draws.min() >= 0

    def test_count_validated(self):
        pt = family_point(U, 1, 0.5)
        with pytest.raises(ValueError):
            sample(pt, 0, seed=1)

    def test_tail_eps_constant(self):
        assert SAMPLE_TAIL_EPS == 1e-9


class TestFamilyPoint:
    def test_fields(self):
        pt = family_point(U, 2, 0.25, eps=1e-10)
        assert isinstance(pt, FamilyPoint)
        assert pt.tail_eps == 1e-10
        assert pt.variance > 0.0
        assert pt.mean > 0.0
