"""Numerical Mahler-measure evaluators: quadrature, Monte Carlo, the
eta-quotient parametrization and the Eisenstein-Kronecker series."""

import math

import mpmath as mp
import pytest

from k3mahler.mahler import (ToleranceNotReached, bertin_series,
                             bertin_series_for_k, eta, exact_tau_value,
                             fit_w_expansion, k_of_tau, mahler_mc,
                             mahler_quadrature, tau_of_k, w_of_tau)


class TestQuadrature:
    def test_plus_minus_symmetry(self, quad):
        for k in (3.0, 7.5):
            a = mahler_quadrature(k, tol=1e-9)
            b = mahler_quadrature(-k, tol=1e-9)
            assert abs(float(a.value) - float(b.value)) < 2e-9

    def test_monotone_for_large_k(self):
        vals = [float(mahler_quadrature(k, tol=1e-9).value)
                for k in (6, 7, 9, 12, 18, 30, 100)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_tolerance_error_carries_estimate(self):
        with pytest.raises(ToleranceNotReached) as exc:
            mahler_quadrature(3, tol=1e-15)
        err = exc.value
        assert 0.8 < err.estimate < 0.9      # best estimate is still sane
        assert err.achieved > err.requested

    def test_invalid_tol(self):
        with pytest.raises(ValueError):
            mahler_quadrature(3, tol=0.0)


class TestMonteCarlo:
    def test_deterministic(self):
        a = mahler_mc(6, 10 ** 3, seed=123)
        b = mahler_mc(6, 10 ** 3, seed=123)
        assert a == b

    def test_seed_sensitivity(self):
        assert mahler_mc(6, 10 ** 4, seed=1) != mahler_mc(6, 10 ** 4, seed=2)

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            mahler_mc(6, 10, seed=0)

    def test_agreement_with_quadrature(self, quad):
        for k in (0, 6):
            est, se = mahler_mc(k, 10 ** 6, seed=20240 + k)
            assert abs(est - float(quad(k).value)) <= 4 * se

    def test_raw_torus_integrand(self, quad):
        est, se = mahler_mc(6, 2 * 10 ** 5, seed=5, integrand="torus3")
        assert abs(est - float(quad(6).value)) <= 4 * se


class TestEta:
    def test_large_im_one_term(self):
        v = eta(10j, prec=120)
        with mp.workprec(140):
            ref = mp.exp(-10 * mp.pi / 12) * (1 - mp.exp(-20 * mp.pi))
            assert abs(v - ref) < mp.mpf(10) ** -25

    def test_shift_identity(self):
        with mp.workprec(140):
            for tau in (mp.mpc(0.31, 0.87), mp.mpc(-0.4, 0.55), mp.mpc(0, 1.9)):
                lhs = eta(tau + 1, 120)
                rhs = mp.exp(1j * mp.pi / 12) * eta(tau, 120)
                assert abs(lhs - rhs) < mp.mpf(2) ** -110

    def test_truncation_doubling(self):
        with mp.workprec(140):
            tau = mp.mpc(0.2, 0.8)
            n = int((120 + 24) * math.log(2) / (2 * math.pi * 0.8)) + 4
            a = eta(tau, 120, n_terms=n)
            b = eta(tau, 120, n_terms=2 * n)
            assert abs(a - b) < mp.mpf(2) ** -120

    def test_domain_error(self):
        with pytest.raises(ValueError):
            eta(mp.mpc(0.5, -1.0), 64)


class TestModularParametrization:
    def test_q_expansion_coefficients(self):
        coeffs = fit_w_expansion(6, prec=220)
        for got, want in zip(coeffs[:4], (1, -6, 15, -20)):
            assert abs(got - want) < 1e-10

    def test_k_of_tau_table(self):
        with mp.workprec(140):
            for k in (3, 6, 18):
                tau = exact_tau_value(k, 128)
                assert abs(k_of_tau(tau, 128) - k) < mp.mpf(2) ** -120

    def test_tau_of_k_tabulated(self):
        cm = tau_of_k(6, prec=128)
        assert cm.source == "table"
        with mp.workprec(140):
            assert abs(cm.tau - 1j / mp.sqrt(6)) < mp.mpf(2) ** -125

    def test_tau_of_k_numeric(self):
        prec = 80
        cm = tau_of_k(100, prec=prec)
        assert cm.source == "numeric-inversion"
        with mp.workprec(prec + 40):
            w = w_of_tau(cm.tau, prec + 16)
            target = (mp.mpf(100) - mp.sqrt(mp.mpf(100) ** 2 - 4)) / 2
            assert abs(w - target) < mp.mpf(2) ** -(prec - 8)

    def test_tau_of_k_out_of_range(self):
        with pytest.raises(ValueError):
            tau_of_k(3.5, prec=64)


class TestBertinSeries:
    def test_matches_quadrature(self, quad):
        for k in (3, 6, 18):
            b = bertin_series_for_k(k)
            assert abs(float(b.value) - float(quad(k).value)) < 1e-4

    def test_matches_quadrature_at_inverted_point(self, quad):
        # end-to-end: numeric inversion of the modular parametrization feeds
        # the lattice sums, which must land on the quadrature value
        cm = tau_of_k(100, prec=80)
        b = bertin_series(cm.tau, box=256)
        assert abs(float(b.value) - float(quad(100, 1e-9).value)) < 1e-7

    def test_box_doubling_within_estimate(self):
        tau = exact_tau_value(6, 64)
        a = bertin_series(tau, box=128)
        b = bertin_series(tau, box=256)
        assert abs(float(a.value) - float(b.value)) <= float(a.error_bound)

    def test_box_floor(self):
        with pytest.raises(ValueError):
            bertin_series(1j, box=8)

    def test_requires_upper_half_plane(self):
        with pytest.raises(ValueError):
            bertin_series(-0.5j, box=64)
