"""Model layer: couplings, weight polynomial, effective energies, fields.

The closed forms used as references are the explicit low-spin expressions
for the weight polynomial, the leading (beta^0) energy and field, the
s = 1 first-order correction, and the s = 1 exact log-form pair; each is
written out literally here, independent of the code paths under test.
"""

import math

import numpy as np
import pytest

from qparamag import series
from qparamag.constants import K_B, MU_B
from qparamag.model import (FieldKind, FieldModel, ModelParams, SphereCoordinate,
                            SpinNumber, classical_field, coefficients,
                            exact_effective_energy, exact_log_field,
                            effective_field, high_temp_energy_coefficients,
                            high_temp_field_coefficients, stereographic,
                            validity_scale, weight_polynomial)

G = 2.0
UNIT = G * MU_B * 1.0  # g mu_B mu0_H at 1 T, joules


def params_rel(k_rel=0.0, lam_rel=0.0, mu0_H=1.0, g=G):
    unit = g * MU_B * mu0_H
    return ModelParams(g=g, mu0_H=mu0_H, K=k_rel * unit, lambda_sigma=lam_rel * unit)


# -- couplings ---------------------------------------------------------------

class TestCoefficients:
    def test_zeeman_only(self):
        pr = coefficients(g=2.0, mu0_H=1.0, K=0.0, lambda_sigma=0.0)
        # A1 = g mu_B mu0_H with CODATA mu_B.
        assert pr.A1 == pytest.approx(1.85480201566e-23, rel=1e-11)
        assert pr.A0 == 0.0 and pr.A2 == 0.0

    def test_k_equals_lambda_sigma_cancels(self):
        pr = coefficients(g=1.7, mu0_H=0.3, K=4.2e-23, lambda_sigma=4.2e-23)
        assert pr.A2 == 0.0
        assert pr.A0 == 4.2e-23

    def test_all_zero(self):
        pr = coefficients(g=2.0, mu0_H=0.0, K=0.0, lambda_sigma=0.0)
        assert pr.A0 == pr.A1 == pr.A2 == 0.0

    def test_rejects_nonpositive_g(self):
        with pytest.raises(ValueError, match="g must be positive"):
            coefficients(g=0.0, mu0_H=1.0, K=0.0, lambda_sigma=0.0)

    def test_derived_values_follow_inputs(self):
        pr = ModelParams(g=2.0, mu0_H=2.0, K=3e-23, lambda_sigma=1e-23)
        assert pr.A0 == 1e-23
        assert pr.A1 == pytest.approx(2 * MU_B * 2.0)
        assert pr.A2 == pytest.approx(2e-23)


class TestSpinNumber:
    def test_valid(self):
        assert SpinNumber(1).s == 0.5
        assert SpinNumber.from_s(1.5).two_s == 3

    def test_invalid(self):
        with pytest.raises(ValueError):
            SpinNumber(0)
        with pytest.raises(ValueError):
            SpinNumber.from_s(0.3)


class TestStereographic:
    def test_north_pole(self):
        assert stereographic(1.0) == 0.0

    def test_equator(self):
        assert stereographic(0.0) == 1.0

    def test_direct_substitution(self):
        assert stereographic(1.0 / 3.0) == pytest.approx(0.5, rel=1e-15)

    def test_rejects_south_pole_and_out_of_range(self):
        with pytest.raises(ValueError, match="pole"):
            stereographic(-1.0)
        with pytest.raises(ValueError, match=r"\[-1, 1\]"):
            stereographic(1.2)

    def test_sphere_coordinate(self):
        sc = SphereCoordinate.from_vector((0.6, 0.0, 0.8))
        assert sc.zsq == pytest.approx((1 - 0.8) / (1 + 0.8))
        with pytest.raises(ValueError, match=r"\|u\| must be 1"):
            SphereCoordinate.from_vector((0.6, 0.0, 0.9))


# -- weight polynomial --------------------------------------------------------

class TestWeightPolynomial:
    def test_two_s_1(self):
        pr = params_rel(-2.0)
        beta = 1.0 / (K_B * 1.7)
        for zsq in (0.0, 0.4, 2.5):
            ref = zsq * math.exp(-pr.A1 * beta) + 1.0
            got = weight_polynomial(SpinNumber(1), pr, beta, zsq)
            assert got == pytest.approx(ref, rel=1e-14)

    def test_two_s_2(self):
        pr = params_rel(1.3, 0.4)
        beta = 1.0 / (K_B * 0.9)
        for zsq in (0.1, 1.0, 3.0):
            ref = (zsq**2 * math.exp(-2 * pr.A1 * beta)
                   + 2 * zsq * math.exp(-pr.A1 * beta - pr.A2 * beta) + 1.0)
            got = weight_polynomial(SpinNumber(2), pr, beta, zsq)
            assert got == pytest.approx(ref, rel=1e-14)

    def test_two_s_3(self):
        pr = params_rel(-0.7, 0.2)
        beta = 1.0 / (K_B * 2.3)
        zsq = 0.8
        ref = (zsq**3 * math.exp(-3 * pr.A1 * beta)
               + 3 * zsq**2 * math.exp(-2 * pr.A1 * beta - 2 * pr.A2 * beta)
               + 3 * zsq * math.exp(-pr.A1 * beta - 2 * pr.A2 * beta) + 1.0)
        got = weight_polynomial(SpinNumber(3), pr, beta, zsq)
        assert got == pytest.approx(ref, rel=1e-14)

    def test_two_s_4(self):
        pr = params_rel(0.5, -0.1)
        beta = 1.0 / (K_B * 1.1)
        zsq = 1.4
        ref = (zsq**4 * math.exp(-4 * pr.A1 * beta)
               + 4 * zsq**3 * math.exp(-3 * pr.A1 * beta - 3 * pr.A2 * beta)
               + 6 * zsq**2 * math.exp(-2 * pr.A1 * beta - 4 * pr.A2 * beta)
               + 4 * zsq * math.exp(-pr.A1 * beta - 3 * pr.A2 * beta) + 1.0)
        got = weight_polynomial(SpinNumber(4), pr, beta, zsq)
        assert got == pytest.approx(ref, rel=1e-14)

    def test_beta_zero_binomial(self):
        pr = params_rel(2.0)
        for two_s in (1, 2, 3, 4, 7):
            for zsq in (0.0, 0.6, 2.0):
                got = weight_polynomial(SpinNumber(two_s), pr, 0.0, zsq)
                assert got == pytest.approx((1 + zsq)**two_s, rel=1e-14)

    def test_preconditions(self):
        pr = params_rel()
        with pytest.raises(ValueError):
            weight_polynomial(SpinNumber(1), pr, -1.0, 0.5)
        with pytest.raises(ValueError):
            weight_polynomial(SpinNumber(1), pr, 1.0, -0.5)


# -- exact (log-form) energy ---------------------------------------------------

class TestExactEnergy:
    def test_pure_zeeman_reduction(self):
        # A2 = 0: the binomial form collapses the level sum to
        # -(2s/beta) ln[(1 + zsq e^(-beta A1)) / (1 + zsq)].
        pr = params_rel(0.7, 0.7)  # K = lambda sigma so A2 = 0
        assert pr.A2 == 0.0
        beta = 1.0 / (K_B * 0.8)
        for two_s in (1, 2, 3, 5):
            for uz in (-0.95, -0.2, 0.4, 0.99):
                zsq = stereographic(uz)
                ref = -(two_s / beta) * math.log(
                    (1 + zsq * math.exp(-beta * pr.A1)) / (1 + zsq))
                got = exact_effective_energy(SpinNumber(two_s), pr, beta, uz)
                assert got == pytest.approx(ref, rel=1e-12)

    def test_beta_to_zero_approaches_leading_coefficient(self):
        pr = params_rel(-2.0)
        beta = 1e-8 / (K_B * 300.0)
        for two_s in (1, 2, 3, 4):
            sp = SpinNumber(two_s)
            for uz in (-0.9, 0.0, 0.7):
                h0 = (pr.A1 * sp.s * (1 - uz)
                      + pr.A2 * sp.s * (two_s - 1) / 2 * (1 - uz * uz))
                got = exact_effective_energy(sp, pr, beta, uz)
                assert got == pytest.approx(h0, rel=1e-4)

    def test_s1_closed_form(self):
        # 2A1 + A2 + (1/beta) log(4 / D) with
        # D = (u-1)^2 e^(A2 b) - 2(u-1)(u+1) e^(A1 b) + (u+1)^2 e^((2A1+A2) b).
        pr = params_rel(-2.0)
        a1, a2 = pr.A1, pr.A2
        rng = np.random.default_rng(21)
        for _ in range(40):
            beta = 1.0 / (K_B * rng.uniform(0.3, 30.0))
            u = rng.uniform(-0.999, 0.999)
            d = ((u - 1)**2 * math.exp(a2 * beta)
                 - 2 * (u - 1) * (u + 1) * math.exp(a1 * beta)
                 + (u + 1)**2 * math.exp(beta * (2 * a1 + a2)))
            ref = 2 * a1 + a2 + math.log(4.0 / d) / beta
            got = exact_effective_energy(SpinNumber(2), pr, beta, u)
            assert got == pytest.approx(ref, rel=1e-12)

    def test_poles_are_finite(self):
        pr = params_rel(-2.0)
        beta = 1.0 / (K_B * 0.5)
        for two_s in (1, 2, 3):
            sp = SpinNumber(two_s)
            # North pole: reference state, zero energy offset.
            assert exact_effective_energy(sp, pr, beta, 1.0) == pytest.approx(0.0, abs=1e-30)
            # South pole: exactly 2 s A1 at any beta.
            assert exact_effective_energy(sp, pr, beta, -1.0) == pytest.approx(
                2 * sp.s * pr.A1, rel=1e-12)

    def test_requires_positive_beta(self):
        with pytest.raises(ValueError, match="beta"):
            exact_effective_energy(SpinNumber(1), params_rel(), 0.0, 0.3)


# -- high-temperature coefficients ---------------------------------------------

class TestHighTempEnergy:
    def test_leading_coefficient_closed_form(self):
        rng = np.random.default_rng(4)
        for two_s in (1, 2, 3, 4):
            sp = SpinNumber(two_s)
            for _ in range(25):
                pr = params_rel(rng.uniform(-3, 3), rng.uniform(-1, 1))
                u = rng.uniform(-1, 1)
                h = high_temp_energy_coefficients(sp, pr, 2, u)
                ref = (pr.A1 * sp.s * (1 - u)
                       + pr.A2 * sp.s * (two_s - 1) / 2 * (1 - u * u))
                assert h[0] == pytest.approx(ref, abs=1e-10 * UNIT)

    def test_s1_first_correction(self):
        rng = np.random.default_rng(5)
        sp = SpinNumber(2)
        for _ in range(25):
            pr = params_rel(rng.uniform(-3, 3))
            a1, a2 = pr.A1, pr.A2
            u = rng.uniform(-1, 1)
            h = high_temp_energy_coefficients(sp, pr, 1, u)
            ref = (2 * a1**2 * u**2 - 2 * a1**2 + 4 * a1 * a2 * u**3
                   - 4 * a1 * a2 * u + a2**2 * u**4 - a2**2) / 8.0
            assert h[1] == pytest.approx(ref, abs=1e-10 * UNIT**2)

    def test_half_spin_insensitive_to_anisotropy(self):
        # For 2s = 1 the anisotropy exponent cancels level by level, so
        # every correction order matches its A2 = 0 value.
        sp = SpinNumber(1)
        u = np.linspace(-0.9, 0.9, 7)
        base = high_temp_energy_coefficients(sp, params_rel(0.0), 4, u)
        skew = high_temp_energy_coefficients(sp, params_rel(2.7), 4, u)
        np.testing.assert_allclose(skew, base, atol=1e-12 * UNIT)

    def test_zeeman_matches_binomial_route(self):
        # Independent route for A2 = 0: expand the closed binomial form
        # -(2s/beta) ln[(1 + zsq e^(-A1 beta)) / (1 + zsq)] with the series
        # kernel directly.
        pr = params_rel(0.0)
        order = 5
        for two_s in (1, 2, 3, 4):
            sp = SpinNumber(two_s)
            for uz in (-0.6, 0.0, 0.5, 0.9):
                zsq = stereographic(uz)
                inner = series.exp(
                    series.TruncatedSeries([0.0, -pr.A1] + [0.0] * order),
                    scale=zsq / (1 + zsq))
                inner.coeffs[0] += 1.0 / (1 + zsq)
                closed = -two_s * series.divide_by_beta(series.log(inner))
                got = high_temp_energy_coefficients(sp, pr, order, uz)
                for j in range(order + 1):
                    assert got[j] == pytest.approx(closed.coeffs[j],
                                                   abs=1e-10 * UNIT**(j + 1))

    def test_truncation_residual_scaling(self):
        # exact - sum_{j<=N} beta^j H^(j) should shrink like beta^(N+1):
        # halving beta divides the residual by about 2^(N+1).
        rng = np.random.default_rng(6)
        n = 2
        for two_s in (1, 2, 4, 6, 8):
            sp = SpinNumber(two_s)
            pr = params_rel(rng.uniform(-1.5, 1.5))
            scale = max(abs(pr.A1), abs(pr.A2)) * two_s
            beta = 0.08 / scale
            u = rng.uniform(-0.8, 0.8)
            h = high_temp_energy_coefficients(sp, pr, n, u)

            def residual(b):
                approx = sum(b**j * h[j] for j in range(n + 1))
                return exact_effective_energy(sp, pr, b, u) - approx

            ratio = residual(beta) / residual(beta / 2)
            assert ratio == pytest.approx(2.0**(n + 1), rel=0.2)


# -- effective fields -----------------------------------------------------------

class TestFields:
    def test_classical_limit_formula(self):
        rng = np.random.default_rng(9)
        for two_s in (1, 2, 3, 4, 5):
            sp = SpinNumber(two_s)
            pr = params_rel(rng.uniform(-2, 2), rng.uniform(-1, 1))
            fm = FieldModel.classical_limit(sp, pr)
            for u in np.linspace(-1, 1, 9):
                ref = (pr.A1 + (two_s - 1) * pr.A2 * u) / (G * MU_B)
                assert fm.field(0.0, u) == pytest.approx(ref, rel=1e-12)

    def test_s1_first_order_field(self):
        rng = np.random.default_rng(10)
        sp = SpinNumber(2)
        for _ in range(25):
            pr = params_rel(rng.uniform(-3, 3))
            a1, a2 = pr.A1, pr.A2
            u = rng.uniform(-1, 1)
            b = high_temp_field_coefficients(sp, pr, 1, u)
            ref0 = (a1 + a2 * u) / (G * MU_B)
            ref1 = (-a1**2 * u - 3 * a1 * a2 * u**2 + a1 * a2
                    - a2**2 * u**3) / (2 * G * MU_B)
            assert b[0] == pytest.approx(ref0, abs=1e-10 * UNIT / MU_B)
            assert b[1] == pytest.approx(ref1, abs=1e-10 * UNIT**2 / MU_B)

    def test_exact_log_field_s1_closed_form(self):
        pr = params_rel(-2.0)
        a1, a2 = pr.A1, pr.A2
        rng = np.random.default_rng(11)
        for _ in range(60):
            beta = 1.0 / (K_B * rng.uniform(0.2, 40.0))
            u = rng.uniform(-0.99, 0.99)
            d = ((u - 1)**2 * math.exp(a2 * beta)
                 - 2 * (u - 1) * (u + 1) * math.exp(a1 * beta)
                 + (u + 1)**2 * math.exp(beta * (2 * a1 + a2)))
            ref = 2 * ((1 - u) * math.exp(a1 * beta)
                       + (u - 1) * math.exp(a2 * beta)
                       - (u + 1) * math.exp(a1 * beta)
                       + (u + 1) * math.exp(beta * (2 * a1 + a2))) \
                / (MU_B * beta * G * d)
            got = exact_log_field(SpinNumber(2), pr, beta, u)
            assert got == pytest.approx(ref, rel=1e-10)

    def test_high_t_field_matches_central_differences(self):
        pr = params_rel(-1.2, 0.3)
        h = 1e-5
        for two_s, order in ((1, 1), (2, 2), (4, 3)):
            sp = SpinNumber(two_s)
            fm = FieldModel.high_t(sp, pr, order)
            beta = 1.0 / (K_B * 3.0)
            for u in np.linspace(-0.95, 0.95, 11):
                e_hi = sum(beta**j * c for j, c in enumerate(
                    high_temp_energy_coefficients(sp, pr, order, u + h)))
                e_lo = sum(beta**j * c for j, c in enumerate(
                    high_temp_energy_coefficients(sp, pr, order, u - h)))
                ref = -(e_hi - e_lo) / (2 * h) / (G * MU_B * sp.s)
                got = fm.field(beta, u)
                assert got == pytest.approx(ref, rel=1e-6, abs=1e-9 * abs(ref) + 1e-12)

    def test_exact_field_matches_central_differences(self):
        pr = params_rel(-2.0, 0.1)
        h = 1e-5
        for two_s in (1, 2, 3):
            sp = SpinNumber(two_s)
            beta = 1.0 / (K_B * 0.9)
            for u in np.linspace(-0.99, 0.99, 11):
                ref = -(exact_effective_energy(sp, pr, beta, u + h)
                        - exact_effective_energy(sp, pr, beta, u - h)) \
                    / (2 * h) / (G * MU_B * sp.s)
                got = exact_log_field(sp, pr, beta, u)
                assert got == pytest.approx(ref, rel=1e-6)

    def test_field_model_tables_match_direct_evaluation(self):
        from numpy.polynomial import polynomial as P
        from numpy.polynomial import chebyshev as C
        pr = params_rel(-2.0)
        sp = SpinNumber(2)
        beta = 1.0 / (K_B * 1.3)
        exact = FieldModel.exact_log(sp, pr)
        tb = exact.table(beta)
        for u in (-0.9, -0.1, 0.6):
            direct = exact_log_field(sp, pr, beta, u)
            via = tb.scale * P.polyval(u, tb.num) / P.polyval(u, tb.den)
            assert via == pytest.approx(direct, rel=1e-12)
        hight = FieldModel.high_t(sp, pr, 2)
        tb2 = hight.table(beta)
        for u in (-0.8, 0.3, 0.95):
            direct = sum(beta**j * c for j, c in enumerate(
                high_temp_field_coefficients(sp, pr, 2, u)))
            assert C.chebval(u, tb2.num) == pytest.approx(direct, rel=1e-10)
            assert hight.field(beta, u) == pytest.approx(direct, rel=1e-10)

    def test_effective_field_dispatch_and_validation(self):
        sp = SpinNumber(2)
        pr = params_rel(1.0)
        fm = FieldModel.exact_log(sp, pr)
        assert effective_field(fm, 1.0 / (K_B * 2.0), 0.2) == pytest.approx(
            exact_log_field(sp, pr, 1.0 / (K_B * 2.0), 0.2))
        with pytest.raises(ValueError, match="beta"):
            fm.field(0.0, 0.2)
        with pytest.raises(ValueError, match="u_z"):
            fm.field(1.0, 1.5)


class TestFieldModelConstruction:
    def test_from_name(self):
        sp, pr = SpinNumber(2), params_rel()
        assert FieldModel.from_name("classical", sp, pr).kind is FieldKind.CLASSICAL
        assert FieldModel.from_name("exact", sp, pr).kind is FieldKind.EXACT_LOG
        fm = FieldModel.from_name("hight:3", sp, pr)
        assert fm.kind is FieldKind.HIGH_T and fm.order == 3
        assert fm.label == "hight:3"

    def test_rejects_bad_names_and_orders(self):
        sp, pr = SpinNumber(2), params_rel()
        with pytest.raises(ValueError):
            FieldModel.from_name("hight:0", sp, pr)
        with pytest.raises(ValueError):
            FieldModel.from_name("hight", sp, pr)
        with pytest.raises(ValueError):
            FieldModel.from_name("magic", sp, pr)
        with pytest.raises(ValueError, match="N >= 1"):
            FieldModel.high_t(sp, pr, 0)


class TestValidityScale:
    def test_half_spin_zeeman(self):
        pr = params_rel(5.0, 5.0)  # A2 = 0 regardless of K when K = lambda
        t = validity_scale(SpinNumber(1), pr)
        assert t == pytest.approx(pr.A1 * 0.5 / K_B, rel=1e-12)
        assert t == pytest.approx(0.6717, abs=2e-4)

    def test_zero_couplings(self):
        pr = ModelParams(g=2.0)
        assert validity_scale(SpinNumber(4), pr) == 0.0

    def test_anisotropy_dominated_scaling(self):
        pr = params_rel(173.0)  # huge K so the anisotropy term dominates
        sp = SpinNumber(4)  # s = 2
        ref = abs(pr.A2) * sp.s * (sp.two_s - 1) / 2 / K_B
        assert validity_scale(sp, pr) == pytest.approx(ref, rel=1e-12)
