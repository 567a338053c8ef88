import math
from fractions import Fraction

import pytest

from anires import (
    QuadratureSpec,
    imaginary_part_terms,
    integrate_semiline,
    large_order_estimate,
    large_order_estimate_delta,
    legendre_scaled,
    model_large_order_params,
    strong_coupling_kappa,
    z_coeff,
    z_coeff_delta,
    z_coeff_delta_scaled,
    z_reference,
)

TIGHT = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12, max_refinements=12)


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def gaussian_moment_z_kn(k: int, n: int) -> Fraction:
    """Oracle for Z_kn from Gaussian moments <x^{2a} y^{2b}> = (2a-1)!!(2b-1)!!.

    Z_kn = (-1/4)^k / k! * C(k,n) (-2)^n < (x^4+2x^2y^2+y^4)^{k-n} (x^2y^2)^n >.
    The quartic power is expanded multinomially; feasible for small k.
    """
    m = k - n
    total = Fraction(0)
    # (A + B + C)^m with A=x^4, B=2x^2y^2, C=y^4: iterate exponents (a,b,c)
    for a in range(m + 1):
        for b in range(m - a + 1):
            c = m - a - b
            mult = (
                math.factorial(m)
                // (math.factorial(a) * math.factorial(b) * math.factorial(c))
            ) * 2**b
            # x exponent: 4a + 2b + 2n ; y exponent: 4c + 2b + 2n
            ex = 2 * a + b + n
            ey = 2 * c + b + n
            total += mult * double_factorial(2 * ex - 1) * double_factorial(2 * ey - 1)
    return Fraction(-1, 4) ** k / math.factorial(k) * math.comb(k, n) * Fraction(-2) ** n * total


class TestZCoeff:
    def test_normalization(self):
        assert z_coeff(0, 0) == 1

    def test_z11_moment_oracle(self):
        assert z_coeff(1, 1) == gaussian_moment_z_kn(1, 1) == Fraction(1, 2)

    def test_z22_moment_oracle(self):
        assert z_coeff(2, 2) == gaussian_moment_z_kn(2, 2) == Fraction(9, 8)

    def test_moment_oracle_through_k4(self):
        for k in range(5):
            for n in range(k + 1):
                assert z_coeff(k, n) == gaussian_moment_z_kn(k, n), (k, n)

    def test_zero_below_diagonal(self):
        assert z_coeff(1, 2) == 0

    def test_negative_raises(self):
        with pytest.raises(ValueError):
            z_coeff(-1, 0)


class TestZCoeffDelta:
    def test_k1_polynomial(self):
        # -2 + d/2
        d = Fraction(3, 7)
        assert z_coeff_delta(1, d) == -2 + d / 2

    def test_k2_polynomial(self):
        d = Fraction(-2, 5)
        assert z_coeff_delta(2, d) == 12 - 6 * d + Fraction(9, 8) * d * d

    def test_isotropic_closed_form(self):
        for k in range(8):
            assert z_coeff_delta(k, 0) == Fraction(
                (-1) ** k * math.factorial(2 * k), math.factorial(k)
            )

    def test_scaled_matches_exact(self):
        # Legendre closed form against the exact double sum, k <= 60
        for delta in (Fraction(-1), Fraction(-1, 2), Fraction(1, 2), Fraction(1)):
            for k in (1, 2, 5, 17, 40, 60):
                exact = z_coeff_delta(k, delta)
                sv = z_coeff_delta_scaled(k, float(delta))
                assert sv.sign == (1 if exact > 0 else -1)
                rel = abs(math.exp(sv.ln() - math.log(abs(exact.numerator)) +
                                   math.log(exact.denominator)) - 1.0)
                assert rel <= 1e-9, (delta, k)

    def test_scaled_matches_exact_crossover_regime(self):
        # the crossover scans run on this path at delta = 1e-2; pin it
        # against the exact rationals at the first few grid orders
        for k in (16, 32, 64):
            exact = z_coeff_delta(k, Fraction(1, 100))
            sv = z_coeff_delta_scaled(k, 0.01)
            rel = abs(math.exp(sv.ln() - math.log(abs(exact.numerator)) +
                               math.log(exact.denominator)) - 1.0)
            assert rel <= 1e-10, k

    @pytest.mark.parametrize("delta", [Fraction(-1), Fraction(-1, 2), Fraction(1, 2), Fraction(1)])
    def test_exact_polynomial_identity_even_k(self, delta):
        # for even k, P_k has only even powers, so the closed form
        # (2k)!/k! (1-d/2)^{k/2} P_k((4-d)/(2 sqrt(4-2d))) is rational in d;
        # standard Legendre coefficients serve as the independent oracle
        x2 = (4 - delta) ** 2 / (4 * (4 - 2 * delta))
        p4 = (35 * x2**2 - 30 * x2 + 3) / 8
        p6 = (231 * x2**3 - 315 * x2**2 + 105 * x2 - 5) / 16
        for k, pk in ((4, p4), (6, p6)):
            closed = (
                Fraction(math.factorial(2 * k), math.factorial(k))
                * (1 - delta / 2) ** (k // 2)
                * pk
            )
            assert z_coeff_delta(k, delta) == closed

    def test_legendre_polynomial_identity_even_k(self):
        # (1-d/2)^{k/2} P_k((4-d)/(2 sqrt(4-2d))) is rational for even k;
        # cross-check the full prefactor at d=1/2, k=4 via exact recurrence
        d = 0.5
        k = 4
        x = (4 - d) / (2 * math.sqrt(4 - 2 * d))
        val = (
            math.factorial(2 * k)
            / math.factorial(k)
            * (1 - d / 2) ** (k / 2)
            * legendre_scaled(k, x).to_float()
        )
        assert val == pytest.approx(float(z_coeff_delta(4, Fraction(1, 2))), rel=1e-12)


class TestZReference:
    def test_small_g_limit(self):
        assert z_reference(1e-8, 0.7, TIGHT) == pytest.approx(1.0, abs=1e-6)

    def test_isotropic_value(self):
        # independent refinement oracle value for int e^{-r-r^2}
        assert z_reference(1.0, 0.0, TIGHT) == pytest.approx(0.5456413607650471, rel=1e-11)

    def test_alternating_series_bracket(self):
        # partial sums of the divergent series bracket the value termwise
        g, d = 0.05, Fraction(1, 2)
        partial = []
        acc = Fraction(0)
        for k in range(7):
            acc += z_coeff_delta(k, d) * Fraction(1, 20) ** k
            partial.append(acc)
        z = z_reference(g, float(d), TIGHT)
        for s0, s1 in zip(partial, partial[1:]):
            lo, hi = sorted((float(s0), float(s1)))
            assert lo <= z <= hi

    def test_bracket_at_g_one(self):
        z = z_reference(1.0, 0.5, TIGHT)
        s0 = 1.0
        s1 = 1.0 + float(z_coeff_delta(1, Fraction(1, 2)))
        assert s1 <= z <= s0

    def test_monotone_decreasing_in_g(self):
        for d in (-1.0, 0.0, 1.0):
            vals = [z_reference(g, d, TIGHT) for g in (0.5, 1.0, 2.0, 4.0)]
            assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_negative_delta_unscaled_oracle(self):
        # same integral with a plain power-series I_0 and no exponent
        # rearrangement; safe here because the argument stays small
        g, d = 0.8, -1.0

        def raw(rho):
            expo = -rho - g * (1 - d / 4.0) * rho * rho
            if expo < -60.0:  # keep the Bessel argument small enough for 60 terms
                return 0.0
            z = abs(d) * g * rho * rho / 4.0
            i0 = sum((z / 2.0) ** (2 * m) / math.factorial(m) ** 2 for m in range(60))
            return math.exp(expo) * i0

        oracle = integrate_semiline(raw, TIGHT).value
        assert z_reference(g, d, TIGHT) == pytest.approx(oracle, rel=1e-10)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            z_reference(-1.0, 0.0)
        with pytest.raises(ValueError):
            z_reference(1.0, 2.0)


class TestStrongCoupling:
    def test_kappa_at_zero(self):
        res = strong_coupling_kappa(0.0, 10)
        assert res.value == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-15)

    def test_term_ratio_tends_to_half(self):
        # direct term recurrence oracle: t_n/t_{n-1} = d (2n-1)^2/(8 n^2) -> d/2
        term = math.sqrt(math.pi) / 2.0
        terms = [term]
        for n in range(1, 51):
            term *= (2 * n - 1) ** 2 / (8.0 * n * n)
            terms.append(term)
        r10, r50 = terms[10] / terms[9], terms[50] / terms[49]
        assert r50 == pytest.approx(0.5, abs=0.02)
        assert abs(r50 - 0.5) < abs(r10 - 0.5)
        # and the partial sums agree with the oracle accumulation
        assert strong_coupling_kappa(1.0, 51).value == pytest.approx(sum(terms), rel=1e-12)

    def test_divergence_warning(self):
        with pytest.warns(UserWarning):
            strong_coupling_kappa(2.0, 5)

    def test_remainder_estimate_bounds_tail(self):
        short = strong_coupling_kappa(1.0, 20)
        long = strong_coupling_kappa(1.0, 200)
        assert abs(long.value - short.value) <= 2.0 * short.remainder

    @pytest.mark.parametrize("delta", [-1.0, 0.0, 1.0])
    def test_consistency_with_reference_integral(self, delta):
        # g^{1/2} Z(g, d) -> kappa(d); within 1% at g = 1e4
        g = 1e4
        kappa = strong_coupling_kappa(delta, 100).value
        assert math.sqrt(g) * z_reference(g, delta, TIGHT) == pytest.approx(kappa, rel=0.01)

    def test_kappa_bound_at_g_1000(self):
        g = 1e3
        ratio = math.sqrt(g) * z_reference(g, 0.0, TIGHT) / strong_coupling_kappa(0.0, 100).value
        assert abs(ratio - 1.0) <= 0.05


class TestImaginaryPart:
    def test_n0_prefactor(self):
        t = imaginary_part_terms(0)[0]
        assert t.prefactor == pytest.approx(math.sqrt(math.pi), rel=1e-15)
        assert t.power == 0.5
        assert t.exponent_scale == 4.0

    def test_n1_prefactor(self):
        # Gamma(3/2)/(2 * 1!^2) = sqrt(pi)/4
        t = imaginary_part_terms(1)[1]
        assert t.prefactor == pytest.approx(math.sqrt(math.pi) / 4.0, rel=1e-15)
        assert t.power == 1.5

    def test_n2_prefactor(self):
        # Gamma(5/2)/(2^2 * 2!^2) = (3 sqrt(pi)/4)/16 = 3 sqrt(pi)/64
        t = imaginary_part_terms(2)[2]
        assert t.prefactor == pytest.approx(3.0 * math.sqrt(math.pi) / 64.0, rel=1e-15)
        assert t.power == 2.5

    def test_gamma_ratio_oracle(self):
        for n in range(8):
            expected = math.exp(math.lgamma(n + 0.5)) / (2**n * math.factorial(n) ** 2)
            assert imaginary_part_terms(n)[n].prefactor == pytest.approx(expected, rel=1e-13)

    def test_assembled_sign_and_decay(self):
        from anires import imaginary_part

        # Im Z < 0 on the cut, magnitude shrinking as |g| -> 0
        v1 = imaginary_part(0.10, 0.5, 6)
        v2 = imaginary_part(0.05, 0.5, 6)
        assert v1 < 0 and v2 < 0
        assert abs(v2) < abs(v1)


class TestLargeOrderEstimate:
    def test_dispersion_integral_matches_gamma_form(self):
        # numerically integrate the dispersion integral over the leading
        # imaginary part; must reproduce the gamma-form estimate to machine
        # precision (identical integral, done analytically vs numerically)
        for k, n in [(10, 0), (13, 1), (17, 2)]:
            term = imaginary_part_terms(n)[n]

            def integrand(u):  # u = |g|; Im Z^{(n)}(-u) / u^{k+1} up to signs
                return term.magnitude(u) / u ** (k + 1)

            val = integrate_semiline(integrand, TIGHT).value / math.pi
            est = large_order_estimate(k, n, form="gamma")
            assert val == pytest.approx(math.exp(est.ln()), rel=1e-9)

    def test_ratio_exact_to_estimate_n0(self):
        k = 100
        est = large_order_estimate(k, 0)
        exact = z_coeff(k, 0)
        ratio = math.exp(
            math.log(abs(exact.numerator)) - math.log(exact.denominator) - est.ln()
        )
        assert abs(ratio - 1.0) <= 0.01

    def test_ratio_n2_k200(self):
        k, n = 200, 2
        est = large_order_estimate(k, n)
        exact = z_coeff(k, n)
        ratio = math.exp(
            math.log(abs(exact.numerator)) - math.log(exact.denominator) - est.ln()
        )
        assert abs(ratio - 1.0) <= 0.03

    def test_signs(self):
        assert large_order_estimate(2, 1).sign == -1
        assert large_order_estimate(3, 1).sign == 1

    def test_delta_negative_growth_constant(self):
        # ratio test on exact Z_k(-1): growth constant 4 - 2d = 6
        k = 180
        r = z_coeff_delta(k + 1, -1) / z_coeff_delta(k, -1)
        growth = abs(r) / (k + 1)
        assert growth == pytest.approx(6.0, rel=0.02)
        est = large_order_estimate_delta(k, -1.0)
        exact = z_coeff_delta(k, -1)
        ratio = math.exp(
            math.log(abs(exact.numerator)) - math.log(exact.denominator) - est.ln()
        )
        assert abs(ratio - 1.0) <= 0.05

    def test_delta_positive_regime(self):
        k = 400
        est = large_order_estimate_delta(k, 1.0)
        exact = z_coeff_delta(k, 1)
        ratio = math.exp(
            math.log(abs(exact.numerator)) - math.log(exact.denominator) - est.ln()
        )
        assert abs(ratio - 1.0) <= 0.05

    def test_k_zero_raises(self):
        with pytest.raises(ValueError):
            large_order_estimate(0, 0)


def test_model_params_gamma_values():
    p = model_large_order_params(4)
    # gamma_0 = Gamma(1/2)/pi = 1/sqrt(pi)
    assert p.gamma[0] == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-14)
    assert p.gamma[1] == pytest.approx(-math.sqrt(math.pi) / (2 * math.pi * 2), rel=1e-12)
    assert p.b0_of_n(3) == Fraction(4)
    assert p.beta_of_n(3) == Fraction(5, 2)
