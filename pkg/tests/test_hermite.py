from fractions import Fraction
from math import factorial, gcd

import pytest
import sympy

from hyperline.errors import (PrecisionExhausted, RadiusViolation,
                              SearchExhausted, ZeroLeadingCoefficient, ZeroRoot)
from hyperline.hermite import (certificate_from_dict, cf_convergents,
                               combination_interval, e_interval, e_oracle,
                               elem_sym, eval_q_analytic, hermite_M,
                               hermite_eps, liouville_approx, liouville_partial,
                               nonvanish_certificate, pi_oracle, poly_expand_f,
                               verify_certificate)
from hyperline.intervals import Interval

F = Fraction

E_50 = F(sympy.Rational(sympy.E.evalf(50)))


def sympy_weight_poly(n, p, k=0):
    x = sympy.symbols("x")
    expr = x ** (p - 1)
    for j in range(1, n + 1):
        expr *= (x - j) ** p
    if k:
        expr = expr.subs(x, x + k)
    return sympy.Poly(sympy.expand(expr), x)


def sympy_hermite_M(n, p, k=0):
    poly = sympy_weight_poly(n, p, k)
    total = sum(c * sympy.factorial(e)
                for (e,), c in poly.terms())
    return int(total / sympy.factorial(p - 1))


class TestPolynomialExpansion:
    def test_n1_p3(self):
        poly = poly_expand_f(1, 3)
        assert poly.coefficients == {5: 1, 4: -3, 3: 3, 2: -1}

    def test_n1_p2(self):
        poly = poly_expand_f(1, 2)
        assert poly.coefficients == {3: 1, 2: -2, 1: 1}

    @pytest.mark.parametrize("n,p", [(1, 2), (1, 3), (2, 3), (3, 5), (2, 7)])
    def test_matches_symbolic_expansion(self, n, p):
        ours = poly_expand_f(n, p)
        oracle = sympy_weight_poly(n, p)
        for (e,), c in oracle.terms():
            assert ours.coeff(e) == int(c)
        assert ours.degree == oracle.degree()

    @pytest.mark.parametrize("n,p", [(1, 3), (2, 3), (3, 5), (4, 5)])
    def test_lowest_coefficient_law(self, n, p):
        poly = poly_expand_f(n, p)
        lowest = min(poly.coefficients)
        assert lowest == p - 1
        assert poly.coeff(lowest) == ((-1) ** n * factorial(n)) ** p


class TestElementarySymmetric:
    def test_single_root(self):
        assert elem_sym([F(1)], 1) == 1

    def test_two_roots(self):
        assert elem_sym([F(2), F(3)], 1) == F(5, 6)
        assert elem_sym([F(2), F(3)], 2) == F(1, 6)

    def test_zero_root_rejected(self):
        with pytest.raises(ZeroRoot):
            elem_sym([F(2), F(0)], 1)

    @pytest.mark.parametrize("roots", [(2, 3), (1, 2, 4), (-2, 3, 5, 7)])
    def test_sign_law_against_expanded_product(self, roots):
        # P(z) = prod (1 - z/z_i) has coefficient a_m = (-1)^m e_m
        z = sympy.symbols("z")
        poly = sympy.Poly(sympy.expand(
            sympy.prod([1 - z / r for r in roots])), z)
        for m in range(1, len(roots) + 1):
            a_m = F(sympy.Rational(poly.coeff_monomial(z ** m)))
            e_m = elem_sym([F(r) for r in roots], m)
            assert a_m == (-1) ** m * e_m


class TestHermiteIntegers:
    def test_frozen_values(self):
        assert hermite_M(1, 3, 0) == 32
        assert hermite_M(1, 3, 1) == 87

    @pytest.mark.parametrize("n,p,k", [(1, 3, 0), (1, 3, 1), (2, 3, 0),
                                       (2, 3, 1), (2, 3, 2), (1, 5, 1),
                                       (3, 5, 2)])
    def test_matches_symbolic_oracle(self, n, p, k):
        assert hermite_M(n, p, k) == sympy_hermite_M(n, p, k)

    def test_integral_oracle_small_case(self):
        # direct Gamma integration of the weight, the definition itself
        x = sympy.symbols("x")
        integral = sympy.integrate(
            x ** 2 * (x - 1) ** 3 * sympy.exp(-x), (x, 0, sympy.oo))
        assert int(integral / sympy.factorial(2)) == hermite_M(1, 3, 0)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 31])
    def test_divisibility_split(self, n, p):
        m0 = hermite_M(n, p, 0)
        assert m0 % p == ((-1) ** (n * p) * factorial(n) ** p) % p
        assert m0 % p != 0
        for k in range(1, n + 1):
            assert hermite_M(n, p, k) % p == 0


class TestEInterval:
    def test_width_contract(self):
        for tol in (F(1, 10 ** 3), F(1, 10 ** 9), F(1, 10 ** 30)):
            interval = e_interval(tol)
            assert interval.width <= tol
            assert interval.contains(E_50)

    def test_matches_reference_digits(self):
        interval = e_interval(F(1, 10 ** 3))
        assert F(2717, 1000) < interval.lo and interval.hi < F(2720, 1000)
        tight = e_interval(F(1, 10 ** 9))
        assert tight.contains(F(2718281828, 10 ** 9))


class TestHermiteEps:
    def test_eps_1_3_is_32e_minus_87(self):
        estimate = hermite_eps(1, 3, 1)
        exact = 32 * E_50 - 87
        assert estimate.interval.contains(exact)
        # the true value, derived by the oracle: -0.01498...
        assert F(-15, 1000) < estimate.interval.lo
        assert estimate.interval.hi < F(-14, 1000)

    def test_small_at_larger_prime(self):
        estimate = hermite_eps(1, 11, 1)
        assert estimate.interval.abs_hi() < F(1, 10 ** 4)

    @pytest.mark.parametrize("n,p,k", [(1, 3, 1), (2, 5, 1), (2, 5, 2),
                                       (3, 7, 2), (4, 11, 3)])
    def test_identity_and_closed_form_bound(self, n, p, k):
        estimate = hermite_eps(n, p, k)
        m0 = hermite_M(n, p, 0)
        digits = 60 + len(str(abs(m0)))  # oracle precision scaled to M_0
        e_ref = F(sympy.Rational(sympy.E.evalf(digits)))
        exact = e_ref ** k * m0 - hermite_M(n, p, k)
        assert estimate.interval.contains(exact)
        assert estimate.interval.abs_hi() <= estimate.bound

    def test_decay_along_primes(self):
        sizes = [hermite_eps(2, p, 1).interval.abs_hi()
                 for p in (5, 7, 11, 13, 17)]
        assert all(a > b for a, b in zip(sizes, sizes[1:]))


class TestCertificates:
    def test_three_minus_e(self):
        cert = nonvanish_certificate([F(3), F(-1)])
        assert cert.checks == {"m0_nondivisible": True, "mk_divisible": True,
                               "eps_half": True}
        true_value = abs(3 - E_50)
        assert cert.lower_bound <= true_value
        assert verify_certificate(cert)

    def test_hermite_pair(self):
        cert = nonvanish_certificate([F(-87), F(32)])
        assert cert.prime > 87
        true_value = abs(-87 + 32 * E_50)
        assert cert.lower_bound <= true_value
        assert verify_certificate(cert)

    def test_soundness_via_interval(self):
        cert = nonvanish_certificate([F(1, 2), F(1, 3), F(-1, 7)])
        value = combination_interval(cert.coefficients, F(1, 10 ** 60))
        assert value.abs_lo() >= cert.lower_bound

    def test_zero_inner_coefficient(self):
        cert = nonvanish_certificate([F(2), F(0), F(-1)])  # 2 - e^2 < 0
        assert verify_certificate(cert)
        value = combination_interval(cert.coefficients, F(1, 10 ** 40))
        assert value.hi < 0
        assert value.abs_lo() >= cert.lower_bound

    def test_rejects_zero_leading(self):
        with pytest.raises(ZeroLeadingCoefficient):
            nonvanish_certificate([F(0), F(1)])

    def test_rejects_short_input(self):
        with pytest.raises(ValueError):
            nonvanish_certificate([F(3)])

    def test_search_exhausted(self):
        with pytest.raises(SearchExhausted):
            nonvanish_certificate([F(3), F(-1)], p_cap=3)

    def test_json_roundtrip_reverifies(self):
        cert = nonvanish_certificate([F(3), F(-1)])
        rebuilt = certificate_from_dict(cert.to_dict())
        assert rebuilt.prime == cert.prime
        assert rebuilt.M == cert.M
        assert verify_certificate(rebuilt)

    def test_tampered_certificate_fails(self):
        cert = nonvanish_certificate([F(3), F(-1)])
        doc = cert.to_dict()
        doc["I"] = str(int(doc["I"]) + 1)
        assert not verify_certificate(certificate_from_dict(doc))


class TestConvergents:
    def test_pi_first_four(self):
        convergents = cf_convergents(pi_oracle, 4)
        assert [(c.p, c.q) for c in convergents] == \
            [(3, 1), (22, 7), (333, 106), (355, 113)]

    def test_dirichlet_inequality(self):
        for c in cf_convergents(pi_oracle, 6):
            assert c.error_bound.hi < F(1, c.q ** 2)

    def test_rational_terminates_exactly(self):
        convergents = cf_convergents(F(7, 3), 5)
        assert convergents[-1].p == 7 and convergents[-1].q == 3
        assert convergents[-1].error_bound.hi == 0

    def test_lazy_oracle_exhaustion(self):
        stubborn = lambda tol: Interval(F(1, 4), F(3, 4))
        with pytest.raises(PrecisionExhausted):
            cf_convergents(stubborn, 3)

    def test_convergent_laws(self):
        convergents = cf_convergents(pi_oracle, 8)
        qs = [c.q for c in convergents]
        assert all(q2 > q1 for q1, q2 in zip(qs, qs[1:]))
        pi_100 = F(sympy.Rational(sympy.pi.evalf(100)))
        for c1, c2 in zip(convergents, convergents[1:]):
            assert gcd(c1.p, c1.q) == 1
            assert abs(pi_100 - F(c1.p, c1.q)) < F(1, c1.q * c2.q)
            # consecutive convergents bracket alpha
            assert (F(c1.p, c1.q) - pi_100) * (F(c2.p, c2.q) - pi_100) < 0

    def test_pairwise_proximity(self):
        convergents = cf_convergents(pi_oracle, 6)
        for c1 in convergents:
            for c2 in convergents:
                gap = abs(F(c1.p, c1.q) - F(c2.p, c2.q))
                assert gap <= F(1, c1.q ** 2) + F(1, c2.q ** 2)

    def test_e_oracle_reaches_87_over_32(self):
        convergents = cf_convergents(e_oracle, 6)
        assert (convergents[-1].p, convergents[-1].q) == (87, 32)


class TestLiouville:
    def test_partial_sums(self):
        assert liouville_partial(1) == (1, 10)
        assert liouville_partial(2) == (11, 100)

    def test_n2_m2(self):
        conv, holds = liouville_approx(2, 2)
        assert (conv.p, conv.q) == (11, 100)
        assert holds
        assert conv.error_bound.lo == F(1, 10 ** 6)
        assert conv.error_bound.hi == F(2, 10 ** 6)

    def test_n3_m3(self):
        conv, holds = liouville_approx(3, 3)
        assert conv.q == 10 ** 6
        assert holds

    def test_n1_m1(self):
        conv, holds = liouville_approx(1, 1)
        assert (conv.p, conv.q) == (1, 10)
        assert holds

    def test_m4_n3_fails_by_a_hair(self):
        # tail is (1 + 1e-96...) * 10^-24 while 1/q^4 is exactly 10^-24, so
        # the strict inequality is false; the n = 4 partial sum repairs it
        _, holds = liouville_approx(4, 3)
        assert not holds
        _, holds = liouville_approx(3, 4)
        assert holds

    def test_reduced_fraction(self):
        for n in (1, 2, 3, 4):
            p, q = liouville_partial(n)
            assert gcd(p, q) == 1

    def test_tail_bracket_is_true(self):
        # 50-digit decimal expansion of L vs the certified bracket at n = 2
        L = sum(F(1, 10 ** factorial(j)) for j in range(1, 5))
        conv, _ = liouville_approx(2, 2)
        gap = L - F(conv.p, conv.q)
        assert conv.error_bound.lo <= gap <= conv.error_bound.hi


class TestQAnalytic:
    def test_geometric_series(self):
        value = eval_q_analytic(lambda n: F(1), Interval.point(F(1, 2)),
                                terms=40, coeff_bound=1)
        assert value.contains(2)

    def test_truncated_exponential_at_one(self):
        # 1/n! <= 2^-n for n >= 4, so radius 2 certifies the tail at x = 1
        value = eval_q_analytic(lambda n: F(1, factorial(n)),
                                Interval.point(F(1)), terms=25, coeff_bound=2)
        assert value.contains(E_50)

    def test_sine_combination_vanishes_at_half_pi(self):
        def coeffs(n):
            if n == 0:
                return F(-1)
            if n % 2 == 1:
                return F((-1) ** ((n - 1) // 2), factorial(n))
            return F(0)

        half_pi_bracket = pi_oracle(F(1, 10 ** 30)) * F(1, 2)
        value = eval_q_analytic(coeffs, half_pi_bracket, terms=80,
                                coeff_bound=2)
        assert value.contains(0)
        # tail ratio (pi/4)^81 / (1 - pi/4) dominates the width
        assert value.width < F(1, 10 ** 6)

    def test_radius_violation(self):
        with pytest.raises(RadiusViolation):
            eval_q_analytic(lambda n: F(1), Interval.point(F(3, 2)),
                            terms=10, coeff_bound=1)
