"""Transcendence machinery for e, plus Diophantine approximation helpers.

The core objects are the Hermite integers

    M_k(n, p) = integral over [0, inf) of the shifted weight
                x^(p-1) [(x-1)...(x-n)]^p e^(-x) / (p-1)!   (k = 0)

and their x = k + u translates (k = 1..n).  Gamma integrals turn these into
exact integer sums of coefficient * factorial terms, no quadrature involved.
The identity e^k M_0 = M_k + eps_k with tiny eps_k then makes a finite
rational combination sum(b_k e^k) certifiably nonzero: pick a prime p so
that p divides every M_k (k >= 1) but not the k = 0 contribution, squeeze
|sum of scaled eps_k| below 1/2 with interval arithmetic, and the integer
part of the combination cannot vanish.

All interval arithmetic is exact-rational; e enters only through its
factorial series with an explicit remainder bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, isqrt
from typing import Callable, Dict, List, Optional, Tuple, Union

from .errors import (PrecisionExhausted, RadiusViolation, SearchExhausted,
                     ZeroLeadingCoefficient, ZeroRoot)
from .intervals import Interval


# ---------------------------------------------------------------------------
# integer polynomials

@dataclass(frozen=True)
class IntPolynomial:
    """Sparse integer polynomial: exponent -> coefficient, zeros dropped."""
    coefficients: Dict[int, int]

    def __post_init__(self):
        cleaned = {e: c for e, c in self.coefficients.items() if c != 0}
        object.__setattr__(self, "coefficients", cleaned)

    @property
    def degree(self) -> int:
        return max(self.coefficients, default=-1)

    def coeff(self, exponent: int) -> int:
        return self.coefficients.get(exponent, 0)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        result: Dict[int, int] = {}
        for e1, c1 in self.coefficients.items():
            for e2, c2 in other.coefficients.items():
                result[e1 + e2] = result.get(e1 + e2, 0) + c1 * c2
        return IntPolynomial(result)

    def pow(self, k: int) -> "IntPolynomial":
        result = IntPolynomial({0: 1})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def poly_expand_f(n: int, p: int) -> IntPolynomial:
    """Exact expansion of x^(p-1) * product_{j=1..n} (x - j)^p.

    The lowest nonzero exponent is p-1 and its coefficient is ((-1)^n n!)^p.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if p < 2 or not _is_prime(p):
        raise ValueError("p must be a prime >= 2")
    product = IntPolynomial({0: 1})
    for j in range(1, n + 1):
        product = product * IntPolynomial({1: 1, 0: -j})
    product = product.pow(p)
    shifted = {e + p - 1: c for e, c in product.coefficients.items()}
    return IntPolynomial(shifted)


def elem_sym(values: List[Fraction], m: int) -> Fraction:
    """Elementary symmetric polynomial of the reciprocals 1/z_i.

    With P(z) = prod (1 - z/z_i) = 1 + a_1 z + ... the coefficients obey
    a_m = (-1)^m e_m.
    """
    if not 1 <= m <= len(values):
        raise ValueError("need 1 <= m <= len(values)")
    recips = []
    for z in values:
        z = Fraction(z)
        if z == 0:
            raise ZeroRoot("reciprocal of a zero root")
        recips.append(1 / z)
    # dp over prod (1 + y * r): e_m is the coefficient of y^m
    coeffs = [Fraction(1)] + [Fraction(0)] * len(recips)
    for r in recips:
        for j in range(len(coeffs) - 1, 0, -1):
            coeffs[j] += coeffs[j - 1] * r
    return coeffs[m]


# ---------------------------------------------------------------------------
# Hermite integers

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for d in range(3, isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


def _next_prime(p: int) -> int:
    candidate = p + 1
    while not _is_prime(candidate):
        candidate += 1
    return candidate


def _taylor_shift(poly: IntPolynomial, k: int) -> IntPolynomial:
    """q(u) = poly(u + k) via binomial expansion of each monomial."""
    result: Dict[int, int] = {}
    for e, c in poly.coefficients.items():
        binom = 1
        for j in range(e, -1, -1):
            # contribution c * C(e, j) * k^(e-j) to u^j
            result[j] = result.get(j, 0) + c * binom * k ** (e - j)
            binom = binom * j // (e - j + 1)
    return IntPolynomial(result)


def hermite_M(n: int, p: int, k: int = 0) -> int:
    """The exact integer value of the weighted integral at shift k.

    Gamma(mu+1) = mu! turns the expanded polynomial into
    sum(c_mu * mu!) / (p-1)!; the accumulated integer sum is divided by
    (p-1)! at the end and the divisibility is asserted, not assumed.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    poly = poly_expand_f(n, p)
    if k:
        poly = _taylor_shift(poly, k)
    total = sum(c * factorial(e) for e, c in poly.coefficients.items())
    quotient, remainder = divmod(total, factorial(p - 1))
    assert remainder == 0, "weighted coefficient sum must divide by (p-1)!"
    return quotient


def e_interval(tolerance) -> Interval:
    """Rational interval containing e, of width <= tolerance, from the
    factorial series with remainder < 2/(M+1)!."""
    tolerance = Fraction(tolerance)
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    total = Fraction(0)
    term = Fraction(1)
    m = 0
    while True:
        total += term
        remainder = 2 * term / (m + 1)  # = 2/(m+1)!
        if remainder <= tolerance:
            # pad out to the full width symmetrically; e sits in the raw
            # bracket [total, total + remainder] but callers expect nearby
            # decimal truncations (slightly below e) to land inside too
            pad = (tolerance - remainder) / 2
            return Interval(total - pad, total + remainder + pad)
        m += 1
        term /= m


def _e_pow_interval(k: int, tolerance: Fraction) -> Interval:
    """Interval for e^k of width <= tolerance."""
    if k == 0:
        return Interval.point(1)
    guess = Fraction(tolerance) / (k * Fraction(4) ** k)
    while True:
        base = e_interval(guess)
        powered = base.pow_int(k)
        if powered.width <= tolerance:
            return powered
        guess /= 16


@dataclass(frozen=True)
class EpsEstimate:
    """Interval for eps_k = e^k M_0 - M_k plus the closed-form bound
    n * g_k(n) * a(n)^(p-1) / (p-1)! with a(n) = n^(n+1), g_k = e^k n^(n+1)."""
    interval: Interval
    bound: Fraction


_E_UPPER = None


def _e_upper() -> Fraction:
    global _E_UPPER
    if _E_UPPER is None:
        _E_UPPER = e_interval(Fraction(1, 10 ** 12)).hi
    return _E_UPPER


def hermite_eps(n: int, p: int, k: int, tolerance=Fraction(1, 10 ** 12)) -> EpsEstimate:
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    tolerance = Fraction(tolerance)
    m0 = hermite_M(n, p, 0)
    mk = hermite_M(n, p, k)
    target = tolerance / max(1, abs(m0))
    ek = _e_pow_interval(k, target)
    interval = ek * m0 - mk
    a_n = Fraction(n) ** (n + 1)
    g_k = _e_upper() ** k * a_n
    bound = n * g_k * a_n ** (p - 1) / factorial(p - 1)
    return EpsEstimate(interval, bound)


# ---------------------------------------------------------------------------
# nonvanishing certificates

@dataclass(frozen=True)
class HermiteCertificate:
    coefficients: List[Fraction]
    common_denominator: int
    prime: int
    M: List[int]
    integer_combination: int
    eps_bound_ledger: List[Fraction]
    eps_total_bound: Fraction
    lower_bound: Fraction
    checks: Dict[str, bool]

    def to_dict(self) -> dict:
        return {
            "coeffs": [[str(c.numerator), str(c.denominator)]
                       for c in self.coefficients],
            "prime": self.prime,
            "M": [str(m) for m in self.M],
            "I": str(self.integer_combination),
            "eps_bound": str(self.eps_total_bound),
            "lower_bound": str(self.lower_bound),
            "checks": dict(self.checks),
        }


def _lcm(values) -> int:
    result = 1
    for v in values:
        result = result * v // gcd(result, v)
    return result


def _eps_sum_interval(n: int, p: int, scaled: List[int],
                      m_values: List[int], tolerance: Fraction) -> Interval:
    """Interval for sum_{k>=1} scaled[k] * (e^k M_0 - M_k)."""
    total = Interval.point(0)
    m0 = m_values[0]
    for k in range(1, n + 1):
        if scaled[k] == 0:
            continue
        per_term = tolerance / (n * max(1, abs(scaled[k])) * max(1, abs(m0)))
        ek = _e_pow_interval(k, per_term)
        total = total + (ek * m0 - m_values[k]) * scaled[k]
    return total


def nonvanish_certificate(coefficients, p_cap: int = 10_000) -> HermiteCertificate:
    """Produce a verified positive lower bound on |sum b_k e^k|.

    Searches primes p above max(n, |scaled b_0|, common denominator) until
    the scaled epsilon total certifies below 1/2; then the integer part of
    the scaled combination is nonzero mod p, so its absolute value is at
    least 1, giving |sum b_k e^k| >= 1/(2 * denom * |M_0|).
    """
    b = [Fraction(c) for c in coefficients]
    if len(b) < 2:
        raise ValueError("need at least coefficients b_0, b_1")
    if b[0] == 0:
        raise ZeroLeadingCoefficient("b_0 must be nonzero")
    n = len(b) - 1
    denom = _lcm(c.denominator for c in b)
    scaled = [int(c * denom) for c in b]
    threshold = max(n, abs(scaled[0]), denom)
    p = _next_prime(threshold)
    while p <= p_cap:
        m_values = [hermite_M(n, p, k) for k in range(n + 1)]
        m0 = m_values[0]
        combination = sum(s * m for s, m in zip(scaled, m_values))
        checks = {
            "m0_nondivisible": (scaled[0] * m0) % p != 0,
            "mk_divisible": all(m % p == 0 for m in m_values[1:]),
        }
        eps_ok, ledger, total_bound = _certify_eps(n, p, scaled, m_values)
        checks["eps_half"] = eps_ok
        if all(checks.values()):
            assert combination % p != 0  # forced by the two divisibility checks
            lower = Fraction(1, 2 * denom * abs(m0))
            return HermiteCertificate(
                coefficients=b,
                common_denominator=denom,
                prime=p,
                M=m_values,
                integer_combination=combination,
                eps_bound_ledger=ledger,
                eps_total_bound=total_bound,
                lower_bound=lower,
                checks=checks,
            )
        p = _next_prime(p)
    raise SearchExhausted(p_cap)


def _certify_eps(n: int, p: int, scaled: List[int],
                 m_values: List[int]) -> Tuple[bool, List[Fraction], Fraction]:
    half = Fraction(1, 2)
    tolerance = Fraction(1, 4)
    for _ in range(60):
        total = _eps_sum_interval(n, p, scaled, m_values, tolerance)
        if -half < total.lo and total.hi < half:
            ledger = []
            m0 = m_values[0]
            for k in range(1, n + 1):
                per = tolerance / (n * max(1, abs(scaled[k])) * max(1, abs(m0)))
                ek = _e_pow_interval(k, per)
                ledger.append(((ek * m0 - m_values[k]) * scaled[k]).abs_hi())
            return True, ledger, max(abs(total.lo), total.hi)
        if total.lo >= half or total.hi <= -half:
            return False, [], Fraction(0)
        tolerance /= 16
    return False, [], Fraction(0)


def certificate_from_dict(doc: dict) -> HermiteCertificate:
    """Rebuild a certificate from its JSON form (inverse of to_dict).

    The ledger fields not present in the wire format are reconstructed as
    empty; verification recomputes them anyway.
    """
    coeffs = [Fraction(int(num), int(den)) for num, den in doc["coeffs"]]
    denom = _lcm(c.denominator for c in coeffs)
    return HermiteCertificate(
        coefficients=coeffs,
        common_denominator=denom,
        prime=int(doc["prime"]),
        M=[int(m) for m in doc["M"]],
        integer_combination=int(doc["I"]),
        eps_bound_ledger=[],
        eps_total_bound=Fraction(doc["eps_bound"]),
        lower_bound=Fraction(doc["lower_bound"]),
        checks=dict(doc["checks"]),
    )


def verify_certificate(cert: HermiteCertificate, digits: int = 60) -> bool:
    """Re-verify a certificate from its own fields.

    Recomputes the Hermite integers, the divisibility checks, the epsilon
    half-bound, the lower bound formula, and finally confirms with a
    high-precision interval that |sum b_k e^k| really exceeds the bound.
    """
    n = len(cert.coefficients) - 1
    p = cert.prime
    if not _is_prime(p):
        return False
    m_values = [hermite_M(n, p, k) for k in range(n + 1)]
    if m_values != list(cert.M):
        return False
    scaled = [int(c * cert.common_denominator) for c in cert.coefficients]
    if any(Fraction(s, cert.common_denominator) != c
           for s, c in zip(scaled, cert.coefficients)):
        return False
    if sum(s * m for s, m in zip(scaled, m_values)) != cert.integer_combination:
        return False
    if (scaled[0] * m_values[0]) % p == 0 or cert.integer_combination % p == 0:
        return False
    if any(m % p for m in m_values[1:]):
        return False
    eps_ok, _, _ = _certify_eps(n, p, scaled, m_values)
    if not eps_ok:
        return False
    if cert.lower_bound != Fraction(1, 2 * cert.common_denominator * abs(m_values[0])):
        return False
    value = combination_interval(cert.coefficients, Fraction(1, 10 ** digits))
    return value.abs_lo() >= cert.lower_bound


def combination_interval(coefficients, tolerance) -> Interval:
    """Interval for sum b_k e^k at the requested absolute tolerance."""
    b = [Fraction(c) for c in coefficients]
    n = len(b) - 1
    tolerance = Fraction(tolerance)
    total = Interval.point(b[0])
    for k in range(1, n + 1):
        if b[k] == 0:
            continue
        per = tolerance / (n * max(Fraction(1), abs(b[k])))
        total = total + _e_pow_interval(k, per) * b[k]
    return total


# ---------------------------------------------------------------------------
# Dirichlet approximation: continued-fraction convergents

@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    error_bound: Interval


OracleFn = Callable[[Fraction], Interval]


def pi_oracle(tolerance) -> Interval:
    """Certified rational interval around pi via mpmath's interval mode."""
    from mpmath import iv

    tolerance = Fraction(tolerance)
    digits = max(20, 2 - _floor_log10(tolerance))
    saved = iv.dps
    try:
        iv.dps = digits
        lo_tuple, hi_tuple = iv.pi._mpi_
        lo = _mpf_tuple_to_fraction(lo_tuple)
        hi = _mpf_tuple_to_fraction(hi_tuple)
    finally:
        iv.dps = saved
    if hi - lo > tolerance:
        raise PrecisionExhausted("pi oracle could not reach the tolerance")
    return Interval(lo, hi)


def e_oracle(tolerance) -> Interval:
    return e_interval(tolerance)


def _floor_log10(q: Fraction) -> int:
    if q <= 0:
        raise ValueError("positive value required")
    digits = len(str(q.denominator)) - len(str(q.numerator))
    # crude but only used to size working precision upward
    return -digits - 2


def _mpf_tuple_to_fraction(data) -> Fraction:
    sign, man, exp, _ = data
    value = Fraction(int(man)) * (Fraction(2) ** exp)
    return -value if sign else value


def _rational_convergents(alpha: Fraction, count: int) -> List[Convergent]:
    result = []
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    num, den = alpha.numerator, alpha.denominator
    while den != 0 and len(result) < count:
        a, rem = divmod(num, den)
        num, den = den, rem
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        err = abs(alpha - Fraction(p_cur, q_cur))
        result.append(Convergent(p_cur, q_cur, Interval.point(err)))
    return result


def cf_convergents(alpha: Union[Fraction, OracleFn], count: int) -> List[Convergent]:
    """First `count` continued-fraction convergents, each verified to satisfy
    |alpha - p/q| < 1/q^2 by interval arithmetic.

    `alpha` is either an exact Fraction (terminating expansion) or an oracle
    mapping a tolerance to a certified interval.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if isinstance(alpha, (int, Fraction)):
        return _rational_convergents(Fraction(alpha), count)
    tolerance = Fraction(1, 10 ** 40)
    for _ in range(8):
        bracket = alpha(tolerance)
        terms = _extract_terms(bracket, count)
        if terms is not None:
            return _build_convergents(bracket, terms)
        tolerance /= 10 ** 40
    raise PrecisionExhausted("oracle could not separate the partial quotients")


def _extract_terms(bracket: Interval, count: int) -> Optional[List[int]]:
    terms = []
    lo, hi = bracket.lo, bracket.hi
    for _ in range(count):
        a_lo = lo.numerator // lo.denominator
        a_hi = hi.numerator // hi.denominator
        if a_lo != a_hi:
            return None
        terms.append(a_lo)
        lo, hi = lo - a_lo, hi - a_lo
        if lo <= 0:
            return None  # cannot certify the next quotient
        lo, hi = 1 / hi, 1 / lo
    return terms


def _build_convergents(bracket: Interval, terms: List[int]) -> List[Convergent]:
    result = []
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for a in terms:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        approx = Fraction(p_cur, q_cur)
        err_hi = max(abs(bracket.lo - approx), abs(bracket.hi - approx))
        err_lo = (bracket - approx).abs_lo()
        if err_hi >= Fraction(1, q_cur ** 2):
            raise PrecisionExhausted(
                f"could not verify |alpha - {p_cur}/{q_cur}| < 1/q^2")
        result.append(Convergent(p_cur, q_cur, Interval(err_lo, err_hi)))
    return result


# ---------------------------------------------------------------------------
# Liouville approximations

def liouville_partial(n: int) -> Tuple[int, int]:
    """Numerator and denominator of the n-term partial sum of sum 10^(-j!)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = 10 ** factorial(n)
    p = sum(10 ** (factorial(n) - factorial(j)) for j in range(1, n + 1))
    return p, q


def liouville_approx(m: int, n: int) -> Tuple[Convergent, bool]:
    """Partial sums of the Liouville constant as hyper-good approximations.

    The tail obeys 10^-(n+1)! < L - p/q < 2 * 10^-(n+1)!, so the returned
    flag verifies 0 < |L - p/q| < 1/q^m exactly in rationals.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    p, q = liouville_partial(n)
    tail_lo = Fraction(1, 10 ** factorial(n + 1))
    tail_hi = 2 * tail_lo
    holds = tail_hi < Fraction(1, q ** m) and tail_lo > 0
    return Convergent(p, q, Interval(tail_lo, tail_hi)), holds


# ---------------------------------------------------------------------------
# truncated Q-analytic evaluation

def eval_q_analytic(coeffs: Callable[[int], Fraction], x: Interval, terms: int,
                    coeff_bound) -> Interval:
    """Interval for sum a_n x^n truncated at `terms`, plus a geometric tail.

    `coeff_bound` is a certified radius R with |a_n| <= R^(-n) for all
    n > terms; the tail is then at most q^(terms+1)/(1-q) with q = |x|/R,
    which requires |x| strictly inside R.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    radius = Fraction(coeff_bound)
    if radius <= 0:
        raise ValueError("coeff_bound must be positive")
    q = x.abs_hi() / radius
    if q >= 1:
        raise RadiusViolation(f"|x| up to {x.abs_hi()} not inside radius {radius}")
    total = Interval.point(0)
    power = Interval.point(1)
    for n in range(terms + 1):
        a_n = Fraction(coeffs(n))
        if a_n != 0:
            total = total + power * a_n
        power = power * x
    tail = q ** (terms + 1) / (1 - q)
    return total.widen(tail)
