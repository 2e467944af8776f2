"""External summation of countable rational series.

The value of a convergent sum lives in the canonical-form fragment: a
nonnegative convergent series with real sum eta yields ``eta^# - eps_d``
(the sup of the embedded partial sums sits one infinitesimal-sup below the
embedded limit), a nonpositive one yields ``eta^# + eps_d``, and a split
series adds its two compactly-enumerated halves.  Divergent nonnegative
series keep their exact partial-sum hyperreal with no correction.

Convergence is certificate-driven: a ``SeriesSpec`` may carry a
``tail_bound`` with ``sum_{n>k} |term(n)| <= tail_bound(k)``, monotone
nonincreasing.  Without a certificate only a divergence witness (partial
sums crossing a probe) is accepted; everything else raises
``ConvergenceUnknown``.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import seqfield as sf
from .errors import ConvergenceUnknown, InvalidPermutation
from .intervals import Interval
from .seqfield import ClassTag, Hyperreal, Verdict, classify, compare, make
from .wattenberg import DedekindNumber, EPS_IDEM, dd_add, dd_scalar_mul, embed

DEFAULT_DEPTH = sf.DEFAULT_DEPTH
DEFAULT_ETA_TERMS = 128
DEFAULT_DIVERGENCE_PROBE = 64

NONNEG = "nonneg"
NONPOS = "nonpos"
SPLIT = "split"


@dataclass(frozen=True)
class SeriesSpec:
    term: Callable[[int], Fraction]
    pattern: str
    tail_bound: Optional[Callable[[int], Fraction]] = None
    label: str = "<series>"

    def __post_init__(self):
        if self.pattern not in (NONNEG, NONPOS, SPLIT):
            raise ValueError(f"unknown sign pattern {self.pattern!r}")

    def term_at(self, n: int) -> Fraction:
        value = Fraction(self.term(n))
        if self.pattern == NONNEG and value < 0:
            raise ValueError(f"{self.label}: negative term at index {n}")
        if self.pattern == NONPOS and value > 0:
            raise ValueError(f"{self.label}: positive term at index {n}")
        return value


def geom(ratio) -> SeriesSpec:
    """Geometric series with terms ratio^(n+1)."""
    r = Fraction(ratio)
    if r >= 0:
        pattern = NONNEG
    else:
        pattern = SPLIT
    bound = None
    if abs(r) < 1:
        # |sum_{n>k} r^(n+1)| <= |r|^(k+2) / (1 - |r|)
        bound = lambda k: abs(r) ** (k + 2) / (1 - abs(r))
    return SeriesSpec(lambda n: r ** (n + 1), pattern, bound, f"geom({r})")


def pser(k: int) -> SeriesSpec:
    """p-series with terms 1/(n+1)^k; carries a tail bound for k >= 2."""
    if k < 1:
        raise ValueError("exponent must be >= 1")
    bound = None
    if k >= 2:
        # sum_{n>m} 1/(n+1)^k <= integral comparison: 1/((k-1) (m+1)^(k-1))
        bound = lambda m: Fraction(1, (k - 1) * (m + 1) ** (k - 1))
    return SeriesSpec(lambda n: Fraction(1, (n + 1) ** k), NONNEG, bound, f"pser({k})")


def harmonic_series() -> SeriesSpec:
    return SeriesSpec(lambda n: Fraction(1, n + 1), NONNEG, None, "harmonic")


def alternating(inner: SeriesSpec) -> SeriesSpec:
    """Apply signs (-1)^n to the absolute values of another series' terms."""

    def term(n):
        value = abs(inner.term_at(n))
        return value if n % 2 == 0 else -value

    return SeriesSpec(term, SPLIT, inner.tail_bound, f"alt({inner.label})")


def partial_sums(spec: SeriesSpec) -> Hyperreal:
    """The identity-permutation representative: the hyperreal of partial sums."""
    return Hyperreal(sf.cumulative_gen(spec.term_at), label=f"sum[{spec.label}]")


@dataclass(frozen=True)
class ExtSumResult:
    value: DedekindNumber
    eta_interval: Optional[Interval]
    divergent: bool = False

    def __post_init__(self):
        if self.divergent and self.eta_interval is not None:
            raise ValueError("divergent results carry no eta interval")


def _compact_positions(spec: SeriesSpec, keep_nonneg: bool):
    """Original index of the j-th term with the requested sign (lazy)."""
    positions: list = []
    cursor = [0]
    lock = threading.Lock()

    def pos(j: int) -> int:
        if j < len(positions):
            return positions[j]
        with lock:
            while len(positions) <= j:
                n = cursor[0]
                value = spec.term_at(n)
                wanted = value >= 0 if keep_nonneg else value < 0
                if wanted:
                    positions.append(n)
                cursor[0] = n + 1
        return positions[j]

    return pos


def split_parts(spec: SeriesSpec):
    """Compact subsequences of nonnegative and negative terms.

    Reindexing compactly (rather than padding with zeros) is what makes the
    alternating unit series collapse exactly: its halves sum to the all-ones
    and all-minus-ones partials, which cancel pointwise.
    """
    pos_plus = _compact_positions(spec, True)
    pos_minus = _compact_positions(spec, False)
    bound = spec.tail_bound
    plus = SeriesSpec(lambda j: spec.term_at(pos_plus(j)), NONNEG,
                      None if bound is None else (lambda k: bound(pos_plus(k))),
                      f"{spec.label}+")
    minus = SeriesSpec(lambda j: spec.term_at(pos_minus(j)), NONPOS,
                       None if bound is None else (lambda k: bound(pos_minus(k))),
                       f"{spec.label}-")
    return plus, minus


def _eta_interval(spec: SeriesSpec, eta_terms: int) -> Interval:
    partial = sum((spec.term_at(n) for n in range(eta_terms)), Fraction(0))
    slack = Fraction(spec.tail_bound(eta_terms - 1))
    if eta_terms > 1 and slack > Fraction(spec.tail_bound((eta_terms - 1) // 2)):
        raise ValueError(f"{spec.label}: tail bound is not nonincreasing")
    return Interval(partial - slack, partial + slack)


def flat_sum(spec: SeriesSpec, depth: int = DEFAULT_DEPTH,
             eta_terms: int = DEFAULT_ETA_TERMS,
             divergence_probe: int = DEFAULT_DIVERGENCE_PROBE) -> ExtSumResult:
    """Flat sum of a series, valued in the canonical-form fragment."""
    if spec.pattern == SPLIT:
        plus, minus = split_parts(spec)
        if spec.tail_bound is None:
            raise ConvergenceUnknown(f"{spec.label}: split sums need a certificate")
        left = flat_sum(plus, depth, eta_terms, divergence_probe)
        right = flat_sum(minus, depth, eta_terms, divergence_probe)
        value = dd_add(left.value, right.value, depth)
        interval = left.eta_interval + right.eta_interval
        return ExtSumResult(value, interval, False)

    sums = partial_sums(spec)
    if spec.tail_bound is not None:
        interval = _eta_interval(spec, eta_terms)
        sign = -1 if spec.pattern == NONNEG else 1
        return ExtSumResult(DedekindNumber(sums, sign, EPS_IDEM), interval, False)

    probe = Fraction(divergence_probe)
    for n in range(depth + 1):
        value = sums.at(n)
        if (spec.pattern == NONNEG and value >= probe) or \
                (spec.pattern == NONPOS and value <= -probe):
            return ExtSumResult(embed(sums), None, True)
    raise ConvergenceUnknown(
        f"{spec.label}: no certificate and no divergence witness "
        f"(probe {divergence_probe}, depth {depth})")


def upper_lower_sum(spec: SeriesSpec, depth: int = DEFAULT_DEPTH,
                    eta_terms: int = DEFAULT_ETA_TERMS):
    """Upper and lower sums of a certified-convergent series:
    (zeta^# + eps_d, zeta^# - eps_d) around the partial-sum hyperreal."""
    if spec.tail_bound is None:
        raise ConvergenceUnknown(f"{spec.label}: upper/lower sums need a certificate")
    sums = partial_sums(spec)
    upper = DedekindNumber(sums, 1, EPS_IDEM)
    lower = DedekindNumber(sums, -1, EPS_IDEM)
    return upper, lower


def upper_lower_limit(a, tail_bound=None, depth: int = DEFAULT_DEPTH):
    """Upper and lower limits of a hyperreal sequence.

    Eventually constant input (witnessed within depth) realizes its sup and
    inf exactly, so the literal inf-sup gives the exact cut a# on both sides;
    this is the documented divergence from the +/- eps_d form that genuine
    (non-realized) convergence produces.
    """
    a = make(a)
    last = a.at(depth)
    w = depth
    for n in range(depth - 1, -1, -1):
        if a.at(n) != last:
            break
        w = n
    if 2 * w <= depth:
        exact = embed(a)
        return exact, exact
    if tail_bound is None:
        raise ConvergenceUnknown("no certificate and not eventually constant")
    for k in (0, depth // 2):
        # |a(depth) - a(k)| <= c(k) + c(depth) <= 2 c(k) for a real certificate
        if abs(a.at(depth) - a.at(k)) > 2 * Fraction(tail_bound(k)):
            raise ValueError(
                f"certificate inconsistent with the inspected prefix at {k}")
    upper = DedekindNumber(a, 1, EPS_IDEM)
    lower = DedekindNumber(a, -1, EPS_IDEM)
    return upper, lower


@dataclass(frozen=True)
class BoundedPermutation:
    """Bijection of the naturals moving no index further than `displacement`."""
    mapping: Callable[[int], int]
    displacement: int

    def validate(self, window: int):
        seen = {}
        for i in range(window):
            j = self.mapping(i)
            if abs(j - i) > self.displacement or j < 0:
                raise InvalidPermutation(f"index {i} moved to {j}")
            if j in seen:
                raise InvalidPermutation(f"indices {seen[j]} and {i} collide at {j}")
            seen[j] = i


def rearranged(spec: SeriesSpec, perm: BoundedPermutation) -> SeriesSpec:
    """The permuted series; the certificate shifts by the displacement."""
    bound = spec.tail_bound
    shifted = None
    if bound is not None:
        shifted = lambda k: bound(max(0, k - perm.displacement))
    return SeriesSpec(lambda n: spec.term_at(perm.mapping(n)), spec.pattern,
                      shifted, f"{spec.label} o sigma")


def rearranged_flat_sum(spec: SeriesSpec, perm: BoundedPermutation,
                        depth: int = DEFAULT_DEPTH,
                        eta_terms: int = DEFAULT_ETA_TERMS) -> ExtSumResult:
    """Flat sum after a bounded-displacement rearrangement; equal, as a
    DedekindNumber, to the unpermuted flat sum."""
    if spec.pattern != NONNEG:
        raise InvalidPermutation("rearrangement is supported for nonneg series")
    perm.validate(depth + perm.displacement + 1)
    return flat_sum(rearranged(spec, perm), depth, eta_terms)


def scalar_mul_flat(c, spec: SeriesSpec, depth: int = DEFAULT_DEPTH,
                    eta_terms: int = DEFAULT_ETA_TERMS) -> ExtSumResult:
    """Flat sum of the termwise-scaled series for a positive scalar c.

    Scaling commutes with the flat sum, so the value is the scalar product of
    the base result: the diagonal hyperreal c(i) * S(i) with the idempotent
    scale multiplied by c.  For constant c the real limit scales exactly and
    the eta interval follows; for nonconstant c no real limit exists.
    """
    c = make(c)
    if compare(c, 0, depth).verdict is not Verdict.GREATER:
        raise ConvergenceUnknown("scalar must verify positive")
    base = flat_sum(spec, depth, eta_terms)
    value = dd_scalar_mul(c, base.value, depth)
    cq = c.const_value
    interval = None
    if base.eta_interval is not None and cq is not None:
        interval = base.eta_interval * cq
    if interval is None and classify(c, depth) is not ClassTag.UNLIMITED:
        interval = None  # nonconstant limited scalars: no exact real limit claimed
    return ExtSumResult(value, interval, base.divergent)


# ---------------------------------------------------------------------------
# Mini-DSL used by the CLI: geom(r), pser(k), powers_recip, harmonic, alt(...)

_CALL = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*(?:\(\s*(.*)\s*\))?\s*$")


def parse_series(text: str) -> SeriesSpec:
    match = _CALL.match(text)
    if not match:
        raise ValueError(f"cannot parse series expression {text!r}")
    name, arg = match.group(1), match.group(2)
    if name == "geom":
        if arg is None:
            raise ValueError("geom needs a ratio argument")
        return geom(Fraction(arg))
    if name == "pser":
        if arg is None:
            raise ValueError("pser needs an exponent argument")
        return pser(int(arg))
    if name == "alt":
        if arg is None:
            raise ValueError("alt needs an inner series")
        return alternating(parse_series(arg))
    if name == "harmonic":
        return harmonic_series()
    if name == "powers_recip":
        from .goldbach import powers_reciprocal_series
        return powers_reciprocal_series()
    raise ValueError(f"unknown series {name!r}")
