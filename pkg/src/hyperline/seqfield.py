"""Computable stand-ins for the hyperreals and hyperintegers.

A `Hyperreal` is a lazy total map ``index -> Fraction``.  The genuine
ultrafilter quotient is not computable, so order verdicts use a cofinite
(Frechet) proxy: a comparison holds when the sign of the difference is
constant on a suffix ``[w, depth]`` of the inspected window with
``2*w <= depth``.  Everything that cannot be settled that way is reported
as ``UNDETERMINED`` rather than guessed.

Index origin is 0; classical sequences written from n = 1 are shifted.
All values are immutable and generators must be pure, so any operation may
be evaluated concurrently; the internal memo cache is only a benign
performance detail (recomputation yields identical values).
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import (DivisionByZeroAtIndex, NotConvergentAtDepth,
                     UnlimitedValue, ZeroTailAtDepth)
from .intervals import Interval

DEFAULT_DEPTH = 4096
DEFAULT_PROBES = 64

# Memoize only a bounded prefix; deeper indices are recomputed on the fly so
# very deep scans do not pin memory.
_CACHE_LIMIT = 1 << 17


class Verdict(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    UNDETERMINED = "Undetermined"


class ClassTag(enum.Enum):
    INFINITESIMAL = "Infinitesimal"
    APPRECIABLE = "Appreciable"
    UNLIMITED = "Unlimited"
    UNDETERMINED = "Undetermined"


class ArchClass(enum.Enum):
    SAME = "SameClass"
    LOWER = "LowerClass"
    HIGHER = "HigherClass"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class CompareResult:
    verdict: Verdict
    witness_index: Optional[int]

    def __post_init__(self):
        undecided = self.verdict is Verdict.UNDETERMINED
        if undecided != (self.witness_index is None):
            raise ValueError("witness present exactly when the verdict is decided")


_UNDETERMINED = CompareResult(Verdict.UNDETERMINED, None)


class Hyperreal:
    """Lazy exact-rational sequence; the computable face of a hyperreal.

    ``form`` is an optional closed-form tag.  Only ``("constant", q)`` is
    interpreted (it enables O(1) comparisons and exact shadows); anything
    else is treated as opaque.
    """

    __slots__ = ("gen", "form", "label", "_cache", "_lock")

    def __init__(self, gen: Callable[[int], Fraction], form=None, label="<seq>"):
        self.gen = gen
        self.form = form
        self.label = label
        self._cache: list = []
        self._lock = threading.Lock()

    @classmethod
    def constant(cls, q) -> "Hyperreal":
        q = Fraction(q)
        return cls(lambda n: q, form=("constant", q), label=str(q))

    @property
    def const_value(self) -> Optional[Fraction]:
        if self.form and self.form[0] == "constant":
            return self.form[1]
        return None

    def at(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError(n)
        cache = self._cache
        if n < len(cache):  # append-only cache: hits need no lock
            return cache[n]
        if n >= _CACHE_LIMIT:
            return Fraction(self.gen(n))
        with self._lock:
            while len(cache) <= n:
                cache.append(Fraction(self.gen(len(cache))))
        return cache[n]

    def prefix(self, count: int) -> list:
        return [self.at(i) for i in range(count)]

    def _combine(self, other, op, symbol):
        other = make(other)
        qa, qb = self.const_value, other.const_value
        if qa is not None and qb is not None:
            return Hyperreal.constant(op(qa, qb))
        # exact pointwise identities; they also keep labels readable
        if symbol == "+":
            if qa == 0:
                return other
            if qb == 0:
                return self
        elif symbol == "-" and qb == 0:
            return self
        elif symbol == "*":
            if qa == 0 or qb == 0:
                return Hyperreal.constant(0)
            if qa == 1:
                return other
            if qb == 1:
                return self
        label = f"({self.label} {symbol} {other.label})"
        return Hyperreal(lambda n, a=self, b=other: op(a.at(n), b.at(n)), label=label)

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y, "-")

    def __rsub__(self, other):
        return make(other) - self

    def __mul__(self, other):
        return self._combine(other, lambda x, y: x * y, "*")

    __rmul__ = __mul__

    def __neg__(self):
        q = self.const_value
        if q is not None:
            return Hyperreal.constant(-q)
        return Hyperreal(lambda n, a=self: -a.at(n), label=f"(-{self.label})")

    def __abs__(self):
        q = self.const_value
        if q is not None:
            return Hyperreal.constant(abs(q))
        return Hyperreal(lambda n, a=self: abs(a.at(n)), label=f"|{self.label}|")

    def tilde_inv(self) -> "Hyperreal":
        """Total pseudo-inverse: zero terms map to zero, others to 1/x."""
        q = self.const_value
        if q is not None:
            return Hyperreal.constant(0 if q == 0 else 1 / q)

        def gen(n, a=self):
            x = a.at(n)
            return Fraction(0) if x == 0 else 1 / x

        return Hyperreal(gen, label=f"~{self.label}")

    def __repr__(self):
        return f"Hyperreal({self.label})"


class Hyperinteger:
    """Lazy exact-integer sequence; embeds losslessly into Hyperreal."""

    __slots__ = ("gen", "label", "_cache", "_lock")

    def __init__(self, gen: Callable[[int], int], label="<iseq>"):
        self.gen = gen
        self.label = label
        self._cache: list = []
        self._lock = threading.Lock()

    @classmethod
    def constant(cls, v: int) -> "Hyperinteger":
        v = int(v)
        return cls(lambda n: v, label=str(v))

    @staticmethod
    def _checked(value, index):
        if not isinstance(value, int):
            raise TypeError(f"non-integer term {value!r} at index {index}")
        return value

    def at(self, n: int) -> int:
        if n < 0:
            raise IndexError(n)
        cache = self._cache
        if n < len(cache):
            return cache[n]
        if n >= _CACHE_LIMIT:
            return self._checked(self.gen(n), n)
        with self._lock:
            while len(cache) <= n:
                cache.append(self._checked(self.gen(len(cache)), len(cache)))
        return cache[n]

    def prefix(self, count: int) -> list:
        return [self.at(i) for i in range(count)]

    def to_hyperreal(self) -> Hyperreal:
        return Hyperreal(lambda n, a=self: Fraction(a.at(n)), label=self.label)

    def __repr__(self):
        return f"Hyperinteger({self.label})"


# The canonical named sequences.  Shared instances so memo caches are reused.
OMEGA = Hyperreal(lambda n: Fraction(n + 1), label="omega")
RECIPROCAL_SUCC = Hyperreal(lambda n: Fraction(1, n + 1), label="1/(n+1)")


def cumulative_gen(term: Callable[[int], Fraction]) -> Callable[[int], Fraction]:
    """Generator of running sums of `term`, with its own thread-safe cache
    (plain memoization would make deep evaluation quadratic)."""
    acc: list = []
    lock = threading.Lock()

    def gen(n):
        if n < len(acc):
            return acc[n]
        with lock:
            while len(acc) <= n:
                k = len(acc)
                prev = acc[-1] if acc else Fraction(0)
                acc.append(prev + Fraction(term(k)))
        return acc[n]

    return gen


HARMONIC = Hyperreal(cumulative_gen(lambda k: Fraction(1, k + 1)),
                     label="harmonic")

_BUILTINS = {
    "omega": OMEGA,
    "harmonic": HARMONIC,
    "reciprocal_succ": RECIPROCAL_SUCC,
}

ZERO = Hyperreal.constant(0)
ONE = Hyperreal.constant(1)


def make(source) -> Hyperreal:
    """Build a Hyperreal from a rational, a builtin name, or a generator."""
    if isinstance(source, Hyperreal):
        return source
    if isinstance(source, Hyperinteger):
        return source.to_hyperreal()
    if isinstance(source, (int, Fraction)):
        return Hyperreal.constant(source)
    if isinstance(source, str):
        if source in _BUILTINS:
            return _BUILTINS[source]
        return Hyperreal.constant(Fraction(source))
    if callable(source):
        return Hyperreal(source)
    raise TypeError(f"cannot make a Hyperreal from {source!r}")


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def compare(a, b, depth: int = DEFAULT_DEPTH) -> CompareResult:
    """Cofinite-proxy comparison over indices ``0..depth``.

    Returns a decided verdict only when the sign of ``a - b`` is constant on
    a suffix ``[w, depth]`` with ``2*w <= depth``; the witness is that ``w``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    a, b = make(a), make(b)
    qa, qb = a.const_value, b.const_value
    if qa is not None and qb is not None:
        s = _sign(qa - qb)
        verdict = (Verdict.LESS, Verdict.EQUAL, Verdict.GREATER)[s + 1]
        return CompareResult(verdict, 0)
    w = depth
    last = _sign(a.at(depth) - b.at(depth))
    for n in range(depth - 1, -1, -1):
        if _sign(a.at(n) - b.at(n)) != last:
            break
        w = n
    if 2 * w > depth:
        return _UNDETERMINED
    verdict = (Verdict.LESS, Verdict.EQUAL, Verdict.GREATER)[last + 1]
    return CompareResult(verdict, w)


def _suffix_witness(values, depth: int, pred) -> Optional[int]:
    """Smallest w such that pred holds on [w, depth], or None if 2*w > depth."""
    w = depth + 1
    for n in range(depth, -1, -1):
        if not pred(values(n)):
            break
        w = n
    return w if 2 * w <= depth else None


def classify(a, depth: int = DEFAULT_DEPTH, probes: int = DEFAULT_PROBES) -> ClassTag:
    """Bucket a hyperreal by finite evidence against probes 1/m and m, m <= probes.

    The tags are proxy verdicts: a constant below 1/probes *is* reported as
    infinitesimal.  Callers pick the probe budget accordingly.
    """
    if depth < 1 or probes < 1:
        raise ValueError("depth and probes must be >= 1")
    a = make(a)
    tiny = Fraction(1, probes)
    big = Fraction(probes)
    q = a.const_value
    if q is not None:
        q = abs(q)
        if q < tiny:
            return ClassTag.INFINITESIMAL
        if q > big:
            return ClassTag.UNLIMITED
        return ClassTag.APPRECIABLE
    if _suffix_witness(lambda n: abs(a.at(n)), depth, lambda v: v < tiny) is not None:
        return ClassTag.INFINITESIMAL
    if _suffix_witness(lambda n: abs(a.at(n)), depth, lambda v: v > big) is not None:
        return ClassTag.UNLIMITED
    sandwiched = lambda v: tiny <= v <= big
    if _suffix_witness(lambda n: abs(a.at(n)), depth, sandwiched) is not None:
        return ClassTag.APPRECIABLE
    return ClassTag.UNDETERMINED


def shadow(a, tolerance, depth: int = DEFAULT_DEPTH) -> Interval:
    """Certified interval of width <= 2*tolerance around the sequence limit.

    The Cauchy window is detected at tolerance/2 and the returned interval is
    widened by the full tolerance, so drift beyond the inspected depth of up
    to tolerance/2 stays covered.
    """
    tolerance = Fraction(tolerance)
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    a = make(a)
    q = a.const_value
    if q is not None:
        return Interval.point(q)
    if classify(a, depth) is ClassTag.UNLIMITED:
        raise UnlimitedValue(f"{a.label} classified unlimited at depth {depth}")
    half = tolerance / 2
    lo = hi = a.at(depth)
    w = depth
    for n in range(depth - 1, -1, -1):
        v = a.at(n)
        new_lo, new_hi = min(lo, v), max(hi, v)
        if new_hi - new_lo > half:
            break
        lo, hi, w = new_lo, new_hi, n
    if 2 * w > depth:
        raise NotConvergentAtDepth(
            f"no Cauchy window at tolerance {tolerance} within depth {depth}")
    return Interval(hi - tolerance, lo + tolerance)


def hyper_floor(a) -> Hyperinteger:
    """Componentwise floor; n(i) <= a(i) < n(i)+1 at every index."""
    a = make(a)
    q = a.const_value
    if q is not None:
        return Hyperinteger.constant(q.numerator // q.denominator)

    def gen(n):
        value = a.at(n)
        return value.numerator // value.denominator

    return Hyperinteger(gen, label=f"floor({a.label})")


def divides(a: Hyperinteger, d: Hyperinteger) -> Callable[[int], bool]:
    """Componentwise divisibility d(i) | a(i); for d(i) = 0 only 0 is divisible."""

    def check(n):
        di = d.at(n)
        ai = a.at(n)
        return ai == 0 if di == 0 else ai % di == 0

    return check


def _eucl_divmod(a: int, d: int):
    q, r = divmod(a, d)
    if r < 0:  # Python's remainder tracks the divisor's sign; we want 0 <= r < |d|
        q, r = q + 1, r - d
    return q, r


def div_rem(a: Hyperinteger, d: Hyperinteger):
    """Componentwise Euclidean division with 0 <= r < |d|."""

    def quot(n):
        di = d.at(n)
        if di == 0:
            raise DivisionByZeroAtIndex(n)
        return _eucl_divmod(a.at(n), di)[0]

    def rem(n):
        di = d.at(n)
        if di == 0:
            raise DivisionByZeroAtIndex(n)
        return _eucl_divmod(a.at(n), di)[1]

    return (Hyperinteger(quot, label=f"({a.label} div {d.label})"),
            Hyperinteger(rem, label=f"({a.label} mod {d.label})"))


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def gcd_bezout(a: Hyperinteger, d: Hyperinteger):
    """Componentwise gcd with Bezout witnesses: g(i) = s(i)*a(i) + t(i)*d(i)."""
    g = Hyperinteger(lambda n: _xgcd(a.at(n), d.at(n))[0],
                     label=f"gcd({a.label},{d.label})")
    s = Hyperinteger(lambda n: _xgcd(a.at(n), d.at(n))[1], label="bezout-s")
    t = Hyperinteger(lambda n: _xgcd(a.at(n), d.at(n))[2], label="bezout-t")
    return g, s, t


def arch_compare(a, b, depth: int = DEFAULT_DEPTH,
                 probes: int = DEFAULT_PROBES) -> ArchClass:
    """Compare archimedean classes: SAME when both ratios stay bounded by the
    probe budget on a witnessed suffix, LOWER when |a/b| drops below 1/probes
    (evidence that a = o(b)), HIGHER symmetrically."""
    a, b = make(a), make(b)
    tiny = Fraction(1, probes)
    big = Fraction(probes)
    qa, qb = a.const_value, b.const_value
    if qa is not None and qb is not None:
        if qa == 0 or qb == 0:
            raise ZeroTailAtDepth("an operand is zero on the whole inspected suffix")
        r = abs(qa) / abs(qb)
        if r < tiny:
            return ArchClass.LOWER
        if r > big:
            return ArchClass.HIGHER
        return ArchClass.SAME
    start = (depth + 1) // 2
    a_zero = all(a.at(n) == 0 for n in range(start, depth + 1))
    b_zero = all(b.at(n) == 0 for n in range(start, depth + 1))
    if a_zero or b_zero:
        raise ZeroTailAtDepth("an operand is zero on the whole inspected suffix")

    unbounded, indeterminate = object(), object()

    def ratio(n):
        x, y = abs(a.at(n)), abs(b.at(n))
        if y == 0:
            return indeterminate if x == 0 else unbounded
        return x / y

    def is_frac(r):
        return r is not unbounded and r is not indeterminate

    if _suffix_witness(ratio, depth, lambda r: is_frac(r) and r < tiny) is not None:
        return ArchClass.LOWER
    higher = lambda r: r is unbounded or (is_frac(r) and r > big)
    if _suffix_witness(ratio, depth, higher) is not None:
        return ArchClass.HIGHER
    same = lambda r: is_frac(r) and tiny <= r <= big
    if _suffix_witness(ratio, depth, same) is not None:
        return ArchClass.SAME
    return ArchClass.UNDETERMINED
