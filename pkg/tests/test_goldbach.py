from fractions import Fraction

import pytest

from hyperline import wattenberg as wb
from hyperline.errors import DepthTooSmall
from hyperline.goldbach import (euler_sieve, flat_identity, goldbach_report,
                                is_perfect_power, partial_sum, perfect_powers,
                                tail_bound)
from hyperline.wattenberg import idem_eq, wst

F = Fraction


def brute_force_powers(limit):
    found = set()
    m = 2
    while m * m <= limit:
        value = m * m
        while value <= limit:
            found.add(value)
            value *= m
        m += 1
    return sorted(found)


class TestPerfectPowers:
    def test_examples(self):
        assert perfect_powers(40) == [4, 8, 9, 16, 25, 27, 32, 36]
        assert perfect_powers(4) == [4]
        assert perfect_powers(3) == []

    def test_sixteen_counted_once(self):
        powers = perfect_powers(20)
        assert powers.count(16) == 1

    def test_exhaustive_oracle_equivalence(self):
        # equality of the full sorted lists at 10^5 settles every limit below
        assert perfect_powers(10 ** 5) == brute_force_powers(10 ** 5)

    def test_is_perfect_power_agrees(self):
        powers = set(perfect_powers(3000))
        for k in range(3000 + 1):
            assert is_perfect_power(k) == (k in powers)


class TestPartialSum:
    def test_first_terms(self):
        assert partial_sum(4) == F(1, 3)
        assert partial_sum(9) == F(1, 3) + F(1, 7) + F(1, 8)
        assert partial_sum(9) == F(101, 168)

    def test_monotone_and_below_one(self):
        previous = F(0)
        for limit in (4, 10, 50, 200, 1000, 5000):
            value = partial_sum(limit)
            assert previous <= value < 1
            previous = value

    def test_residual_within_tail_bound(self):
        for limit in (10, 100, 1000, 10 ** 4, 10 ** 5):
            residual = 1 - partial_sum(limit)
            assert 0 < residual <= tail_bound(limit)

    def test_tail_bound_against_brute_force_window(self):
        # enumerate the actual tail over (limit, 100*limit]; it must stay
        # under the certified bound
        limit = 1000
        window = [k for k in perfect_powers(100 * limit) if k > limit]
        window_sum = sum(F(1, k - 1) for k in window)
        assert window_sum < tail_bound(limit)

    def test_report_fields(self):
        doc = goldbach_report(10 ** 4)
        total = F(doc["partial_sum"])
        assert F(doc["abs_err_vs_1"]) == abs(1 - total)
        assert F(doc["tail_bound"]) == tail_bound(10 ** 4)


class TestEulerSieve:
    def test_first_six_bases(self):
        report = euler_sieve(2000, 6)
        assert report.removed_bases == [2, 3, 5, 6, 7, 10]
        contributions = [s.contribution for s in report.steps]
        assert contributions == [1, F(1, 2), F(1, 4), F(1, 5), F(1, 6), F(1, 9)]

    def test_base_two_tail(self):
        report = euler_sieve(1000, 1)
        # powers of two up to 1000: 2..512, nine of them
        assert report.steps[0].tail == F(1, 2 ** 8)

    def test_bases_skip_perfect_powers(self):
        report = euler_sieve(5000, 25)
        for base in report.removed_bases:
            assert not is_perfect_power(base)

    def test_residual_contains_one(self):
        report = euler_sieve(2000, 12)
        assert report.residual.contains(1)
        assert report.residual.lo <= 1 <= report.residual.hi

    def test_residual_identity(self):
        # the directly-computed residual equals 1 minus the exact coverage gaps
        depth, steps = 500, 8
        report = euler_sieve(depth, steps)
        expected = F(1)
        for step in report.steps:
            largest = 1
            while step.base ** (largest + 1) <= depth:
                largest += 1
            expected -= F(1, (step.base - 1) * step.base ** largest)
        assert report.residual.lo == expected

    def test_tiling_of_covered_range(self):
        # with all bases below 30 chosen, every k in [2, 30] is m^i for
        # exactly one recorded base m
        report = euler_sieve(1000, 23)
        assert report.removed_bases[-1] == 30
        for k in range(2, 31):
            hits = 0
            for m in report.removed_bases:
                value = m
                while value <= k:
                    if value == k:
                        hits += 1
                        break
                    value *= m
            assert hits == 1, k

    def test_contribution_exactness(self):
        # each contribution is the closed geometric sum 1/(m-1); the covered
        # terms plus the recorded tail over-approximate it
        depth = 3000
        report = euler_sieve(depth, 10)
        for step in report.steps:
            covered = F(0)
            value = step.base
            while value <= depth:
                covered += F(1, value)
                value *= step.base
            gap = step.contribution - covered
            assert 0 < gap <= step.tail

    def test_depth_too_small(self):
        with pytest.raises(DepthTooSmall):
            euler_sieve(10, 10)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            euler_sieve(10, 0)
        with pytest.raises(ValueError):
            euler_sieve(5, 6)

    def test_json_shape(self):
        doc = euler_sieve(100, 3).to_dict()
        assert doc["removed_bases"] == [2, 3, 5]
        assert doc["steps"][0] == {"base": 2, "contribution": "1",
                                   "tail_bound": "1/32"}
        assert len(doc["residual"]) == 2


class TestFlatIdentity:
    def test_canonical_form(self):
        result = flat_identity(10 ** 4)
        assert result.value.sign == -1
        assert idem_eq(result.value.delta, wb.EPS_IDEM)
        assert not result.divergent

    def test_eta_interval_contains_one(self):
        result = flat_identity(10 ** 4)
        assert result.eta_interval.contains(1)

    def test_wst_contains_one(self):
        result = flat_identity(10 ** 4)
        interval = wst(result.value, F(1, 100), depth=2048)
        assert interval.contains(1)

    def test_full_scale_identity(self):
        result = flat_identity(10 ** 6)
        assert result.value.sign == -1
        assert idem_eq(result.value.delta, wb.EPS_IDEM)
        assert result.eta_interval.contains(1)
        interval = wst(result.value, F(1, 100), depth=4096)
        assert interval.contains(1)
