#!/usr/bin/env python3
"""Sweep the perfect-power reciprocal sum toward 1 and run the Euler sieve.

Usage: python scripts/goldbach_run.py [max_exponent]

Prints one JSON line per decade limit 10^2..10^max_exponent (default 6) with
the exact partial sum, the certified tail bound, and the true residual, then
a sieve report at depth 10^4.
"""

import json
import sys
import time

from hyperline import goldbach as gb


def main():
    max_exp = int(sys.argv[1]) if len(sys.argv) > 1 else 6
    for exp in range(2, max_exp + 1):
        limit = 10 ** exp
        start = time.perf_counter()
        doc = gb.goldbach_report(limit)
        doc["seconds"] = round(time.perf_counter() - start, 4)
        doc["residual_float"] = float(1 - gb.partial_sum(limit))
        print(json.dumps(doc))
    report = gb.euler_sieve(10 ** 4, 20)
    print(json.dumps(report.to_dict()))


if __name__ == "__main__":
    main()
