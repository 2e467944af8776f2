#!/usr/bin/env python3
"""Emit and re-verify nonvanishing certificates for rational combinations
of powers of e.

Usage: python scripts/hermite_certificates.py ["b0,b1,..." ...]

With no arguments runs a default batch, including the convergent pair
-87 + 32e whose value is about -0.015.
"""

import json
import sys
import time
from fractions import Fraction

from hyperline import hermite as hm

DEFAULT_BATCH = ["3,-1", "-87,32", "1,-1,1", "1/2,1/3,-1/7"]


def main():
    batch = sys.argv[1:] or DEFAULT_BATCH
    for text in batch:
        coeffs = [Fraction(part) for part in text.split(",")]
        start = time.perf_counter()
        cert = hm.nonvanish_certificate(coeffs)
        doc = cert.to_dict()
        doc["seconds"] = round(time.perf_counter() - start, 4)
        doc["reverified"] = hm.verify_certificate(
            hm.certificate_from_dict(cert.to_dict()))
        value = hm.combination_interval(coeffs, Fraction(1, 10 ** 40))
        doc["value_float"] = float(value.mid)
        print(json.dumps(doc))


if __name__ == "__main__":
    main()
