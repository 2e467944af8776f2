#!/usr/bin/env python3
"""Walk through the canonical-form algebra: absorption, order, flat sums.

Usage: python scripts/wattenberg_demo.py
"""

from fractions import Fraction

from hyperline import extsum as es
from hyperline import seqfield as sf
from hyperline import wattenberg as wb

F = Fraction


def show(label, value):
    print(f"{label:<44} {value}")


def main():
    eps = wb.eps_d()
    delta = wb.delta_d()
    one = wb.embed(1)

    show("eps_d + eps_d", wb.dd_add(eps, eps).render())
    show("eps_d + (-eps_d)", wb.dd_add(eps, wb.dd_neg(eps)).render())
    show("1# + eps_d - eps_d", wb.dd_add(wb.dd_add(one, eps),
                                         wb.dd_neg(eps)).render())
    show("DELTA_d + (-eps_d)", wb.dd_add(delta, wb.dd_neg(eps)).render())
    show("omega# x eps_d", wb.dd_scalar_mul(sf.OMEGA, eps).render())

    x = wb.dd_add(wb.embed(F(7, 2)), eps)
    show("floor(7/2# + eps_d)", wb.dd_floor(x).render())
    show("absorbs(eps_d, 1/(n+1)#)",
         wb.absorbs(eps, wb.embed(sf.RECIPROCAL_SUCC)))
    show("eps_d < DELTA_d", wb.dd_cmp(eps, delta).verdict.value)

    flat = es.flat_sum(es.geom(F(1, 2)))
    show("flat sum of geom(1/2)", flat.value.render())
    show("  eta interval", flat.eta_interval)
    upper, lower = es.upper_lower_sum(es.geom(F(1, 2)))
    show("upper / lower sums", f"{upper.render()}  |  {lower.render()}")

    divergent = es.flat_sum(es.SeriesSpec(lambda n: F(1), "nonneg",
                                          None, "ones"))
    show("flat sum of the all-ones series", divergent.value.render())
    show("  divergent", divergent.divergent)


if __name__ == "__main__":
    main()
