#!/usr/bin/env python3
"""Dyadic-piece decay campaign: fit log2 ||T_j f|| / ||f|| against j
for the oscillatory operator with phase a x y.

Usage:
    python scripts/run_decay_campaign.py [--j-max 8] [--coeff 1.0] [--weight e^x]
"""

import argparse

from onesided.experiments import TestFunctionFamily, dyadic_decay
from onesided.operators import PolynomialPhase, oscillating_log_kernel
from onesided.weights import WeightSpec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--j-max", type=int, default=8)
    ap.add_argument("--coeff", type=float, default=1.0)
    ap.add_argument("--weight", default=None,
                    help="catalog tag like e^x, or omit for unweighted")
    ap.add_argument("--count", type=int, default=16)
    ap.add_argument("--seed", type=int, default=20240901)
    args = ap.parse_args()

    w = None
    if args.weight == "e^x":
        w = WeightSpec.exponential(1.0)
    elif args.weight:
        w = WeightSpec.power(float(args.weight))
    window = (-(2.0 ** args.j_max) - 2.0, 2.0)
    n = 2 ** 14 if args.j_max >= 7 else 2 ** 13
    fam = TestFunctionFamily("random-bump-sums", args.count, args.seed, (0.0, 1.0))
    fit = dyadic_decay(oscillating_log_kernel("plus"),
                       PolynomialPhase.monomial(1, 1, args.coeff),
                       2.0, w, fam, args.j_max, window, n)
    for j, lg in zip(fit.j_values, fit.log2_ratios):
        print(f"j={j:2d}  log2 ratio = {lg:8.3f}")
    print(f"fitted slope {fit.slope:.3f}, intercept {fit.intercept:.3f} "
          f"(window {window}, n={n})")


if __name__ == "__main__":
    main()
