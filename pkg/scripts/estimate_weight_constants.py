#!/usr/bin/env python3
"""Tabulate every class constant for the catalog weights at a chosen
resolution: A_p^{+/-} (Sawyer and general form), both-sided A_p, A_1^+,
RH_infty^+, and the gamma form.

Usage:
    python scripts/estimate_weight_constants.py [--n 4096] [--p 2.0]
"""

import argparse

from onesided.weights import (TripleSearchConfig, WeightSpec, a1_constant,
                              ap_both_constant, ap_general_constant,
                              ap_minus_constant, ap_plus_constant,
                              gamma_fourpoint_constant, rh_infty_constant)

CATALOG = [
    ("1", WeightSpec.constant(1.0)),
    ("e^x", WeightSpec.exponential(1.0)),
    ("e^-x", WeightSpec.exponential(-1.0)),
    ("|x|^0.5", WeightSpec.power(0.5)),
    ("|x|^1.5", WeightSpec.power(1.5)),
    ("e^x|x|^0.3", WeightSpec.product(1.0, 0.3, 1.0)),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--window", default="-8,8")
    args = ap.parse_args()
    lo, hi = (float(v) for v in args.window.split(","))
    h_min = max(0.05, 2.0 * (hi - lo) / (args.n - 1))
    cfg = TripleSearchConfig((lo, hi), n_anchor=33, n_h=12, h_min=h_min,
                             n_grid=args.n)
    cols = ("weight", "A_p^+", "A_p^-", "A_p^+gen", "A_p", "A_1^+",
            "RH_inf^+", "gamma4pt")
    print(("{:>12}" * len(cols)).format(*cols))
    for name, w in CATALOG:
        vals = [
            ap_plus_constant(w, args.p, cfg),
            ap_minus_constant(w, args.p, cfg),
            ap_general_constant(w, args.p, "plus", cfg),
            ap_both_constant(w, args.p, cfg),
            a1_constant(w, "plus", cfg),
            rh_infty_constant(w, cfg),
            gamma_fourpoint_constant(w, args.p, cfg),
        ]
        cells = [f"{r.constant:.4g}" + ("" if r.finite_flag else "*")
                 for r in vals]
        print(("{:>12}" * len(cols)).format(name, *cells))
    print("(* exceeded the divergence ceiling "
          f"{cfg.ceiling:g} -- not in the class at this resolution)")


if __name__ == "__main__":
    main()
