#!/usr/bin/env python3
"""Sweep the main-term residue over a range of levels and emit CSV.

Example:
    python scripts/residue_sweep.py --q1 1 --q2 1 --k 10 \
        --levels 100,316,1000,3162,10000,31623,100000
"""

import argparse
import sys

from siegelsums.petersson import main_term_residue, leading_coeff_fit


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q1", type=int, default=1)
    ap.add_argument("--q2", type=int, default=1)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--levels", type=str,
                    default="100,316,1000,3162,10000,31623,100000")
    ap.add_argument("--poly", choices=("1-s^2", "(1-s)^2"), default="(1-s)^2")
    args = ap.parse_args()
    levels = [float(x) for x in args.levels.split(",")]
    print("N,residue")
    for n in levels:
        rep = main_term_residue(args.q1, args.q2, n, args.k, poly=args.poly)
        print(f"{n},{rep.residue!r}")
    fit = leading_coeff_fit(args.q1, args.q2, args.k, levels=levels,
                            poly=args.poly)
    print(f"# degree {fit.degree} fit in log N, leading coefficient "
          f"{fit.leading!r}, max residual {fit.residual:.3e}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
