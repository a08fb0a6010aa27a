"""Observed maxima for bucketed constructions against the product bound.

Records how far below d^(k+1) * (d_1 ... d_k)^k the sampled lines and curves land.

    python scripts/bucketed_maxima.py --trials 20000
"""

import argparse

from varevasive import build_construction, make_field, theoretical_bound
from varevasive.verify import sweep_curves, sweep_flats

CASES = [
    # (q, n, k, d, m)
    (11, 4, 1, 1, 2),
    (13, 6, 1, 1, 2),
    (13, 6, 1, 1, 3),
    (13, 6, 2, 1, 3),
    (31, 4, 1, 2, 2),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    print(f"{'q':>3} {'n':>2} {'k':>2} {'d':>2} {'m':>2}  exponents        bound  flats  curves")
    for q, n, k, d, m in CASES:
        c = build_construction(make_field(q), n, k, d, m)
        flats = sweep_flats(c, mode="sampled", trials=args.trials, seed=args.seed, workers=args.workers)
        curves = sweep_curves(c, d, args.trials, seed=args.seed, workers=args.workers) if k == 1 else None
        cmax = "-" if curves is None else str(curves.max_intersection)
        print(f"{q:>3} {n:>2} {k:>2} {d:>2} {m:>2}  {str(c.plan.exponents):15s} {theoretical_bound(c):>6d} "
              f"{flats.max_intersection:>6d} {cmax:>7s}")


if __name__ == "__main__":
    main()
