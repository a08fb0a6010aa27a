"""Random-set baseline against the explicit construction across several epsilon values.

    python scripts/baseline_vs_explicit.py --field 31 --n 4 --seeds 20
"""

import argparse
import statistics
from fractions import Fraction

from varevasive import build_construction, parse_field
from varevasive.verify import random_baseline


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", default="31")
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--trials", type=int, default=10**4)
    ap.add_argument("--eps", default="1/4,1/2,3/4")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    f = parse_field(args.field)
    c = build_construction(f, args.n, args.k, args.d)
    print(f"explicit set: |U'|={c.size} exponents={c.plan.exponents}")
    print(f"{'eps':>5} {'|S|':>8} {'lemma':>8} {'random max':>10} {'median':>7} {'explicit max':>12}")
    for text in args.eps.split(","):
        eps = Fraction(text)
        rep = random_baseline(f, args.n, args.k, args.d, eps, list(range(args.seeds)), args.trials, c, args.workers)
        rand = rep.per_seed_max
        expl = max(r["max_explicit"] for r in rep.rows)
        lemma = "-" if rep.lemma_bound is None else str(rep.lemma_bound)
        print(f"{text:>5} {rep.set_size:>8d} {lemma:>8} {max(rand):>10d} {statistics.median(rand):>7} {expl:>12d}")


if __name__ == "__main__":
    main()
