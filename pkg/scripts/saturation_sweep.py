"""Saturate random edge orders and compare the two maximality tests; report degree ratios."""

import argparse
import random
from fractions import Fraction

from threshold_lab.corpus import random_free
from threshold_lab.graph import min_degree
from threshold_lab.saturation import is_maximal_free, is_maximal_free_by_addition


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cycle", type=int, default=5)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--max-n", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    disagree = 0
    best = Fraction(0)
    for trial in range(args.trials):
        n = rng.randint(args.cycle, args.max_n)
        G = random_free(n, args.cycle, rng.randrange(1 << 30))
        a = is_maximal_free(G, args.cycle)
        disagree += a != is_maximal_free_by_addition(G, args.cycle)
        ratio = Fraction(min_degree(G), n)
        best = max(best, ratio)
        print(f"trial {trial:3d} n={n:3d} m={G.m:4d} delta/n={ratio} maximal={a[0]}")
    print(f"disagreements {disagree}; largest delta/n {best}")


if __name__ == "__main__":
    main()
