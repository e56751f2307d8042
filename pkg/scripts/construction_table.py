"""Print n, minimum degree, stated degree value and exact VC dimension for the partite constructions."""

import argparse
import time

from threshold_lab.constructions import expected_min_degree, lower_even, lower_odd
from threshold_lab.graph import find_cycle_of_length, min_degree
from threshold_lab.vc import vc_dimension


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--m", type=int, nargs="+", default=[3, 4, 5, 6])
    args = ap.parse_args()
    print(f"{'kind':8} {'k':>2} {'m':>2} {'n':>5} {'delta':>6} {'stated':>6} {'vc':>3} {'C3':>4} {'sec':>6}")
    for k in args.k:
        for m in args.m:
            for gen in (lower_even, lower_odd):
                t0 = time.perf_counter()
                G, meta = gen(k, m)
                vc = vc_dimension(G).dimension
                tri = "yes" if find_cycle_of_length(G, 3) else "no"
                print(f"{meta.kind:8} {k:>2} {m:>2} {G.n:>5} {min_degree(G):>6} "
                      f"{expected_min_degree(meta):>6} {vc:>3} {tri:>4} {time.perf_counter() - t0:>6.2f}")


if __name__ == "__main__":
    main()
