"""Run the codes oracle over all connected graphs up to a given order and compare with the weight bound."""

import argparse
import time

import networkx as nx

from threshold_lab.codes import brute_force_max_weight, meets_degree_hypothesis, weight_bound
from threshold_lab.graph import build_graph


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--pairs", default="3:3,4:3", help="comma-separated s:r pairs")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    pairs = [tuple(int(x) for x in p.split(":")) for p in args.pairs.split(",")]
    t0 = time.perf_counter()
    for s, r in pairs:
        count = tight = bad = 0
        for H in nx.graph_atlas_g():
            n = H.number_of_nodes()
            if n == 0 or n > args.max_n or not nx.is_connected(H):
                continue
            G = build_graph(n, H.edges())
            if not meets_degree_hypothesis(G, s, r):
                continue
            M, _ = brute_force_max_weight(G, s, r + s - 3, budget=None, threads=args.threads)
            bound = weight_bound(n, s, r)
            count += 1
            tight += M == bound
            if M > bound:
                bad += 1
                print(f"counterexample s={s} r={r} edges={sorted(H.edges())} M*={M} bound={bound}")
        print(f"s={s} r={r}: {count} graphs, {tight} tight, {bad} counterexamples")
    print(f"elapsed {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
