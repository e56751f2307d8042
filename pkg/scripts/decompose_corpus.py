"""Decompose every desk-corpus instance and print quotient sizes and verification flags."""

import argparse
import time

from threshold_lab.corpus import desk_corpus
from threshold_lab.partition import BlowupCertificate, decompose_blowup, hitting_set_small_odd


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--schedule", choices=["theorem", "lemma"], default="theorem")
    ap.add_argument("--no-random", action="store_true", help="skip the seeded saturations")
    args = ap.parse_args()
    for inst in desk_corpus(include_random=not args.no_random):
        t0 = time.perf_counter()
        cert = decompose_blowup(inst.graph, inst.k, inst.epsilon, schedule=args.schedule)
        hs = hitting_set_small_odd(inst.graph, inst.k, inst.epsilon)
        if isinstance(cert, BlowupCertificate):
            verdict = f"quotient={cert.minimal_quotient.n} raw={cert.quotient.n} free={cert.c2km1_free}"
        else:
            verdict = f"failure={cert.reason}"
        print(f"{inst.name:16} n={inst.graph.n:3d} eps={inst.epsilon} {verdict} "
              f"|T|={len(hs.removed)} sec={time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
