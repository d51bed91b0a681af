"""Tame duality and bar vs periodic cohomology over the exhaustive module corpus."""

import argparse
from collections import Counter

from neronpair.group_cohomology import bar_cohomology, module_corpus, periodic_cohomology, tame_duality


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-module-order", type=int, default=16)
    ap.add_argument("--max-group-order", type=int, default=6)
    ap.add_argument("--degrees", type=int, default=3, help="compare H^r for r < degrees")
    args = ap.parse_args()

    corpus = module_corpus(args.max_module_order, args.max_group_order)
    imperfect = mismatch = 0
    h0_orders = Counter()
    for M in corpus:
        t = tame_duality(M)
        imperfect += not t.perfect
        h0_orders[t.invariants.order] += 1
        mismatch += sum(bar_cohomology(M, r) != periodic_cohomology(M, r) for r in range(args.degrees))
    print(f"{len(corpus)} modules (|M| <= {args.max_module_order}, |G| <= {args.max_group_order})")
    print(f"  imperfect duality pairings: {imperfect}")
    print(f"  bar/periodic mismatches in degrees < {args.degrees}: {mismatch}")
    print("  |H^0| distribution: " + ", ".join(f"{k}:{v}" for k, v in sorted(h0_orders.items())))


if __name__ == "__main__":
    main()
