"""Check the evaluation square for every modulus in a range."""

import argparse
import time

from neronpair.local_field import eval_diagram_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=int, default=2)
    ap.add_argument("--hi", type=int, default=64)
    args = ap.parse_args()

    t = time.perf_counter()
    cases = 0
    failing = []
    for q in range(args.lo, args.hi + 1):
        rep = eval_diagram_report(q)
        cases += rep.cases
        if not rep.commutes:
            failing.append(q)
    print(f"q in [{args.lo}, {args.hi}]: {cases} cases, failing moduli: {failing or 'none'}"
          f" ({time.perf_counter() - t:.1f}s)")


if __name__ == "__main__":
    main()
