"""Which bar cup-product conventions satisfy the Leibniz rule?

Three variants are compared on random cochains over the small module corpus:

* ``contra``    sign-free cup, second factor in the contragredient module
                (sigma acts on phi by phi o sigma^{-1});
* ``dual``      sign-free cup, second factor in M* with phi o sigma;
* ``signed``    as ``dual`` but with the extra factor (-1)^{r+s}.

Only ``contra`` makes the evaluation pairing equivariant, and only it passes.
"""

import argparse
import random

from neronpair.fgab import evaluation_pairing
from neronpair.group_cohomology import (
    BarCochain,
    aw_cup_bar,
    bar_differential,
    contragredient_module,
    dual_module,
    module_corpus,
)


def random_cochain(rng, M, r):
    return BarCochain.from_function(M, r, lambda *g: [rng.randrange(o) for o in M.module.orders])


def leibniz_holds(rng, M, N, signed):
    P = evaluation_pairing(M.module)
    r = rng.randint(0, 1)
    s = rng.randint(0, 1 - r)
    u, v = random_cochain(rng, M, r), random_cochain(rng, N, s)

    def cup(a, b):
        return aw_cup_bar(a, b, P, total_degree_sign=signed)

    lhs = bar_differential(cup(u, v))
    rhs = cup(bar_differential(u), v) + cup(u, bar_differential(v)).scale((-1) ** r)
    return (lhs - rhs).is_zero()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    corpus = module_corpus(8, 4)
    failures = {"contra": 0, "dual": 0, "signed": 0}
    for _ in range(args.trials):
        M = rng.choice(corpus)
        state = rng.getstate()
        for name in failures:
            rng.setstate(state)  # same cochains for every variant
            N = contragredient_module(M) if name == "contra" else dual_module(M)
            failures[name] += not leibniz_holds(rng, M, N, signed=name == "signed")
    print(f"{len(corpus)} modules, {args.trials} trials")
    for name, n in failures.items():
        print(f"  {name:7s} Leibniz failures: {n}")


if __name__ == "__main__":
    main()
