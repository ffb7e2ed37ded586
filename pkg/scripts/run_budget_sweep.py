"""Itemized budgets and actual errors over a range of eps on a few families."""

import argparse
import json

from denselogz.experiments import budget_sweep
from denselogz.model import gen_curie_weiss, gen_random_dense, gen_tightness_pair


def instances(n, seed):
    heavy, _ = gen_tightness_pair(n, 3.0, 0.2, 0.25, seed)
    return {
        "curie-weiss b=0.5": gen_curie_weiss(n, 0.5),
        "curie-weiss b=1.5": gen_curie_weiss(n, 1.5),
        "random d=1": gen_random_dense(n, 1.0, seed),
        "random d=0.3": gen_random_dense(n, 0.3, seed),
        "tightness heavy M=3": heavy,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.4, 0.6, 0.8])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-o", "--output", default=None)
    args = ap.parse_args()

    out = {}
    for name, inst in instances(args.n, args.seed).items():
        rows = budget_sweep(inst, args.eps, seed=args.seed)
        out[name] = rows
        for r in rows:
            print(f"{name:22s} eps={r['eps']:.2f} err={r['abs_error']:8.3f} total={r['budget_total']:8.2f} "
                  f"reg={r['budget_regularity']:.2f} stir={r['budget_stirling']:.2f} "
                  f"gran={r['budget_granulation']:.2f} small_n={r['budget_small_n']:.2f} width={r['width']}")
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(out, fh, indent=2, default=float)


if __name__ == "__main__":
    main()
