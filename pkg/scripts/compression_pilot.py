"""Run the compression estimator on a builtin group and print the rho_hat profile.

    python3 scripts/compression_pilot.py --builtin bs:2,3 --radius 10 --seed 0
"""
import argparse
import json
import time

from gbsgroups import gog
from gbsgroups.embed import estimate_compression, make_map


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--builtin", default="bs:2,3")
    ap.add_argument("--case", default="generic")
    ap.add_argument("--radius", type=int, default=10)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-pairs", type=int, default=10 ** 5)
    args = ap.parse_args()

    g = gog.parse_builtin_spec(args.builtin)
    start = time.perf_counter()
    est = estimate_compression(make_map(g, args.case, p=args.p), args.radius, seed=args.seed,
                               max_pairs=args.max_pairs)
    elapsed = time.perf_counter() - start
    for r, v in est.profile:
        print(f"{r:3d}  {v:10.4f}")
    summary = est.as_dict()
    del summary["profile"]
    summary["seconds"] = round(elapsed, 2)
    print(json.dumps(summary, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
