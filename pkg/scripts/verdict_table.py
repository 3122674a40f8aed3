"""Print the verdict table (amenability, Haagerup, distortion, compression) for builtin groups.

    python3 scripts/verdict_table.py bs:1,2 bs:2,3 heisenberg z2-f2 tree-amalgam:2,0,0,3
"""
import argparse
from fractions import Fraction

from gbsgroups import gog
from gbsgroups.verdicts import analyze


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("specs", nargs="*",
                    default=["bs:1,2", "bs:2,3", "bs:3,5", "heisenberg", "z2-f2", "tree-amalgam:2,0,0,3"])
    ap.add_argument("--p", default="2")
    ap.add_argument("--depth", type=int, default=6)
    args = ap.parse_args()

    head = f"{'group':22s} {'amenable':13s} {'haagerup':9s} {'lambda':7s} {'exp.dist':9s} {'alpha_p#':9s}"
    print(head)
    print("-" * len(head))
    for spec in args.specs:
        rep = analyze(gog.parse_builtin_spec(spec), args.depth, Fraction(args.p))
        h, d, c = rep["haagerup"], rep["distortion"], rep["compression"]
        sharp = c.as_dict()["alpha_p_sharp"] if c.applicable else "-"
        print(f"{spec:22s} {rep['amenable'].status:13s} {h.haagerup:9s} {str(h.lam):7s} "
              f"{d.exp_distorted:9s} {str(sharp):9s}")


if __name__ == "__main__":
    main()
