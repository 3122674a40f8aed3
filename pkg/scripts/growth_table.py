"""Sphere sizes of the Cayley ball and of the Bass-Serre tree ball for builtin groups.

    python3 scripts/growth_table.py --radius 6 bs:1,2 bs:2,3 heisenberg z2-f2
"""
import argparse

from gbsgroups import gog
from gbsgroups.bstree import degree, tree_ball
from gbsgroups.words import ball


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("specs", nargs="*", default=["bs:1,2", "bs:2,3", "heisenberg", "z2-f2"])
    ap.add_argument("--radius", type=int, default=6)
    args = ap.parse_args()

    for spec in args.specs:
        g = gog.parse_builtin_spec(spec)
        b = ball(g, args.radius)
        tb = tree_ball(g, args.radius)
        print(f"{spec}: base vertex degree {degree(g, g.base)}")
        print("   r   |S_r| group   |S_r| tree")
        for r in range(args.radius + 1):
            print(f"{r:4d} {len(b.sphere(r)):14d} {len(tb.sphere(r)):12d}")
        print()


if __name__ == "__main__":
    main()
