"""Verify both coverings on a range of truncated balls.

For each tree radius and height window, reports the interior size, whether
the maps onto L and K (corrected rule) pass, and how many interior vertices
see an edge-end collision under the literal K rule.
"""

import argparse

from nonleighton.bsball import CORRECTED, LITERAL, bs_ball, covering_to_K, covering_to_L, labeled_tree_ball
from nonleighton.covers import verify_covering


def main():
    ap = argparse.ArgumentParser(description="scan truncated balls")
    ap.add_argument("--radii", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--heights", type=int, nargs="+", default=[4, 8, 16], help="half-widths h, window -h..h")
    args = ap.parse_args()

    print(f"{'r':>2} {'h':>3} {'vertices':>9} {'interior':>9} {'L':>5} {'K':>5} {'literal hits':>13}")
    for r in args.radii:
        tree = labeled_tree_ball(r)
        for h in args.heights:
            ball = bs_ball(tree, -h, h)
            ok_L = verify_covering(covering_to_L(ball)).passed
            ok_K = verify_covering(covering_to_K(ball, CORRECTED)).passed
            lit = verify_covering(covering_to_K(ball, LITERAL))
            hits = {f.location for f in lit.errors() if f.message == "edge-end collision"} & ball.interior
            print(f"{r:>2} {h:>3} {len(ball.complex.vertices):>9} {len(ball.interior):>9} "
                  f"{str(ok_L):>5} {str(ok_K):>5} {len(hits):>6}/{len(ball.interior)}")


if __name__ == "__main__":
    main()
