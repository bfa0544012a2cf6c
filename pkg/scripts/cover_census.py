"""Count finite covers of K and L by number of sheets.

Prints one row per (complex, sheets): relabeling classes of voltage
assignments that lift every cell, and how many of them are connected.
"""

import argparse
import time

from nonleighton.catalog import complex_K, complex_L
from nonleighton.covers import enumerate_covers


def main():
    ap = argparse.ArgumentParser(description="finite cover census for K and L")
    ap.add_argument("--max-sheets", type=int, default=3)
    args = ap.parse_args()

    print(f"{'complex':8} {'sheets':>6} {'classes':>8} {'connected':>10} {'seconds':>8}")
    for name, cx in (("K", complex_K()), ("L", complex_L())):
        for n in range(1, args.max_sheets + 1):
            t0 = time.perf_counter()
            classes = enumerate_covers(cx, n)
            dt = time.perf_counter() - t0
            conn = sum(c.connected for c in classes)
            print(f"{name:8} {n:>6} {len(classes):>8} {conn:>10} {dt:>8.2f}")


if __name__ == "__main__":
    main()
