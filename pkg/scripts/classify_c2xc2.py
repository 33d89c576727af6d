#!/usr/bin/env python3
"""Tabulate the productivity verdict of every nonzero class of H^n(C2 x C2) for small n.

    python3 scripts/classify_c2xc2.py --field 2^2:1,1,1 --degree 2
"""

import argparse
import time

from prodcoh.acceptance import ring_for
from prodcoh.postnikov import obstruction
from prodcoh.steenrod import is_productive


def main():
    ap = argparse.ArgumentParser(description="Classify classes of H^n(C2 x C2; k).")
    ap.add_argument("--field", default="2")
    ap.add_argument("--degree", type=int, default=2)
    ap.add_argument("--obstruction", action="store_true", help="also run the chain-level obstruction")
    args = ap.parse_args()
    R = ring_for("C2xC2", args.field, 2 * args.degree + 3)
    counts = {}
    t = time.perf_counter()
    for z in R.all_classes(args.degree):
        v = is_productive(z)
        line = f"{str(z):24s} {v.status:4s}"
        if args.obstruction:
            line += "  obstruction " + ("vanishes" if obstruction(z).vanishes else "nonzero")
        print(line)
        counts[v.status] = counts.get(v.status, 0) + 1
    print(f"# {counts} in {time.perf_counter() - t:.1f}s")


if __name__ == "__main__":
    main()
