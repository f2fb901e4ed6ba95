"""Betti ladders for the three built-in products, with timings.

    python scripts/run_ladder.py --max-points 4 --mode reduced
"""

import argparse
import time

from kunneth.e2 import e2_page
from kunneth.modules import circle_module, module_from_operad
from kunneth.operads import ass_operad


def poly(coeffs):
    return " + ".join(f"{c}t^{d}" if d else str(c) for d, c in enumerate(coeffs) if c)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-points", type=int, default=4)
    ap.add_argument("--mode", default="reduced", choices=("reduced", "sequential"))
    args = ap.parse_args()
    ass = ass_operad(max(args.max_points, 1))
    line = module_from_operad(ass, args.max_points)
    circle = circle_module(args.max_points, ass)
    for name, left, right in (("R x R", line, line), ("S1 x R", circle, line), ("S1 x S1", circle, circle)):
        for k in range(0, args.max_points + 1):
            t0 = time.perf_counter()
            table = e2_page(left, right, k, 2 * k, mode=args.mode)
            dt = time.perf_counter() - t0
            print(f"{name:8s} k={k}  betti={table.totals()!s:24s} P(t) = {poly(table.totals()):32s} {dt:7.2f}s")


if __name__ == "__main__":
    main()
