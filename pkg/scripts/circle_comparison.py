"""Compare the diagonal of the bisimplicial circle construction with the
bar construction of the pi0 monoid, for a free monoid and the terminal one.

Usage: python3 scripts/circle_comparison.py [--bound 2] [--generator 1,1]
"""

import argparse
import json
import sys

from jgamma.gammacat import gamma_circle
from jgamma.jmonoid import free_monoid, terminal_monoid
from jgamma.permcat import JObject
from jgamma.topo import homology


def summarize(name, A, bound):
    diag, bar = gamma_circle(A, bound, 2, 2)
    return {
        "monoid": name,
        "diagonal_cells": [diag.n_cells(m) for m in range(3)],
        "diagonal_h0": str(homology(diag, 0)),
        "diagonal_h1": str(homology(diag, 1)),
        "bar_h1": str(homology(bar, 1)),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bound", type=int, default=2)
    parser.add_argument("--generator", default="1,1")
    args = parser.parse_args(argv)

    m1, m2 = (int(v) for v in args.generator.split(","))
    rows = [
        summarize(f"free({m1},{m2})", free_monoid(JObject(m1, m2), args.bound), args.bound),
        summarize("terminal", terminal_monoid("J", args.bound), args.bound),
    ]
    print(json.dumps({"schema": "jgamma/circle-comparison/v1", "rows": rows}, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
