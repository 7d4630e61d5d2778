"""Map the components of the two-coordinate Gamma-space value onto the
degree grid and report which pairs sit inside the window interior.

Usage: python3 scripts/specialness_grid.py [--bound 2] [--output grid.json]
"""

import argparse
import itertools
import json
import sys

from jgamma.catcore import nerve
from jgamma.gammacat import BasedSet, hk_category
from jgamma.permcat import degree
from jgamma.topo import components


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bound", type=int, default=2)
    parser.add_argument("--output", default=None)
    args = parser.parse_args(argv)

    N = args.bound
    w2 = hk_category("J", BasedSet(2), N, sigma_mode="canonical")
    comps = components(nerve(w2.cat, 1))
    pairs = []
    for comp in comps:
        ds = {
            (degree(w2.cat.objects[o].s[0b01]), degree(w2.cat.objects[o].s[0b10]))
            for o in comp
        }
        pairs.append(sorted(ds))
    flat = [p[0] for p in pairs if len(p) == 1]
    interior_limit = N - 1
    interior = sorted(p for p in flat if max(abs(p[0]), abs(p[1])) <= interior_limit)
    expected = sorted(
        itertools.product(range(-interior_limit, interior_limit + 1), repeat=2)
    )
    report = {
        "schema": "jgamma/specialness-grid/v1",
        "bound": N,
        "components": len(comps),
        "degree_pairs_constant_on_components": all(len(p) == 1 for p in pairs),
        "degree_pairs": sorted(flat),
        "interior_bijective": interior == expected,
        "boundary_pairs": sorted(
            p for p in flat if max(abs(p[0]), abs(p[1])) > interior_limit
        ),
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
