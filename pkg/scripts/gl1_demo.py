"""Write the two-generator periodic example to a ring file, then produce
its graded-unit-group report through the command-line interface.

Usage: python3 scripts/gl1_demo.py [--dir .]
"""

import argparse
import os
import sys

from jgamma.cli import main as cli_main
from jgamma.gl1 import GradedUnitGroup


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dir", default=".")
    args = parser.parse_args(argv)

    G = GradedUnitGroup(generators=(("u", 2, 0), ("t", 0, 2)), sign=(0, 1))
    ring = os.path.join(args.dir, "ku.json")
    with open(ring, "w") as fh:
        fh.write(G.to_json())
    print(f"wrote {ring}", file=sys.stderr)
    return cli_main(["gl1", "--ring", ring, "--table"])


if __name__ == "__main__":
    sys.exit(main())
