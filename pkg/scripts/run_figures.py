#!/usr/bin/env python3
"""Write every canned figure sweep into an output directory."""

import argparse
import sys
import time

from gsp_mzi.figures import FIGURE_NAMES, run_figure


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="figures")
    parser.add_argument("--only", nargs="*", default=None, help="subset of figure names")
    args = parser.parse_args()

    names = args.only or FIGURE_NAMES
    for name in names:
        t0 = time.monotonic()
        paths = run_figure(name, args.outdir)
        print(f"{name}: {len(paths)} panel(s) in {time.monotonic() - t0:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
