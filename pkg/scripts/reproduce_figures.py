#!/usr/bin/env python3
"""Regenerate every book figure's data and chart files.

Usage: python scripts/reproduce_figures.py [--out DIR] [--format csv|svg|both]
"""

import argparse

from ineqlab import FIGURE_NAMES, figure


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/figures")
    parser.add_argument("--format", choices=("csv", "svg", "both"),
                        default="both")
    args = parser.parse_args()
    for name in FIGURE_NAMES:
        for path in figure(name, args.out, fmt=args.format):
            print(f"wrote {path}")


if __name__ == "__main__":
    main()
