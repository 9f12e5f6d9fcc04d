#!/usr/bin/env python3
"""Run every bundled scenario in scenarios/ and print the summaries.

Usage: python scripts/run_demo_scenarios.py [--out DIR]
"""

import argparse
from pathlib import Path

from ineqlab import parse_scenario, run_scenario

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "scenarios"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/scenarios")
    args = parser.parse_args()
    for path in sorted(SCENARIO_DIR.glob("*.scn")):
        config = parse_scenario(path.read_text(encoding="utf-8"))
        artifacts = run_scenario(config, args.out)
        print(artifacts.summary)


if __name__ == "__main__":
    main()
