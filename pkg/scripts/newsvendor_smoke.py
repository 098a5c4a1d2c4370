#!/usr/bin/env python3
"""Run the newsvendor smoke experiment and print the summary table."""

import argparse
import csv
import sys
from pathlib import Path

from drobayes.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(ROOT / "configs" / "newsvendor_smoke.json"))
    parser.add_argument("--out", default="out/newsvendor_smoke")
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    code = cli_main(
        ["newsvendor", "--config", args.config, "--out", args.out,
         "--threads", str(args.threads)]
    )
    if code != 0:
        return code
    with open(Path(args.out) / "summary.csv", newline="") as fh:
        for row in csv.reader(fh):
            print(",".join(row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
