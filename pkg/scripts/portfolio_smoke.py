#!/usr/bin/env python3
"""Run the portfolio pipeline on the synthetic returns stand-in."""

import argparse
import subprocess
import sys
from pathlib import Path

from drobayes.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(ROOT / "configs" / "portfolio_synthetic.json"))
    parser.add_argument("--returns", default="data/synthetic_returns.csv")
    parser.add_argument("--out", default="out/portfolio_synthetic")
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    if not Path(args.returns).exists():
        subprocess.check_call(
            [sys.executable, str(ROOT / "scripts" / "make_synthetic_returns.py"),
             "--out", args.returns]
        )
    return cli_main(
        ["portfolio", "--config", args.config, "--out", args.out,
         "--set", f"returns_csv={args.returns}", "--threads", str(args.threads)]
    )


if __name__ == "__main__":
    sys.exit(main())
