#!/usr/bin/env python3
"""Generate a synthetic weekly-returns CSV shaped like the DowJones dataset.

1363 weeks x 28 assets of correlated Gaussian weekly simple returns; a
stand-in for pipelines and plots when the real dataset is not available.
"""

import argparse
from pathlib import Path

import numpy as np


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/synthetic_returns.csv")
    parser.add_argument("--weeks", type=int, default=1363)
    parser.add_argument("--assets", type=int, default=28)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    drift = rng.uniform(0.0005, 0.003, args.assets)
    market = 0.015 * rng.standard_normal((args.weeks, 1))
    idio = 0.02 * rng.standard_normal((args.weeks, args.assets))
    returns = drift + 0.6 * market + idio

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        fh.write(",".join(f"A{i:02d}" for i in range(args.assets)) + "\n")
        for row in returns:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    print(f"wrote {args.weeks}x{args.assets} returns to {out}")


if __name__ == "__main__":
    main()
