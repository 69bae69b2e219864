#!/usr/bin/env python3
"""Regenerate the classical q-series fixtures in src/fixtures/.

E4 = 1 + 240 sum sigma_3(m) q^m
E6 = 1 - 504 sum sigma_5(m) q^m
Delta = q prod_(k >= 1) (1 - q^k)^24

The divisor sums come from sympy.divisor_sigma; Delta is expanded with exact
integer arithmetic. Output is canonical JSON, byte-identical to what the
library writes.

Usage: python scripts/generate_fixtures.py [--bound 30] [--out src/fixtures]
"""

import argparse
import os
import sys
from typing import Dict

from loguru import logger
from sympy import divisor_sigma

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "src"))

from handler_helpers import write_model  # noqa: E402
from qexp import scalar_series  # noqa: E402


def eisenstein(k: int, constant: int, bound: int) -> Dict[int, int]:
    values = {0: 1}
    for m in range(1, bound + 1):
        values[m] = constant * int(divisor_sigma(m, k - 1))
    return values


def discriminant(bound: int) -> Dict[int, int]:
    series = [0] * (bound + 1)
    series[0] = 1
    for k in range(1, bound + 1):
        for _ in range(24):
            for m in range(bound, k - 1, -1):
                series[m] -= series[m - k]
    return {m: series[m - 1] for m in range(1, bound + 1) if series[m - 1]}


def main() -> None:
    parser = argparse.ArgumentParser(description="Regenerate the E4, E6 and Delta fixtures")
    parser.add_argument("--bound", type=int, default=30)
    parser.add_argument("--out", default=os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "src",
                                                      "fixtures"))
    args = parser.parse_args()

    fixtures = {
        "e4": eisenstein(4, 240, args.bound),
        "e6": eisenstein(6, -504, args.bound),
        "delta": discriminant(args.bound),
    }
    for name, values in fixtures.items():
        path = os.path.join(args.out, f"{name}.json")
        write_model(path, scalar_series(values, 1, args.bound).to_file_model())
        logger.info(f"wrote {path} ({len(values)} coefficients)")


if __name__ == "__main__":
    main()
