"""Regenerate every recipe under docs/recipes as CSV/JSON data.

    python scripts/reproduce_figures.py --out results/

Band recipes run ``bands``; ratchet recipes run both ``magnetize`` and
``spectral``; the dynamics and readout recipes run their own subcommand.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from dtqw_ratchet.cli import main as cli_main

RECIPES = Path(__file__).resolve().parents[1] / "docs" / "recipes"

PLAN = [
    ("m1_bands.cfg", ["bands"]),
    ("m1_magnetization.cfg", ["magnetize", "spectral"]),
    ("m2_bands.cfg", ["bands"]),
    ("m2_ratchet.cfg", ["magnetize", "spectral"]),
    ("m3_bands.cfg", ["bands"]),
    ("m3_ratchet.cfg", ["magnetize", "spectral"]),
    ("m2_dynamics.cfg", ["evolve"]),
    ("m2_readout.cfg", ["spectroscopy"]),
]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results"))
    args = parser.parse_args(argv)
    for recipe, commands in PLAN:
        for cmd in commands:
            t0 = time.perf_counter()
            target = args.out / f"{Path(recipe).stem}_{cmd}"
            code = cli_main([cmd, "--config", str(RECIPES / recipe), "--out", str(target)])
            print(f"{recipe:24s} {cmd:12s} exit={code} {time.perf_counter() - t0:6.2f}s")
            if code:
                return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
