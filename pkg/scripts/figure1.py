#!/usr/bin/env python
"""Rescaled F_max(G) boundary for d = 2, 4, 8.

Writes one CSV per dimension (axes (d+1)G - 1 and (d+1)F - 1) and, if
matplotlib is installed, a PNG overlaying the three curves.
"""
import argparse
from pathlib import Path

from fidelity_balance.cli import main as cli_main
from fidelity_balance.frontier import frontier_curve

STYLES = {2: "-", 4: "--", 8: ":"}


def plot(out_dir: Path, points: int) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(4.5, 4))
    for d, style in STYLES.items():
        curve = frontier_curve(d, points)
        ax.plot(
            [(d + 1) * p.G - 1 for p in curve],
            [(d + 1) * p.F_max - 1 for p in curve],
            style,
            color="k",
            label=f"d = {d}",
        )
    ax.set_xlabel("(d+1)G - 1")
    ax.set_ylabel("(d+1)F - 1")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_dir / "figure1.png", dpi=150)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="figure1")
    parser.add_argument("--points", type=int, default=201)
    parser.add_argument("--no-plot", action="store_true")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for d in STYLES:
        cli_main(["frontier", "--dim", str(d), "--points", str(args.points),
                  "--out", str(out_dir / f"frontier_d{d}.csv"), "--rescale"])
    if not args.no_plot:
        try:
            plot(out_dir, args.points)
        except ImportError:
            print("matplotlib not available; skipped PNG")
