#!/usr/bin/env python3
"""Plot the merged bound curves from a `betamin figure1` CSV.

Usage: python docs/plot_figure1.py curves.csv [out.png]
"""

import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def column(rows, name):
    return [(float(r["beta"]), float(r[name])) for r in rows if r[name] != ""]


def main(argv):
    src = argv[1] if len(argv) > 1 else "curves.csv"
    dst = argv[2] if len(argv) > 2 else "curves.png"
    with open(src) as fh:
        rows = list(csv.DictReader(fh))
    grid = [r for r in rows if r["is_special_point"] != "true"]
    special = [r for r in rows if r["is_special_point"] == "true"]

    fig, ax = plt.subplots(figsize=(9, 5.5))
    for name, label, style in (
            ("dbar_betaE", "greedy average", "k-"),
            ("coverage_upper", "coverage bound", "y.-"),
            ("thm2_upper", "run-replacement bound", "r-"),
            ("thm3_lower", "conditional lower bound", "b-")):
        pts = column(grid, name)
        if pts:
            ax.plot(*zip(*pts), style, label=label, linewidth=1.2,
                    markersize=3)
    if special:
        pts = column(special, "dbar_betaE")
        ax.plot(*zip(*pts), "ko", markersize=6,
                label="greedy value optimal")
    ax.set_xlabel("base")
    ax.set_ylabel("digit average")
    ax.legend(loc="upper left")
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(dst, dpi=150)
    print(f"wrote {dst}")


if __name__ == "__main__":
    main(sys.argv)
