#!/usr/bin/env python3
"""Quiver plot of a phase_grid_*.csv file, optionally with trajectories on top.

PD grids are plotted in the (x1, n) plane. OPD grids are plotted in the
(x1, x2) plane for the n slice closest to --n.
"""
import argparse

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("grid")
    ap.add_argument("trajectories", nargs="*")
    ap.add_argument("--n", type=float, default=0.5)
    ap.add_argument("-o", "--out", default=None)
    args = ap.parse_args()

    g = pd.read_csv(args.grid)
    fig, ax = plt.subplots(figsize=(5, 5))
    if "x2" in g.columns:
        level = g["n"].iloc[(g["n"] - args.n).abs().argmin()]
        s = g[g["n"] == level]
        u, v = s["dx1"].to_numpy(), s["dx2"].to_numpy()
        norm = np.hypot(u, v)
        norm[norm == 0] = 1
        ax.quiver(s["x1"], s["x2"], u / norm, v / norm, angles="xy")
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        ax.set_title(f"n = {level:g}")
        for path in args.trajectories:
            t = pd.read_csv(path)
            ax.plot(t["x1"], t["x2"], lw=1)
    else:
        u, v = g["dx1"].to_numpy(), g["dn"].to_numpy()
        norm = np.hypot(u, v)
        norm[norm == 0] = 1
        ax.quiver(g["x1"], g["n"], u / norm, v / norm, angles="xy")
        ax.set_xlabel("x")
        ax.set_ylabel("n")
        for path in args.trajectories:
            t = pd.read_csv(path)
            ax.plot(t["x1"], t["n"], lw=1)
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    if args.out:
        fig.savefig(args.out, dpi=150, bbox_inches="tight")
    else:
        plt.show()


if __name__ == "__main__":
    main()
