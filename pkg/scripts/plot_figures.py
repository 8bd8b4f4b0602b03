#!/usr/bin/env python3
"""Render the figure CSVs in a directory to PNGs (one per panel).

Phase- and z-sweep panels plot value against the swept column directly;
photon-number-axis panels (fig12, fig18) are joined on z with their apn rows
and plotted against the total photon number, with the sql/hl limit curves.
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

CURVE_KEYS = ["family", "s", "m", "n", "eta1", "eta2"]


def curve_label(key) -> str:
    family, s, m, n, eta1, eta2 = key
    bits = [family if family != "gsp" else f"s={s:g} (m,n)=({m:.0f},{n:.0f})"]
    if pd.notna(eta1):
        bits.append(f"eta1={eta1:g}")
    if pd.notna(eta2):
        bits.append(f"eta2={eta2:g}")
    return " ".join(bits)


def sweep_column(df: pd.DataFrame) -> str:
    for column in ("phi", "eta1", "eta2", "z"):
        if column in df and df[column].nunique(dropna=True) > 1:
            return column
    return "z"


def plot_panel(path: Path, outdir: Path):
    df = pd.read_csv(path)
    df = df[pd.to_numeric(df["value"], errors="coerce").notna()].copy()
    df["value"] = df["value"].astype(float)
    main_metrics = [m for m in df["metric"].unique() if m not in ("apn", "sql", "hl")]
    apn_axis = bool(main_metrics) and "apn" in set(df["metric"]) and "sql" in set(df["metric"])

    fig, ax = plt.subplots(figsize=(6, 4))
    if apn_axis:
        metric = main_metrics[0]
        apn = df[df.metric == "apn"].set_index(["family", "s", "m", "n", "z"])["value"]
        for key, curve in df[df.metric == metric].groupby(CURVE_KEYS, dropna=False):
            x = [2.0 * apn.get(tuple(key[:4]) + (z,)) for z in curve["z"]]
            ax.plot(x, curve["value"], label=curve_label(key))
        limits = df[df.metric.isin(["sql", "hl"])]
        for metric_name, group in limits.groupby("metric"):
            first = group.groupby("z")["value"].first()
            apn_first = df[df.metric == "apn"].groupby("z")["value"].first()
            ax.plot(2.0 * apn_first.loc[first.index], first.values, "--", label=metric_name)
        ax.set_xlabel("total photon number")
        ax.set_yscale("log")
    else:
        metric = main_metrics[0] if main_metrics else df["metric"].iloc[0]
        sub = df[df.metric == metric]
        x = sweep_column(sub)
        for key, curve in sub.groupby(CURVE_KEYS, dropna=False):
            ax.plot(curve[x], curve["value"], label=curve_label(key))
        ax.set_xlabel({"phi": "detection phase", "z": "squeezing parameter"}.get(x, x))
        if metric.startswith("sensitivity"):
            ax.set_yscale("log")
    ax.set_ylabel(metric)
    ax.set_title(path.stem)
    ax.legend(fontsize=6)
    fig.tight_layout()
    out = outdir / f"{path.stem}.png"
    fig.savefig(out, dpi=200)
    plt.close(fig)
    print(f"wrote {out}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("directory", type=Path)
    args = parser.parse_args()
    for path in sorted(args.directory.glob("fig*.csv")):
        plot_panel(path, args.directory)
    return 0


if __name__ == "__main__":
    sys.exit(main())
