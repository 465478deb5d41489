"""Mining-report rendering: canonical JSON, per-n CSV files, and figures."""

from __future__ import annotations

import os
from typing import Any, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from . import canonical  # noqa: E402
from .lj_energy import format_positions_csv  # noqa: E402


def render_cluster_png(coords_micro: Sequence[int], path: str, title: str = "") -> None:
    """Orthographic 3D scatter of a fixed-point cluster, sigma units."""
    xs = [c / 1e6 for c in coords_micro[0::3]]
    ys = [c / 1e6 for c in coords_micro[1::3]]
    zs = [c / 1e6 for c in coords_micro[2::3]]
    fig = plt.figure(figsize=(5, 5))
    ax = fig.add_subplot(projection="3d")
    ax.scatter(xs, ys, zs, s=120, depthshade=True, edgecolors="k")
    ax.set_xlabel(r"x / $\sigma$")
    ax.set_ylabel(r"y / $\sigma$")
    ax.set_zlabel(r"z / $\sigma$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_energy_summary(results: list[dict], path: str) -> None:
    """Best submitted energy vs previously stored energy, per cluster size."""
    sizes = [r["n"] for r in results if "energy" in r]
    mined = [r["energy"] / 1e6 for r in results if "energy" in r]
    stored = [r["stored"] / 1e6 for r in results if "energy" in r and "stored" in r]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if sizes:
        ax.plot(sizes, mined, "o-", label="mined")
        if len(stored) == len(sizes):
            ax.plot(sizes, stored, "s--", label="previously stored")
        ax.legend()
    ax.set_xlabel("cluster size n")
    ax.set_ylabel(r"energy / $\epsilon$")
    ax.set_title("basin-hopping results")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(report: dict[str, Any], out_dir: str,
                 positions: dict[int, Sequence[int]] | None = None) -> str:
    """Write report.json plus per-n CSV position files and figures.

    Returns the report.json path. ``positions`` maps cluster size to the
    mined fixed-point coordinates; every entry gets a CSV and a scatter PNG.
    """
    os.makedirs(out_dir, exist_ok=True)
    report_path = os.path.join(out_dir, "report.json")
    with open(report_path, "wb") as fh:
        fh.write(canonical.dumps_loose(report) + b"\n")
    for n, coords in sorted((positions or {}).items()):
        with open(os.path.join(out_dir, f"positions_n{n}.csv"), "w") as fh:
            fh.write(format_positions_csv(coords))
        render_cluster_png(coords, os.path.join(out_dir, f"cluster_n{n}.png"),
                           title=f"n = {n}")
    render_energy_summary(report.get("results", []),
                          os.path.join(out_dir, "energies.png"))
    return report_path
