"""Figure rendering for surface samples and circle-check reports.

Renders straight to image files (Agg backend, never a display); the CLI's
surface subcommand uses this so every exported mesh comes with a picture
of the sampled patch and of the per-curve fit quality.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402


def plot_sample(sample, path, title: str | None = None) -> None:
    """Draw the sample's points and iso-curves in 3D and save the figure."""
    fig = plt.figure(figsize=(7, 6))
    ax = fig.add_subplot(projection="3d")
    pts = sample.points
    ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=2, c="0.6",
               depthshade=False)
    for curve in sample.curves_u:
        seg = pts[list(curve)]
        ax.plot(seg[:, 0], seg[:, 1], seg[:, 2], lw=0.8, color="tab:blue")
    for curve in sample.curves_v:
        seg = pts[list(curve)]
        ax.plot(seg[:, 0], seg[:, 1], seg[:, 2], lw=0.8, color="tab:orange")
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    mid, half = (lo + hi) / 2.0, max(float((hi - lo).max()) / 2.0, 1e-9)
    ax.set_xlim(mid[0] - half, mid[0] + half)
    ax.set_ylim(mid[1] - half, mid[1] + half)
    ax.set_zlim(mid[2] - half, mid[2] + half)
    ax.set_title(title or f"surface sample, family {sample.family}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_report(report: dict, path) -> None:
    """Plot per-curve circle residuals against the tolerance, and the
    distribution of transversality angles at curve crossings."""
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    residuals = np.array([c["max_residual"] for c in report["curves"]])
    if residuals.size:
        xs = np.arange(residuals.size)
        colors = ["tab:green" if c["cocircular"] else "tab:red"
                  for c in report["curves"]]
        left.bar(xs, np.maximum(residuals, 1e-18), color=colors)
        left.set_yscale("log")
    left.axhline(report["tol"], color="black", ls="--", lw=1,
                 label=f"tol {report['tol']:g}")
    left.set_xlabel("iso-curve")
    left.set_ylabel("max circle residual")
    left.legend(loc="upper right")
    angles = [p["angle"] for p in report["pairs"] if p["angle"] is not None]
    if angles:
        right.hist(np.degrees(angles), bins=24, color="tab:blue")
    right.set_xlabel("transversality angle at crossings (degrees)")
    right.set_ylabel("curve pairs")
    fig.suptitle(f"family {report['family']}: "
                 f"{report['points']} points, "
                 f"{'all' if report['all_cocircular'] else 'NOT all'} "
                 "iso-curves cocircular")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
