"""Figures written to image files (headless matplotlib backend)."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .radius import R_STAR  # noqa: E402


def _circle(ax, r: float, style: str, label: str):
    t = np.linspace(0, 2 * np.pi, 512)
    ax.plot(r * np.cos(t), r * np.sin(t), style, lw=1, label=label)


def plot_roots(roots: np.ndarray, path: str, title: str = "", circles: Sequence[tuple[float, str]] = ()) -> str:
    """Scatter of complex roots with optional reference circles (radius, label)."""
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(roots.real, roots.imag, s=14, color="tab:blue", zorder=3)
    for (r, label), style in zip(circles, ("--", ":", "-.", "-")):
        _circle(ax, r, style, label)
    ax.axhline(0, color="0.8", lw=0.5)
    ax.axvline(0, color="0.8", lw=0.5)
    ax.set_aspect("equal")
    ax.set_xlabel("Re q")
    ax.set_ylabel("Im q")
    if title:
        ax.set_title(title)
    if circles:
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_annulus(reports, path: str, title: str = "") -> str:
    """Min and max root modulus against the index n, with the annulus bounds."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for tilde, marker in ((False, "o"), (True, "x")):
        rows = [r for r in reports if ("~" in r.label) == tilde]
        if not rows:
            continue
        n = [r.n for r in rows]
        name = "tilde" if tilde else "plain"
        ax.plot(n, [r.min_modulus for r in rows], marker, ms=3, ls="", label=f"min |root| ({name})")
        ax.plot(n, [r.max_modulus for r in rows], marker, ms=3, ls="", label=f"max |root| ({name})")
    ax.axhline(reports[0].inner_bound, color="k", ls="--", lw=1, label="inner bound")
    ax.axhline(reports[0].outer_bound, color="k", ls=":", lw=1, label="outer bound")
    ax.set_xlabel("n")
    ax.set_ylabel("|q|")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=7, ncol=2, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_radius_convergence(rows: Sequence[tuple[int, dict]], path: str, exact: float | None = None, title: str = "") -> str:
    """Numeric radius estimates against the number of coefficients."""
    fig, ax = plt.subplots(figsize=(7, 4))
    depth = [d for d, _ in rows]
    for key, label in (("R_root", "root test"), ("R_ratio", "ratio test"), ("R_limsup", "tail maximum")):
        vals = [e.get(key) for _, e in rows]
        if any(v is not None for v in vals):
            ax.plot(depth, [np.nan if v is None else v for v in vals], marker=".", label=label)
    if exact is not None:
        ax.axhline(exact, color="k", ls="--", lw=1, label=f"exact {exact:.6f}")
    ax.set_xlabel("coefficients used")
    ax.set_ylabel("radius estimate")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_scan(radii: Sequence[float], path: str, title: str = "") -> str:
    """Histogram of scanned radii with R* marked."""
    fig, ax = plt.subplots(figsize=(7, 4))
    vals = np.array([r for r in radii if r is not None and np.isfinite(r)])
    ax.hist(vals, bins=40, color="tab:blue", alpha=0.8)
    ax.axvline(R_STAR, color="tab:red", ls="--", label=f"R* = {R_STAR:.6f}")
    ax.set_xlabel("radius of convergence")
    ax.set_ylabel("samples")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
