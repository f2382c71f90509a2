"""Matplotlib renderers for gap curves and time-to-accuracy plots."""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = ["FigureSpec", "render_gap_figure", "render_tte_figure"]

_KINDS = ("gap_curves", "tte_surface", "tte_slice")


@dataclass(frozen=True)
class FigureSpec:
    """One figure: input CSVs, what to draw, and where to write the image."""

    inputs: tuple
    kind: str  # 'gap_curves' | 'tte_surface' | 'tte_slice'
    out: str
    log_y: bool = True
    log_x: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def render_gap_figure(summary_path, out_path, log_y=True):
    """Median gap curves per method with shaded q10-q90 bands, x in passes."""
    from .io import read_summary

    summaries = read_summary(summary_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for method in sorted(summaries):
        s = summaries[method]
        if len(s["passes"]) == 1:
            yerr = np.vstack([s["median"] - s["q10"], s["q90"] - s["median"]])
            ax.errorbar(
                s["passes"], s["median"], yerr=yerr, fmt="o", capsize=3, label=method
            )
        else:
            (line,) = ax.plot(s["passes"], s["median"], label=method)
            ax.fill_between(
                s["passes"], s["q10"], s["q90"], alpha=0.25, color=line.get_color()
            )
    if log_y:
        ax.set_yscale("log")
    ax.set_xlabel("passes over the data")
    ax.set_ylabel("objective gap (median, q10-q90)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render_tte_figure(tte_path, kind, out_path):
    """Median iterations-to-accuracy: (alpha0, beta) surface or beta=0.5 slice.

    Capped replications enter the median at the cap value, so saturated grid
    cells show up as a plateau.
    """
    from .io import median_over_reps, read_tte

    if kind not in ("surface", "slice"):
        raise ValueError(f"unknown tte figure kind {kind!r}")
    medians = median_over_reps(read_tte(tte_path))
    methods = sorted({m for m, _, _ in medians})

    if kind == "slice":
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for method in methods:
            pts = sorted(
                (a0, T) for (m, a0, beta), T in medians.items()
                if m == method and beta == 0.5
            )
            if not pts:
                raise ValueError(f"{tte_path}: no beta = 0.5 rows for {method!r}")
            a0s, ts = zip(*pts)
            ax.plot(a0s, ts, marker="o", label=method)
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.set_xlabel(r"initial stepsize $\alpha_0$")
        ax.set_ylabel(r"median $T(\epsilon)$  (beta = 0.5)")
        ax.legend()
    else:
        fig = plt.figure(figsize=(7.0, 5.0))
        ax = fig.add_subplot(projection="3d")
        for method in methods:
            cells = {(a0, b): T for (m, a0, b), T in medians.items() if m == method}
            a0s = sorted({a0 for a0, _ in cells})
            betas = sorted({b for _, b in cells})
            B, A = np.meshgrid(betas, np.log2(a0s))
            Z = np.array([[cells[(a0, b)] for b in betas] for a0 in a0s])
            if Z.size == 1:
                ax.scatter(A.ravel(), B.ravel(), Z.ravel(), label=method)
            else:
                ax.plot_surface(A, B, Z, alpha=0.6, label=method)
        ax.set_xlabel(r"$\log_2 \alpha_0$")
        ax.set_ylabel(r"$\beta$")
        ax.set_zlabel(r"median $T(\epsilon)$")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render(spec):
    """Render one FigureSpec."""
    if spec.kind == "gap_curves":
        return render_gap_figure(spec.inputs[0], spec.out, log_y=spec.log_y)
    return render_tte_figure(
        spec.inputs[0], "surface" if spec.kind == "tte_surface" else "slice", spec.out
    )
