"""Matplotlib figure rendering for the CLI report paths.

Figures are written as SVG next to the delimited output.  Generation metadata
(timestamps, random hash salts) is pinned so reruns produce stable files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .analysis import BifurcationRow, SADDLE, CENTER_MARGINAL  # noqa: E402

plt.rcParams["svg.hashsalt"] = "enercycle"

_STATE_COLORS = {"Y": "tab:green", "K": "tab:blue", "E": "tab:orange",
                 "k": "tab:blue", "y": "tab:green", "x": "tab:blue"}


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)


def save_trajectory_figure(path, times, states, state_names,
                           baselines: dict[str, float] | None = None,
                           title: str | None = None) -> None:
    """Time series of all state variables with dashed baseline levels."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for i, name in enumerate(state_names):
        color = _STATE_COLORS.get(name, f"C{i}")
        ax.plot(times, states[:, i], color=color, lw=1.2, label=name)
        if baselines and name in baselines:
            ax.axhline(baselines[name], color=color, ls="--", lw=0.8, alpha=0.7)
    ax.set_xlabel("t")
    ax.set_ylabel("state")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", frameon=False)
    _save(fig, path)


def _linestyle(classification: str) -> str:
    if classification == SADDLE:
        return ":"
    if classification == CENTER_MARGINAL:
        return "-."
    return "-" if classification.startswith("stable") else "--"


def save_bifurcation_figure(path, rows: list[BifurcationRow],
                            title: str | None = None) -> None:
    """Fixed-point branches against the control parameter.

    Solid lines mark stable points, dashed unstable, dotted saddles; detected
    cycles are shaded between their production extrema.
    """
    fig, ax = plt.subplots(figsize=(7, 4.5))
    segments: dict[tuple[str, str], list[tuple[float, float]]] = {}
    for row in rows:
        if row.error is not None:
            continue
        for fp in row.fixed_points:
            key = (fp.branch, _linestyle(fp.classification))
            segments.setdefault(key, []).append((row.control_value, fp.Y))
        if row.cycle is not None:
            ax.vlines(row.control_value, row.cycle.y_min, row.cycle.y_max,
                      color="tab:red", alpha=0.25, lw=2)
    colors = {"lower": "C0", "middle": "C1", "upper": "C2"}
    for (branch, style), pts in sorted(segments.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], style,
                color=colors.get(branch, "C3"), lw=1.4)
    control = rows[0].control_name if rows else ""
    ax.set_xlabel(control)
    ax.set_ylabel("equilibrium production")
    if title:
        ax.set_title(title)
    _save(fig, path)


def save_kaldor_figure(path, curves, title: str | None = None) -> None:
    """Overlay of investment and saving against production, one panel per variant.

    curves: list of (variant, K, y, I, S) tuples.
    """
    variants = sorted({c[0] for c in curves})
    fig, axes = plt.subplots(1, len(variants), figsize=(4.2 * len(variants), 3.6),
                             squeeze=False)
    for ax, variant in zip(axes[0], variants):
        for (kind, K, y, I, S) in curves:
            if kind != variant:
                continue
            ax.plot(y, I, color="tab:blue", lw=1.3, label=f"I (K={K:g})")
            ax.plot(y, S, color="tab:red", lw=1.3, ls="--", label=f"S (K={K:g})")
        ax.set_title(variant)
        ax.set_xlabel("Y")
        ax.legend(loc="best", frameon=False, fontsize=8)
    axes[0][0].set_ylabel("I, S")
    if title:
        fig.suptitle(title)
    _save(fig, path)
