"""The six figure builders.

Every figure is rendered as a deterministic SVG: fixed style, fixed hash
salt, no date metadata, so identical inputs give identical bytes.
Multi-seed tables are drawn as a mean line with per-seed scatter.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .io import FigureInputError, ccdf, load_sweep, load_vitality

# Empirically estimated threshold band: repost thresholds matching
# observed tie-strength differences fall in this range.
TAU_BAND = (0.05, 0.08)

COLORS = {"anger": "#c0392b", "joy": "#2980b9"}

_STYLE = {
    "figure.dpi": 100,
    "svg.hashsalt": "emosim-figures",
    "font.size": 9,
    "axes.titlesize": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "lines.linewidth": 1.6,
}

FIGURE_KINDS = ("strength", "diff", "vitality", "shares", "equal_prior", "gap")


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str


def render(spec: FigureSpec) -> str:
    """Build one figure and write it; returns the output path."""
    if spec.kind not in FIGURE_KINDS:
        raise FigureInputError(f"unknown figure kind {spec.kind!r}; "
                               f"expected one of {', '.join(FIGURE_KINDS)}")
    if not spec.inputs:
        raise FigureInputError("at least one --input table is required")
    builder = _BUILDERS[spec.kind]
    with plt.rc_context(_STYLE):
        fig = builder(spec.inputs)
        try:
            fig.savefig(spec.output, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return spec.output


def _seed_scatter(ax, table, column, color):
    for value in table.values():
        points = table.column(column, value)
        ax.plot([value] * len(points), points, linestyle="none", marker="o",
                markersize=2.5, alpha=0.35, color=color)


def _curve_with_seeds(ax, table, column, color, label):
    xs, ys = table.mean_curve(column)
    _seed_scatter(ax, table, column, color)
    ax.plot(xs, ys, marker="o", markersize=4, color=color, label=label)


def _share_panels(table):
    fig, axes = plt.subplots(1, 3, figsize=(9.6, 3.0), constrained_layout=True)
    panels = (("retweet_share", "share of reposts"),
              ("tweet_share", "share of all messages"),
              ("user_share", "share of dominated users"))
    for ax, (metric, title) in zip(axes, panels):
        for emotion in ("anger", "joy"):
            _curve_with_seeds(ax, table, f"{emotion}_{metric}",
                              COLORS[emotion], emotion)
        ax.set_xlabel(table.variable)
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
    axes[0].legend()
    return fig


def build_strength(inputs):
    needed = [f"{e}_{m}" for e in ("anger", "joy")
              for m in ("mean_cf", "recip", "retw_norm")]
    table = load_sweep(inputs[0], needed_columns=needed)
    fig, axes = plt.subplots(1, 3, figsize=(9.6, 3.0), constrained_layout=True)
    panels = (("mean_cf", "common friends"),
              ("recip", "reciprocity proportion"),
              ("retw_norm", "normalized prior retweets"))
    for ax, (metric, title) in zip(axes, panels):
        for emotion in ("anger", "joy"):
            _curve_with_seeds(ax, table, f"{emotion}_{metric}",
                              COLORS[emotion], emotion)
        ax.set_xlabel(table.variable)
        ax.set_ylabel("mean tie strength")
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
    axes[0].legend()
    return fig


def build_diff(inputs):
    needed = [f"{e}_{m}" for e in ("anger", "joy")
              for m in ("mean_cf", "recip", "retw_norm")]
    table = load_sweep(inputs[0], needed_columns=needed)
    fig, ax = plt.subplots(figsize=(4.8, 3.2), constrained_layout=True)
    styles = (("mean_cf", "common friends", "#2c3e50", "-"),
              ("recip", "reciprocity", "#8e44ad", "--"),
              ("retw_norm", "retweets", "#16a085", ":"))
    for metric, label, color, linestyle in styles:
        xs = []
        ys = []
        for value in table.values():
            joy = table.column(f"joy_{metric}", value)
            anger = table.column(f"anger_{metric}", value)
            if joy and anger:
                xs.append(value)
                ys.append(sum(joy) / len(joy) - sum(anger) / len(anger))
        ax.plot(xs, ys, label=label, color=color, linestyle=linestyle, marker="o",
                markersize=3.5)
    band = ax.axvspan(TAU_BAND[0], TAU_BAND[1], color="#f1c40f", alpha=0.25)
    band.set_gid("tau-band")
    ax.axhline(0.0, color="0.6", linewidth=0.8)
    ax.set_xlabel(table.variable)
    ax.set_ylabel("joy minus anger mean strength")
    ax.legend()
    ax.grid(True, alpha=0.3)
    return fig


def build_vitality(inputs):
    table = load_vitality(inputs[0])
    fig, ax = plt.subplots(figsize=(4.8, 3.6), constrained_layout=True)
    plotted = 0
    for emotion in ("anger", "joy"):
        xs, ys = ccdf(table.group(emotion))
        if xs:
            ax.loglog(xs, ys, marker="o", markersize=3, color=COLORS[emotion],
                      label=f"{emotion}-dominated")
            plotted += 1
    if plotted == 0:
        plt.close(fig)
        raise FigureInputError(f"{table.path}: no anger- or joy-dominated users")
    ax.set_xlabel("vitality (posts + reposts)")
    ax.set_ylabel("P(V >= v)")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return fig


def build_shares(inputs):
    needed = [f"{e}_{m}" for e in ("anger", "joy")
              for m in ("retweet_share", "tweet_share", "user_share")]
    return _share_panels(load_sweep(inputs[0], needed_columns=needed))


def build_equal_prior(inputs):
    return build_shares(inputs)


def build_gap(inputs):
    needed = [f"{e}_{m}" for e in ("anger", "joy")
              for m in ("tweet_share", "user_share")]
    table = load_sweep(inputs[0], needed_columns=needed)
    fig, axes = plt.subplots(1, 2, figsize=(7.2, 3.2), constrained_layout=True)
    panels = (("tweet_share", "share of all messages"),
              ("user_share", "share of dominated users"))
    for ax, (metric, title) in zip(axes, panels):
        for emotion in ("anger", "joy"):
            _curve_with_seeds(ax, table, f"{emotion}_{metric}",
                              COLORS[emotion], emotion)
        crossover = _largest_leading_value(table, metric)
        if crossover is not None:
            line = ax.axvline(crossover, color="0.4", linestyle="--", linewidth=1.0)
            line.set_gid(f"crossover-{metric}")
        ax.set_xlabel("joy minus anger posting prior")
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
    axes[0].legend()
    return fig


def _largest_leading_value(table, metric):
    """Largest sweep value where anger's mean share exceeds joy's."""
    xs, anger = table.mean_curve(f"anger_{metric}")
    _, joy = table.mean_curve(f"joy_{metric}")
    leading = [x for x, a, j in zip(xs, anger, joy) if a > j]
    return max(leading) if leading else None


_BUILDERS = {
    "strength": build_strength,
    "diff": build_diff,
    "vitality": build_vitality,
    "shares": build_shares,
    "equal_prior": build_equal_prior,
    "gap": build_gap,
}
