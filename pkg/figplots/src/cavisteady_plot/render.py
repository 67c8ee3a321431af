"""Deterministic figure rendering.

Output bytes are stable across reruns on identical input: the Agg backend
is forced, SVG ids are salted with a fixed string, and date metadata is
suppressed. Series are plotted exactly as read (no smoothing or
resampling)."""

from __future__ import annotations

import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import EmptySeries
from .presets import METHOD_STYLES, PanelSpec, PlotSpec
from .reader import read_scan_csv, series_for_method

matplotlib.rcParams["svg.hashsalt"] = "cavisteady-plot"


def _draw_panel(ax, rows, panel: PanelSpec, report) -> int:
    """Plot one panel; returns the number of non-empty curves."""
    drawn = 0
    for method in panel.methods:
        xs, ys = series_for_method(
            rows,
            method,
            panel.x_column,
            panel.y_column,
            negate_x=panel.negate_x,
            report=report,
        )
        if not xs:
            report(f"no rows for method {method!r} / column {panel.y_column!r}")
            continue
        ax.plot(xs, ys, **METHOD_STYLES[method])
        drawn += 1
    for x in panel.vlines:
        ax.axvline(x, color="0.6", linewidth=0.8, zorder=0)
    ax.set_xlabel(panel.xlabel)
    ax.set_ylabel(panel.ylabel)
    if panel.legend and drawn:
        ax.legend(fontsize=8, frameon=False)
    return drawn


def _draw_zoom(ax, rows, panel: PanelSpec, report) -> None:
    lo, hi = panel.zoom
    inset = ax.inset_axes([0.52, 0.52, 0.44, 0.44])
    for method in panel.methods:
        xs, ys = series_for_method(
            rows,
            method,
            panel.x_column,
            panel.y_column,
            negate_x=panel.negate_x,
            report=report,
        )
        pts = [(x, y) for x, y in zip(xs, ys) if lo <= x <= hi]
        if not pts:
            continue
        inset.plot(*zip(*pts), **METHOD_STYLES[method])
    inset.axhline(0.0, color="0.6", linewidth=0.6, zorder=0)
    inset.tick_params(labelsize=6)


def render_figure(spec: PlotSpec, *, report=None) -> str:
    """Render the figure and return the output path.

    Raises EmptySeries (before writing anything) when no panel has a
    single plottable curve; rows with recorded solver errors or empty
    cells are skipped with a note."""
    if report is None:
        report = lambda msg: print(msg, file=sys.stderr)
    rows = read_scan_csv(spec.csv_path)

    nrows, ncols = spec.layout
    fig, axes = plt.subplots(nrows, ncols, figsize=spec.figsize)
    axes = [axes] if (nrows, ncols) == (1, 1) else list(axes.ravel())
    try:
        total = 0
        for ax, panel in zip(axes, spec.panels):
            total += _draw_panel(ax, rows, panel, report)
            if panel.zoom is not None:
                _draw_zoom(ax, rows, panel, report)
        if total == 0:
            raise EmptySeries(f"no plottable series in {spec.csv_path}")
        fig.tight_layout()
        metadata = {"Date": None} if spec.out_path.endswith(".svg") else None
        fig.savefig(spec.out_path, dpi=150, metadata=metadata)
    finally:
        plt.close(fig)
    return spec.out_path
