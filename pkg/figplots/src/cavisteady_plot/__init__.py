"""Comparison figures (population and photon statistics vs a scanned
parameter, one curve per solution method) rendered from cavisteady scan
CSV files."""

from .errors import EmptySeries, MissingColumn
from .presets import PRESETS, PanelSpec, PlotSpec, preset_spec
from .reader import read_scan_csv, series_for_method
from .render import render_figure

__version__ = "0.1.0"

__all__ = [
    "EmptySeries",
    "MissingColumn",
    "PRESETS",
    "PanelSpec",
    "PlotSpec",
    "preset_spec",
    "read_scan_csv",
    "render_figure",
    "series_for_method",
]
