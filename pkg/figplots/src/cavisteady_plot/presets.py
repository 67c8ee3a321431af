"""Figure presets: panel layouts and the fixed method -> line style map.

The comparison convention is shared by every figure: the full solution is
a solid black line; the second, first and zeroth expansion orders are
dashed red, dashed blue and dotted green."""

from __future__ import annotations

from dataclasses import dataclass, field

METHOD_STYLES: dict[str, dict] = {
    "exact": {"color": "black", "linestyle": "-", "label": "exact"},
    "pert2": {"color": "red", "linestyle": "--", "label": "order 2"},
    "pert1": {"color": "blue", "linestyle": "--", "label": "order 1"},
    "pert0": {"color": "green", "linestyle": ":", "label": "order 0"},
}
METHOD_ORDER = ("exact", "pert2", "pert1", "pert0")


@dataclass(frozen=True)
class PanelSpec:
    """One axes: a y column against a x column, one curve per method."""

    x_column: str
    y_column: str
    xlabel: str
    ylabel: str
    methods: tuple[str, ...] = METHOD_ORDER
    negate_x: bool = False  # plot -x (laser-offset axis of detuning scans)
    vlines: tuple[float, ...] = ()
    zoom: tuple[float, float] | None = None  # x window of an inset magnifier
    legend: bool = False


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    out_path: str
    panels: tuple[PanelSpec, ...]
    layout: tuple[int, int] = (1, 2)
    figsize: tuple[float, float] = (9.0, 3.6)


def _fig_tunneling(csv_path: str, out_path: str, u: float) -> PlotSpec:
    return PlotSpec(
        csv_path=csv_path,
        out_path=out_path,
        panels=(
            PanelSpec(
                x_column="param_value",
                y_column="n_a",
                xlabel=r"$J/\gamma_0$",
                ylabel=r"$n_a$",
                legend=True,
            ),
            PanelSpec(
                x_column="param_value",
                y_column="g2",
                xlabel=r"$J/\gamma_0$",
                ylabel=r"$g^{(2)}(0)$",
            ),
        ),
    )


def _fig_detuning(csv_path: str, out_path: str, u: float) -> PlotSpec:
    vlines = (0.0, u / 2.0, u)
    return PlotSpec(
        csv_path=csv_path,
        out_path=out_path,
        panels=(
            PanelSpec(
                x_column="param_value",
                y_column="n_a",
                xlabel=r"$(\omega_L-\omega_a)/\gamma_0$",
                ylabel=r"$n_a$",
                negate_x=True,
                vlines=vlines,
                legend=True,
            ),
            PanelSpec(
                x_column="param_value",
                y_column="g2",
                xlabel=r"$(\omega_L-\omega_a)/\gamma_0$",
                ylabel=r"$g^{(2)}(0)$",
                negate_x=True,
                vlines=vlines,
                zoom=(-1.5, 0.5),
            ),
        ),
    )


def _fig_thermal(csv_path: str, out_path: str, u: float) -> PlotSpec:
    return PlotSpec(
        csv_path=csv_path,
        out_path=out_path,
        panels=(
            PanelSpec(
                x_column="param_value",
                y_column="n_a",
                xlabel=r"$n_T$",
                ylabel=r"$n_a$",
                legend=True,
            ),
            PanelSpec(
                x_column="param_value",
                y_column="g2",
                xlabel=r"$n_T$",
                ylabel=r"$g^{(2)}(0)$",
            ),
        ),
    )


PRESETS = {
    "fig1ab": _fig_tunneling,
    "fig1cd": _fig_detuning,
    "fig2": _fig_thermal,
}


def preset_spec(name: str, csv_path: str, out_path: str, u: float = 6.0) -> PlotSpec:
    """Build the named preset. ``u`` places the resonance marker lines of
    the detuning preset (offsets 0, u/2, u)."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return PRESETS[name](csv_path, out_path, u)
