"""One-dimensional parameter scans across solution methods.

Produces a long-format table (one row per scan value and method) with
deterministic ordering and formatting: identical configs give
byte-identical output files. Per-point solver failures land in the
``error`` column and the scan continues.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CavisteadyError, PopulationTooSmall, MissingMoment
from .observables import compute_observables
from .oracle import oracle_solution
from .params import SystemParams
from .perturbative import solve_perturbative
from .steady import solve_params

SCAN_PARAMS = ("j", "delta", "omega", "n_thermal")
METHODS = ("exact", "pert0", "pert1", "pert2", "oracle")
OBSERVABLE_COLUMNS = ("n_a", "g2", "re_nn", "im_nn")
COLUMNS = ("param_name", "param_value", "method", *OBSERVABLE_COLUMNS, "residual", "error")


@dataclass
class ScanConfig:
    base: SystemParams
    scan_param: str  # one of SCAN_PARAMS, or "" for a single solve
    start: float = 0.0
    stop: float = 0.0
    steps: int = 1
    methods: tuple[str, ...] = ("exact",)
    observables: tuple[str, ...] = ("n_a", "g2", "nn")
    oracle_cut: int | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.scan_param and self.scan_param not in SCAN_PARAMS:
            raise ValueError(
                f"scan parameter must be one of {SCAN_PARAMS}, got {self.scan_param!r}"
            )
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.scan_param and self.stop < self.start:
            raise ValueError("scan range must have start <= stop")
        if not self.methods:
            raise ValueError("at least one method required")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; choose from {METHODS}")

    def values(self) -> np.ndarray:
        if not self.scan_param:
            return np.array([np.nan])
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)


@dataclass
class ScanRow:
    param_name: str
    param_value: float
    method: str
    n_a: float | None = None
    g2: float | None = None
    re_nn: float | None = None
    im_nn: float | None = None
    residual: float | None = None
    error: str = ""


def _solve_point(config: ScanConfig, params: SystemParams, method: str) -> ScanRow:
    row = ScanRow(
        param_name=config.scan_param or "",
        param_value=getattr(params, config.scan_param) if config.scan_param else np.nan,
        method=method,
    )
    try:
        if method == "exact":
            sol = solve_params(params)
        elif method.startswith("pert"):
            sol = solve_perturbative(params, int(method[-1]))
        elif method == "oracle":
            sol = oracle_solution(params, config.oracle_cut or params.n_max)
        else:  # pragma: no cover
            raise ValueError(method)
        want_g2 = "g2" in config.observables
        try:
            obs = compute_observables(sol, want_g2=want_g2)
        except (PopulationTooSmall, MissingMoment):
            if want_g2:
                obs = compute_observables(sol, want_g2=False)
            else:
                raise
        if "n_a" in config.observables:
            row.n_a = obs.n_a
        if "g2" in config.observables:
            row.g2 = obs.g2
        if "nn" in config.observables and obs.nn_coherence is not None:
            row.re_nn = obs.nn_coherence.real
            row.im_nn = obs.nn_coherence.imag
        row.residual = sol.residual
    except (CavisteadyError, ValueError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def run_scan(config: ScanConfig) -> list[ScanRow]:
    """All (scan value, method) rows in deterministic order
    (parameter-major, method-minor), regardless of worker scheduling."""
    points = [
        (
            config.base.replace(**{config.scan_param: float(v)})
            if config.scan_param
            else config.base,
            method,
        )
        for v in config.values()
        for method in config.methods
    ]
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(lambda pm: _solve_point(config, *pm), points))
    else:
        rows = [_solve_point(config, p, m) for p, m in points]
    return rows


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return f"{value:.17g}"


def rows_to_csv(config: ScanConfig, rows: list[ScanRow]) -> str:
    """Render the table; all rates are in units of gamma0 (header comment)."""
    b = config.base
    lines = [
        "# cavisteady scan; all rates in units of gamma0",
        (
            f"# base: delta={b.delta:.17g} u={b.u:.17g} j={b.j:.17g} "
            f"omega={b.omega:.17g} gamma0={b.gamma0:.17g} "
            f"n_thermal={b.n_thermal:.17g} n_cavities={b.n_cavities} "
            f"n_max={b.n_max} appendix_verbatim={b.appendix_verbatim}"
        ),
        ",".join(COLUMNS),
    ]
    for r in rows:
        lines.append(
            ",".join(
                (
                    r.param_name,
                    _fmt(r.param_value) if r.param_name else "",
                    r.method,
                    _fmt(r.n_a),
                    _fmt(r.g2),
                    _fmt(r.re_nn),
                    _fmt(r.im_nn),
                    _fmt(r.residual),
                    r.error.replace(",", ";"),
                )
            )
        )
    return "\n".join(lines) + "\n"


def rows_to_json(config: ScanConfig, rows: list[ScanRow]) -> str:
    payload = {
        "units": "gamma0",
        "base": {
            "delta": config.base.delta,
            "u": config.base.u,
            "j": config.base.j,
            "omega": config.base.omega,
            "gamma0": config.base.gamma0,
            "n_thermal": config.base.n_thermal,
            "n_cavities": config.base.n_cavities,
            "n_max": config.base.n_max,
            "appendix_verbatim": config.base.appendix_verbatim,
        },
        "rows": [
            {
                "param_name": r.param_name,
                "param_value": None if np.isnan(r.param_value) else r.param_value,
                "method": r.method,
                "n_a": r.n_a,
                "g2": r.g2,
                "re_nn": r.re_nn,
                "im_nn": r.im_nn,
                "residual": r.residual,
                "error": r.error,
            }
            for r in rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
