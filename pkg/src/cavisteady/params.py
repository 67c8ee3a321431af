"""Physical parameters of the driven-dissipative cavity ring.

All rates are expressed in units of the zero-temperature decay rate
``gamma0``. The thermal bath with occupation ``n_thermal`` turns into the
incoherent pump/decay pair ``pump = n_thermal * gamma0`` and
``gamma = (1 + n_thermal) * gamma0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any, Mapping

from .errors import BadN, BadTruncation, NonPositiveGamma0


@dataclass(frozen=True)
class SystemParams:
    """Parameters of a ring of identical Kerr cavities.

    delta      : cavity-laser detuning (omega_a - omega_L)
    u          : Kerr interaction strength
    j          : photon tunneling rate between adjacent cavities
    omega      : coherent drive amplitude
    gamma0     : zero-temperature decay rate (the unit; > 0)
    n_thermal  : bath occupation number (>= 0)
    n_cavities : ring size N (>= 1)
    n_max      : exponent truncation of the correlator hierarchy (>= 1)
    appendix_verbatim : drop the pump contribution to the diagonal decay
        term of the equations of motion (kept for comparison runs; the
        default, corrected generator preserves the thermal fixed point).
    """

    delta: float
    u: float
    j: float
    omega: float
    gamma0: float = 1.0
    n_thermal: float = 0.0
    n_cavities: int = 1
    n_max: int = 2
    appendix_verbatim: bool = False

    @property
    def gamma(self) -> float:
        """Total decay rate (1 + n_T) * gamma0."""
        return (1.0 + self.n_thermal) * self.gamma0

    @property
    def pump(self) -> float:
        """Incoherent pump rate n_T * gamma0."""
        return self.n_thermal * self.gamma0

    def replace(self, **changes: Any) -> "SystemParams":
        return replace(self, **changes)


def validate_params(raw: Mapping[str, Any] | SystemParams) -> SystemParams:
    """Build a validated :class:`SystemParams` from a parameter record.

    Missing fields default to gamma0 = 1, n_thermal = 0, n_cavities = 1,
    n_max = 2 and zero for the remaining rates.

    Raises
    ------
    NonPositiveGamma0 : gamma0 <= 0 (would make gamma <= pump).
    BadTruncation     : n_max < 1.
    BadN              : n_cavities < 1.
    ValueError        : non-finite rates or negative n_thermal.
    """
    if isinstance(raw, SystemParams):
        p = raw
    else:
        known = {
            "delta": 0.0,
            "u": 0.0,
            "j": 0.0,
            "omega": 0.0,
            "gamma0": 1.0,
            "n_thermal": 0.0,
            "n_cavities": 1,
            "n_max": 2,
            "appendix_verbatim": False,
        }
        unknown = set(raw) - set(known)
        if unknown:
            raise ValueError(f"unknown parameter fields: {sorted(unknown)}")
        known.update(raw)
        p = SystemParams(
            delta=float(known["delta"]),
            u=float(known["u"]),
            j=float(known["j"]),
            omega=float(known["omega"]),
            gamma0=float(known["gamma0"]),
            n_thermal=float(known["n_thermal"]),
            n_cavities=int(known["n_cavities"]),
            n_max=int(known["n_max"]),
            appendix_verbatim=bool(known["appendix_verbatim"]),
        )

    if p.gamma0 <= 0:
        raise NonPositiveGamma0(f"gamma0 = {p.gamma0} must be > 0")
    if p.n_max < 1:
        raise BadTruncation(f"n_max = {p.n_max} must be >= 1")
    if p.n_cavities < 1:
        raise BadN(f"n_cavities = {p.n_cavities} must be >= 1")
    if p.n_thermal < 0:
        raise ValueError(f"n_thermal = {p.n_thermal} must be >= 0")
    for name in ("delta", "u", "j", "omega", "gamma0", "n_thermal"):
        if not math.isfinite(getattr(p, name)):
            raise ValueError(f"{name} must be finite")
    return p
