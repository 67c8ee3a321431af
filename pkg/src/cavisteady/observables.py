"""Physical observables extracted from solution vectors.

n_a is the mean cavity population <a^+ a>; g2 the zero-delay second-order
coherence <a^+ a^+ a a> / n_a^2; nn_coherence the nearest-neighbor
coherence <a_1^+ a_2> when the solution carries pair correlators.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .correlators import CorrIndex
from .errors import MissingMoment, PopulationTooSmall
from .params import SystemParams
from .steady import SolutionVector

POPULATION_FLOOR = 1e-12
IMAG_WARN = 1e-6


@dataclass
class Observables:
    n_a: float
    g2: float | None
    nn_coherence: complex | None
    moments: dict[CorrIndex, complex]


def _pad(params: SystemParams, *pairs: tuple[int, int]) -> CorrIndex:
    return tuple(pairs) + ((0, 0),) * (params.n_cavities - len(pairs))


def population_index(params: SystemParams) -> CorrIndex:
    return _pad(params, (1, 1))


def two_photon_index(params: SystemParams) -> CorrIndex:
    return _pad(params, (2, 2))


def neighbor_index(params: SystemParams) -> CorrIndex:
    return _pad(params, (1, 0), (0, 1))


def _real_part(value: complex, label: str) -> float:
    if abs(value.imag) > IMAG_WARN * max(1.0, abs(value.real)):
        warnings.warn(
            f"{label} has imaginary residue {value.imag:.3e}", stacklevel=3
        )
    return float(value.real)


def compute_observables(
    solution: SolutionVector, *, want_g2: bool = True
) -> Observables:
    """Map a solution vector to (n_a, g2, nn_coherence).

    Raises MissingMoment when the truncation excludes a required
    correlator, PopulationTooSmall when g2 is requested at negligible
    population. g2 of non-exact solutions may come out negative and is
    reported as computed.
    """
    params = solution.params
    pop_idx = population_index(params)
    if pop_idx not in solution.values:
        raise MissingMoment(f"population correlator {pop_idx} not in solution")
    n_a = _real_part(solution.values[pop_idx], "population")

    g2: float | None = None
    if want_g2:
        if params.n_max < 2:
            raise MissingMoment("g2 needs n_max >= 2")
        g2_idx = two_photon_index(params)
        if g2_idx not in solution.values:
            raise MissingMoment(f"two-photon correlator {g2_idx} not in solution")
        if n_a <= POPULATION_FLOOR:
            raise PopulationTooSmall(
                f"population {n_a:.3e} below floor {POPULATION_FLOOR:.0e}"
            )
        g2 = _real_part(solution.values[g2_idx], "two-photon moment") / n_a**2

    nn = None
    if params.n_cavities >= 2:
        nn = solution.values.get(neighbor_index(params))
        nn = complex(nn) if nn is not None else None

    return Observables(n_a=n_a, g2=g2, nn_coherence=nn, moments=solution.values)
