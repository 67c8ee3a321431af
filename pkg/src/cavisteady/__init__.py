"""Steady states of translation-invariant rings of driven, dissipative,
Kerr-nonlinear cavities: exact correlator linear systems, a second-order
expansion in the photon tunneling rate, and a density-matrix oracle."""

from .blocks import BlockSystem, build_blocks, blocks_for_small_ring, classify_pattern
from .correlators import (
    CorrIndex,
    canonicalize,
    classify_support,
    enumerate_canonical,
    pattern_canonical_indices,
)
from .eom import (
    EomTerm,
    ReducedSystem,
    assemble_system,
    derivative_terms,
    dump_system,
)
from .observables import Observables, compute_observables
from .oracle import (
    DensityMatrix,
    moment_from_density,
    oracle_solution,
    steady_density,
)
from .params import SystemParams, validate_params
from .perturbative import (
    solve_perturbative,
    solve_recursive_exact,
    zero_order_product,
)
from .scan import ScanConfig, ScanRow, rows_to_csv, rows_to_json, run_scan
from .steady import (
    SolutionVector,
    residual_norm,
    solve_closure,
    solve_params,
    solve_steady,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSystem",
    "CorrIndex",
    "DensityMatrix",
    "EomTerm",
    "Observables",
    "ReducedSystem",
    "ScanConfig",
    "ScanRow",
    "SolutionVector",
    "SystemParams",
    "assemble_system",
    "blocks_for_small_ring",
    "build_blocks",
    "canonicalize",
    "classify_pattern",
    "classify_support",
    "compute_observables",
    "derivative_terms",
    "dump_system",
    "enumerate_canonical",
    "moment_from_density",
    "oracle_solution",
    "pattern_canonical_indices",
    "residual_norm",
    "rows_to_csv",
    "rows_to_json",
    "run_scan",
    "solve_closure",
    "solve_params",
    "solve_perturbative",
    "solve_recursive_exact",
    "solve_steady",
    "steady_density",
    "validate_params",
    "zero_order_product",
]
