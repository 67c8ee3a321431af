"""Direct solution of the reduced stationary system v = -M^{-1} I.

The sparsity graph of the reduced matrix often splits into disconnected
sectors (e.g. without a coherent drive nothing couples correlators of
different total phase grade). Only sectors carrying part of the constant
vector can be nonzero in the steady state, so the solver factorizes those
blocks alone and sets the homogeneous sectors to zero. This is what makes
undriven / thermal solves at large truncation cheap.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph
import scipy.sparse.linalg as spla

from .correlators import CorrIndex
from .eom import ReducedSystem, assemble_system
from .errors import DimensionOverflow, IllConditionedWarning, SingularSystem
from .params import SystemParams

# dense factorization is faster than SuperLU for these hierarchy matrices
# (heavy fill-in) up to a few thousand rows on one core
DENSE_LIMIT = 3000
PIVOT_RTOL = 1e-12
CONDITION_LIMIT = 1e12


@dataclass
class SolutionVector:
    """Stationary correlator values keyed by canonical index.

    ``method`` is one of exact / pert0 / pert1 / pert2 / oracle / recursive;
    ``residual`` is the max-norm of the defining equations evaluated at the
    solution (for perturbative solutions: of the single-cavity block, see
    :mod:`cavisteady.perturbative`).
    """

    values: dict[CorrIndex, complex]
    params: SystemParams
    method: str
    residual: float = 0.0
    extras: dict = field(default_factory=dict)

    def __getitem__(self, idx: CorrIndex) -> complex:
        return self.values[idx]

    def get(self, idx: CorrIndex, default=None):
        return self.values.get(idx, default)


def _estimate_inverse_norm_1(solve, solve_adj, dim: int, iters: int = 5) -> float:
    """Deterministic Hager-style lower estimate of ||A^{-1}||_1.

    ``solve``/``solve_adj`` apply A^{-1} and A^{-H} to a vector.
    """
    x = np.full(dim, 1.0 / dim, dtype=np.complex128)
    est = 0.0
    for _ in range(iters):
        y = solve(x)
        est_new = float(np.abs(y).sum())
        absy = np.abs(y)
        xi = np.ones(dim, dtype=np.complex128)
        np.divide(y, absy, out=xi, where=absy > 0)
        z = solve_adj(xi)
        k = int(np.argmax(np.abs(z)))
        if est_new <= est:
            break
        est = est_new
        x = np.zeros(dim, dtype=np.complex128)
        x[k] = 1.0
    return est


def _solve_block(
    block: sp.csc_matrix,
    rhs: np.ndarray,
    scale: float,
    pivot_rtol: float,
    estimate_condition: bool,
) -> np.ndarray:
    """LU-solve one diagonal block, with pivot and conditioning checks."""
    dim = block.shape[0]
    if dim <= DENSE_LIMIT:
        dense = block.toarray()
        lu, piv = sla.lu_factor(dense, check_finite=False)
        pivots = np.abs(np.diag(lu))
        if pivots.min() < pivot_rtol * scale:
            raise SingularSystem(
                f"pivot {pivots.min():.3e} below {pivot_rtol:.1e} * max|M| "
                f"= {pivot_rtol * scale:.3e}"
            )
        x = sla.lu_solve((lu, piv), rhs, check_finite=False)
        solve = lambda b: sla.lu_solve((lu, piv), b, check_finite=False)
        solve_adj = lambda b: sla.lu_solve((lu, piv), b, trans=2, check_finite=False)
        norm1 = float(np.abs(dense).sum(axis=0).max())
    else:
        try:
            slu = spla.splu(block)
        except RuntimeError as exc:
            raise SingularSystem(str(exc)) from exc
        pivots = np.abs(slu.U.diagonal())
        if pivots.min() < pivot_rtol * scale:
            raise SingularSystem(
                f"pivot {pivots.min():.3e} below {pivot_rtol:.1e} * max|M|"
            )
        x = slu.solve(rhs)
        solve = lambda b: slu.solve(b)
        solve_adj = lambda b: slu.solve(b, trans="H")
        norm1 = float(np.abs(block).sum(axis=0).max())
    if estimate_condition:
        cond = norm1 * _estimate_inverse_norm_1(solve, solve_adj, dim)
        if cond > CONDITION_LIMIT:
            warnings.warn(
                f"condition estimate {cond:.3e} > {CONDITION_LIMIT:.1e}",
                IllConditionedWarning,
                stacklevel=3,
            )
    return x


def solve_steady(
    system: ReducedSystem,
    *,
    pivot_rtol: float = PIVOT_RTOL,
    estimate_condition: bool = True,
) -> SolutionVector:
    """Solve M v = -I by LU with partial pivoting and record the residual.

    Disconnected homogeneous sectors of the equations are zero in the
    steady state and are skipped; the pivot / conditioning diagnostics run
    on the driven sector(s). A pivot below ``pivot_rtol`` times the matrix
    max-norm raises SingularSystem: the steady state is not unique there
    (multistability or lasing), which this solver cannot represent.
    """
    dim = system.dimension
    m = system.matrix
    if m.nnz == 0:
        raise SingularSystem("matrix is identically zero")
    scale = float(np.abs(m.data).max())

    pattern = sp.csc_matrix(
        (np.ones(m.nnz, dtype=np.int8), m.indices, m.indptr), shape=m.shape
    )
    n_comp, labels = csgraph.connected_components(
        pattern, directed=True, connection="weak"
    )
    driven = np.unique(labels[np.nonzero(system.ivec)[0]])

    vec = np.zeros(dim, dtype=np.complex128)
    csr = m.tocsr()
    for lab in driven:
        ids = np.nonzero(labels == lab)[0]
        block = csr[ids][:, ids].tocsc()
        vec[ids] = _solve_block(
            block, -system.ivec[ids], scale, pivot_rtol, estimate_condition
        )

    residual = float(np.abs(m @ vec + system.ivec).max())
    values = {idx: complex(vec[k]) for k, idx in enumerate(system.indices)}
    return SolutionVector(
        values=values, params=system.params, method="exact", residual=residual
    )


def residual_norm(system: ReducedSystem, solution: SolutionVector) -> float:
    """Max-norm of M v + I for a solution covering the full canonical set."""
    vec = np.array(
        [solution.values[idx] for idx in system.indices], dtype=np.complex128
    )
    return float(np.abs(system.matrix @ vec + system.ivec).max())


def solve_params(params: SystemParams, **kwargs) -> SolutionVector:
    """Assemble and solve in one step."""
    return solve_steady(assemble_system(params), **kwargs)


def solve_closure(
    params: SystemParams,
    seeds: list[CorrIndex],
    *,
    max_rows: int = 200_000,
    pivot_rtol: float = PIVOT_RTOL,
) -> SolutionVector:
    """Exact steady values of the correlators reachable from ``seeds``.

    The equations couple each correlator to finitely many targets; the
    transitive closure of the seed rows forms a closed sub-system whose
    solution equals the corresponding entries of the full solve (couplings
    out of the closure do not exist by construction). When parameters kill
    the raising couplings (u = 0 and no pump) the closure stays tiny even
    at truncations whose full canonical set would be unbuildable.
    """
    from collections import deque

    from .correlators import canonicalize
    from .eom import derivative_terms

    order: list[CorrIndex] = []
    row_of: dict[CorrIndex, int] = {}
    terms_of: list[list] = []
    queue = deque(canonicalize(s) for s in seeds)
    while queue:
        idx = queue.popleft()
        if idx in row_of:
            continue
        row_of[idx] = len(order)
        order.append(idx)
        if len(order) > max_rows:
            raise DimensionOverflow(
                f"closure exceeded {max_rows} rows; use solve_steady"
            )
        terms = derivative_terms(idx, params)
        terms_of.append(terms)
        for t in terms:
            if t.target is not None:
                tgt = canonicalize(t.target)
                if tgt not in row_of:
                    queue.append(tgt)

    dim = len(order)
    rows, cols, data = [], [], []
    ivec = np.zeros(dim, dtype=np.complex128)
    for r, terms in enumerate(terms_of):
        for t in terms:
            if t.target is None:
                ivec[r] += t.coefficient
            else:
                rows.append(r)
                cols.append(row_of[canonicalize(t.target)])
                data.append(t.coefficient)
    matrix = sp.coo_matrix((data, (rows, cols)), shape=(dim, dim)).tocsc()
    matrix.eliminate_zeros()
    scale = float(np.abs(matrix.data).max()) if matrix.nnz else 0.0
    if scale == 0.0:
        raise SingularSystem("closure matrix is identically zero")
    vec = _solve_block(matrix, -ivec, scale, pivot_rtol, True)
    residual = float(np.abs(matrix @ vec + ivec).max())
    values = {idx: complex(vec[k]) for k, idx in enumerate(order)}
    return SolutionVector(
        values=values, params=params, method="exact", residual=residual
    )
