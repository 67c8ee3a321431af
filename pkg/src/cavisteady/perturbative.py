"""Tunneling-rate expansion of the steady state, and exact small-ring
recursions via block elimination.

The expansion solves the pattern-block equations order by order in the
tunneling rate j (orders 2 / 1 / 0 for the single-cavity, adjacent-pair
and remaining subsets). Zero orders are uncoupled-limit products of the
single-cavity solution. The result is valid for any ring with N >= 4:
adding cavities changes nothing structurally at these orders.

For N = 2 and N = 3 the same blocks close exactly and the steady state
follows from a bottom-up elimination, which must agree with the direct
solution of the full reduced system to solver precision.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .blocks import BlockSystem, blocks_for_small_ring, build_blocks
from .correlators import CorrIndex
from .eom import assemble_system
from .errors import SingularSystem, UnsupportedN
from .params import SystemParams
from .steady import SolutionVector, residual_norm

_DENSE_BLOCK_LIMIT = 1500


def _single_cavity_values(
    blocks: BlockSystem, va0: np.ndarray
) -> dict[tuple[int, int], complex]:
    """Map exponent pair -> zero-order single-cavity moment."""
    return {idx[0]: complex(v) for idx, v in zip(blocks.indices["a"], va0)}


def zero_order_product(
    idx: CorrIndex, v_a0: SolutionVector | dict[tuple[int, int], complex]
) -> complex:
    """Uncoupled-limit value of a correlator: the product of single-cavity
    moments over its support. ``v_a0`` is the single-cavity (N = 1)
    solution, keyed by ``((m, n),)``, or a plain pair -> value map."""
    if isinstance(v_a0, SolutionVector):
        lookup = {key[0]: val for key, val in v_a0.values.items()}
    else:
        lookup = v_a0
    out = complex(1.0)
    for pair in idx:
        if pair != (0, 0):
            out *= lookup[pair]
    return out


def _solver_for(matrix: sp.spmatrix, what: str):
    """Return a solve(rhs) callable backed by one LU factorization, dense
    below ``_DENSE_BLOCK_LIMIT`` and SuperLU above."""
    dim = matrix.shape[0]
    if dim <= _DENSE_BLOCK_LIMIT:
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
        try:
            lu, piv = sla.lu_factor(dense, check_finite=False)
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise SingularSystem(f"{what} is singular") from exc
        pivots = np.abs(np.diag(lu))
        if dim and pivots.min() < 1e-12 * max(np.abs(dense).max(), 1e-300):
            raise SingularSystem(f"{what} is numerically singular")
        return lambda rhs: sla.lu_solve((lu, piv), rhs, check_finite=False)
    try:
        slu = spla.splu(matrix.tocsc())
    except RuntimeError as exc:
        raise SingularSystem(f"{what} is singular") from exc
    return slu.solve


def _product_vector(
    blocks: BlockSystem, pattern: str, single: dict[tuple[int, int], complex]
) -> np.ndarray:
    return np.array(
        [zero_order_product(idx, single) for idx in blocks.indices[pattern]],
        dtype=np.complex128,
    )


def solve_perturbative(params: SystemParams, order: int) -> SolutionVector:
    """Single-cavity steady-state correlators to the given order (0, 1 or 2)
    in the tunneling rate, for a ring with N >= 4.

    The returned vector covers the single-cavity subset; the order-resolved
    contributions and the adjacent-pair series used internally are kept in
    ``extras``. The recorded residual is the max-norm of the single-cavity
    block equations at the actual tunneling rate, which shrinks as
    O(j^(order+1)).
    """
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    if params.n_cavities < 4:
        raise UnsupportedN(
            f"the expansion is defined on N >= 4 rings, got {params.n_cavities}"
        )
    blocks = build_blocks(params)
    jrate = params.j

    solve_a = _solver_for(blocks.m_a, "single-cavity block")
    va0 = solve_a(-blocks.i_a)
    single = _single_cavity_values(blocks, va0)

    vb0 = _product_vector(blocks, "b", single)
    orders_a = [va0]
    vb_series = [vb0]

    if order >= 1:
        va1 = solve_a(-(1j * (blocks.s_a @ va0) + 1j * (blocks.r_ab @ vb0)))
        orders_a.append(va1)
    if order >= 2:
        vc0 = _product_vector(blocks, "c", single)
        ve0 = _product_vector(blocks, "e", single)
        solve_b = _solver_for(blocks.m_b, "adjacent-pair block")
        vb1 = solve_b(
            -(
                1j * (blocks.r_ba @ va0)
                + blocks.b_ba @ va1
                + 1j * (blocks.s_b @ vb0)
                + 1j * (blocks.r_bc @ vc0)
                + 1j * (blocks.r_be @ ve0)
            )
        )
        vb_series.append(vb1)
        va2 = solve_a(-(1j * (blocks.s_a @ va1) + 1j * (blocks.r_ab @ vb1)))
        orders_a.append(va2)

    va = sum(jrate**k * vk for k, vk in enumerate(orders_a))
    vb = sum(jrate**k * vk for k, vk in enumerate(vb_series))
    residual = float(
        np.abs(
            blocks.m_a @ va
            + blocks.i_a
            + 1j * jrate * (blocks.s_a @ va + blocks.r_ab @ vb)
        ).max()
    )

    values = {idx: complex(v) for idx, v in zip(blocks.indices["a"], va)}
    return SolutionVector(
        values=values,
        params=params,
        method=f"pert{order}",
        residual=residual,
        extras={"orders_a": orders_a, "vb_series": vb_series, "blocks": blocks},
    )


def solve_recursive_exact(params: SystemParams) -> SolutionVector:
    """Exact steady state of the N = 2 or N = 3 ring by bottom-up block
    elimination. Agrees with the direct reduced-system solution entry-wise
    to solver precision."""
    n = params.n_cavities
    if n not in (2, 3):
        raise UnsupportedN(f"recursive elimination covers N in {{2, 3}}, got {n}")
    blocks = blocks_for_small_ring(params)
    jrate = params.j

    def inv_apply(matrix, rhs, what: str) -> np.ndarray:
        rhs = rhs.toarray() if sp.issparse(rhs) else np.asarray(rhs)
        return _solver_for(matrix, what)(rhs)

    values: dict[CorrIndex, complex] = {}
    if n == 2:
        f_ba = -inv_apply(
            blocks.m_b + 1j * jrate * blocks.s_b,
            blocks.b_ba + 1j * jrate * blocks.r_ba,
            "pair block",
        )
        core = (
            blocks.m_a + 1j * jrate * blocks.s_a
        ).toarray() + 1j * jrate * (blocks.r_ab @ f_ba)
        va = inv_apply(core, -blocks.i_a, "eliminated single-cavity block")
        vb = f_ba @ va
        vc = None
    else:
        f_cb = -inv_apply(
            blocks.m_c + 1j * jrate * blocks.s_c,
            blocks.b_cb + 1j * jrate * blocks.r_cb,
            "triple block",
        )
        f_ba = -inv_apply(
            (blocks.m_b + 1j * jrate * blocks.s_b).toarray()
            + 1j * jrate * (blocks.r_bc @ f_cb),
            (blocks.b_ba + 1j * jrate * blocks.r_ba).toarray(),
            "pair block",
        )
        core = (
            blocks.m_a + 1j * jrate * blocks.s_a
        ).toarray() + 1j * jrate * (blocks.r_ab @ f_ba)
        va = inv_apply(core, -blocks.i_a, "eliminated single-cavity block")
        vb = f_ba @ va
        vc = f_cb @ vb

    for idx, v in zip(blocks.indices["a"], va):
        values[idx] = complex(v)
    for idx, v in zip(blocks.indices["b"], vb):
        values[idx] = complex(v)
    if vc is not None:
        for idx, v in zip(blocks.indices["c"], vc):
            values[idx] = complex(v)

    solution = SolutionVector(
        values=values, params=params, method="recursive", extras={"blocks": blocks}
    )
    solution.residual = residual_norm(assemble_system(params), solution)
    return solution
