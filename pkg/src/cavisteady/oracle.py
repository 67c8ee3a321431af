"""Brute-force validation path: full Liouvillian on the truncated Fock
space of the ring, steady density matrix, and normal-ordered moments.

Truncation here is a hard Fock cutoff per cavity (operators act on an
(n_cut + 1)-level ladder), intentionally different from the exponent
truncation of the correlator hierarchy; the two agree where both converge.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .correlators import CorrIndex
from .eom import ring_links
from .errors import CapExceeded, ExponentExceedsCutoff, SingularSystem
from .params import SystemParams
from .steady import SolutionVector

DEFAULT_DIM_CAP = 256


@dataclass
class DensityMatrix:
    """Steady density matrix of the full ring on the truncated Fock space."""

    rho: np.ndarray
    n_cut: int
    n_cavities: int
    params: SystemParams
    residual: float = 0.0

    @property
    def dimension(self) -> int:
        return self.rho.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.rho))

    def hermiticity_error(self) -> float:
        return float(np.abs(self.rho - self.rho.conj().T).max())

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh((self.rho + self.rho.conj().T) / 2).min())


@lru_cache(maxsize=16)
def _local_ops(n_cut: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation operator and identity on one (n_cut+1)-level ladder."""
    a = np.diag(np.sqrt(np.arange(1, n_cut + 1)), k=1)
    return a, np.eye(n_cut + 1)


def _site_operator(op: np.ndarray, site: int, n_cavities: int, n_cut: int):
    """Embed a single-cavity operator at the given site (sparse kron chain)."""
    _, eye = _local_ops(n_cut)
    out = None
    for i in range(n_cavities):
        factor = op if i == site else eye
        out = sp.csr_matrix(factor) if out is None else sp.kron(out, factor, "csr")
    return out


def _hamiltonian(params: SystemParams, n_cut: int) -> sp.csr_matrix:
    n = params.n_cavities
    a_loc, _ = _local_ops(n_cut)
    h = None
    site_a = [_site_operator(a_loc, i, n, n_cut) for i in range(n)]
    for i in range(n):
        a = site_a[i]
        ad = a.conj().T
        term = (
            params.delta * (ad @ a)
            + 0.5 * params.u * (ad @ ad @ a @ a)
            + params.omega * (ad + a)
        )
        h = term if h is None else h + term
    for i, j in ring_links(n):
        hop = params.j * (site_a[i].conj().T @ site_a[j])
        h = h + hop + hop.conj().T
    return h.tocsr()


def liouvillian_matrix(params: SystemParams, n_cut: int) -> sp.csr_matrix:
    """Vectorized generator L with row-major vec(rho): vec(A rho B) =
    kron(A, B^T) vec(rho)."""
    n = params.n_cavities
    d = (n_cut + 1) ** n
    eye = sp.identity(d, format="csr")
    h = _hamiltonian(params, n_cut)
    # d rho/dt = i(rho H - H rho) + dissipators
    lv = 1j * (sp.kron(eye, h.T, "csr") - sp.kron(h, eye, "csr"))
    a_loc, _ = _local_ops(n_cut)
    for i in range(n):
        a = _site_operator(a_loc, i, n, n_cut)
        ad = a.conj().T
        nn = ad @ a
        lv = lv + 0.5 * params.gamma * (
            2 * sp.kron(a, a.conj(), "csr")
            - sp.kron(nn, eye, "csr")
            - sp.kron(eye, nn.T, "csr")
        )
        if params.pump:
            aad = a @ ad
            lv = lv + 0.5 * params.pump * (
                2 * sp.kron(ad, ad.conj(), "csr")
                - sp.kron(aad, eye, "csr")
                - sp.kron(eye, aad.T, "csr")
            )
    return lv.tocsr()


def steady_density(
    params: SystemParams, n_cut: int, *, dim_cap: int = DEFAULT_DIM_CAP
) -> DensityMatrix:
    """Steady state of L(rho) = 0 with unit trace.

    The first row of the vectorized generator is replaced by the trace
    functional (deterministic, the dropped equation is implied by trace
    conservation). Raises CapExceeded when (n_cut+1)^N exceeds the cap.
    """
    n = params.n_cavities
    d = (n_cut + 1) ** n
    if d > dim_cap:
        raise CapExceeded(f"oracle dimension {d} exceeds cap {dim_cap}")
    if params.gamma0 <= 0:
        raise SingularSystem("gamma0 must be positive for a unique steady state")

    lv = liouvillian_matrix(params, n_cut).tolil()
    trace_row = np.zeros(d * d)
    trace_row[:: d + 1] = 1.0
    lv[0, :] = trace_row
    rhs = np.zeros(d * d, dtype=np.complex128)
    rhs[0] = 1.0

    lv = lv.tocsc()
    try:
        lu = spla.splu(lv)
    except RuntimeError as exc:
        raise SingularSystem(str(exc)) from exc
    pivots = np.abs(lu.U.diagonal())
    scale = float(np.abs(lv.data).max())
    if pivots.min() < 1e-12 * scale:
        raise SingularSystem("degenerate steady manifold (tiny pivot)")
    vec = lu.solve(rhs)
    residual = float(np.abs(lv @ vec - rhs).max())
    rho = vec.reshape(d, d)
    return DensityMatrix(
        rho=rho, n_cut=n_cut, n_cavities=n, params=params, residual=residual
    )


def moment_from_density(dm: DensityMatrix, exponents: CorrIndex) -> complex:
    """Tr(rho * prod_i a_i^+^m_i a_i^n_i) for per-cavity exponent pairs."""
    if len(exponents) != dm.n_cavities:
        raise ValueError("exponent tuple length != number of cavities")
    for m, n in exponents:
        if m > dm.n_cut or n > dm.n_cut:
            raise ExponentExceedsCutoff(
                f"moment exponents {exponents} exceed n_cut {dm.n_cut}"
            )
    a_loc, eye = _local_ops(dm.n_cut)
    op = None
    for m, n in exponents:
        local = (
            np.linalg.matrix_power(a_loc.T, m) @ np.linalg.matrix_power(a_loc, n)
            if (m or n)
            else eye
        )
        op = local if op is None else np.kron(op, local)
    return complex(np.trace(dm.rho @ op))


def oracle_solution(
    params: SystemParams,
    n_cut: int,
    targets: list[CorrIndex] | None = None,
    *,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> SolutionVector:
    """Moments of the oracle steady state packaged like a solver output.

    ``targets`` defaults to the correlators backing the standard
    observables (population, two-photon moment, nearest-neighbor
    coherence).
    """
    dm = steady_density(params, n_cut, dim_cap=dim_cap)
    n = params.n_cavities
    if targets is None:
        pad = ((0, 0),) * (n - 1)
        targets = [((1, 1),) + pad]
        if n_cut >= 2:
            targets.append(((2, 2),) + pad)
        if n >= 2:
            targets.append(((1, 0), (0, 1)) + ((0, 0),) * (n - 2))
    values = {idx: moment_from_density(dm, idx) for idx in targets}
    return SolutionVector(
        values=values,
        params=params,
        method="oracle",
        residual=dm.residual,
        extras={"density": dm},
    )
