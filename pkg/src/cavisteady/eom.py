"""Equations of motion for normal-ordered correlators of the cavity ring.

Every correlator couples to a handful of others through the master
equation. Per cavity with exponents (m, n) the couplings are:

  self:          i*delta*(m - n) - (gamma/2)*(m + n) + (pump/2)*(m + n)
                 + i*(u/2)*[m(m-1) - n(n-1)]
  pump-lower:    pump * m * n            -> (m-1, n-1)
  kerr-raise:    i*u * (m - n)           -> (m+1, n+1)
  drive:         i*omega * m             -> (m-1, n)
                 -i*omega * n            -> (m, n-1)

and per ring link {i, j} (nearest neighbors; a 2-ring has a single link):

  hop:           i*j * m_i   -> (m_i-1, n_i) x (m_j+1, n_j)
                 i*j * m_j   -> (m_i+1, n_i) x (m_j-1, n_j)
                 -i*j * n_i  -> (m_i, n_i-1) x (m_j, n_j+1)
                 -i*j * n_j  -> (m_i, n_i+1) x (m_j, n_j-1)

Raising targets with any exponent above n_max are dropped (hierarchy
truncation). The +(pump/2)(m+n) self term is required for the incoherent
pump to drive the correct thermal fixed point; setting
``appendix_verbatim=True`` omits it for comparison runs.

The module provides the per-correlator term list (:func:`derivative_terms`)
and the assembled reduced system over the canonical correlator set
(:func:`assemble_system`). Assembly is split into a cached, parameter-free
structure (integer multipliers tagged by origin) and a cheap numerical
evaluation, so scans re-assemble in milliseconds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .correlators import (
    CorrIndex,
    _min_encoding,
    enumerate_canonical,
    pair_table,
)
from .errors import DimensionOverflow
from .params import SystemParams

# origin tags, in factor-table order
ORIGINS = (
    "detuning",
    "decay",
    "pump-diagonal",
    "kerr-diagonal",
    "kerr-raise",
    "pump-lower",
    "drive",
    "hop",
)
_ORIGIN_ID = {name: k for k, name in enumerate(ORIGINS)}


@dataclass(frozen=True)
class EomTerm:
    """One coupling term of a correlator's equation of motion.

    ``target`` is the coupled correlator index (not canonicalized) or
    ``None`` for the constant (identity) term. The coefficient is the full
    numeric prefactor; hop terms are i*j times an integer.
    """

    target: CorrIndex | None
    coefficient: complex
    origin: str


def ring_links(n_cavities: int) -> tuple[tuple[int, int], ...]:
    """Undirected nearest-neighbor links of the N-ring, each counted once.

    N = 2 has a single link (the periodic boundary would double it
    otherwise); N = 1 has none.
    """
    if n_cavities == 1:
        return ()
    if n_cavities == 2:
        return ((0, 1),)
    return tuple((i, (i + 1) % n_cavities) for i in range(n_cavities))


def _origin_factors(params: SystemParams) -> np.ndarray:
    """Numeric prefactor per origin tag; multiplied by the integer counts."""
    pump_diag = 0.0 if params.appendix_verbatim else params.pump / 2.0
    return np.array(
        [
            1j * params.delta,  # detuning
            -params.gamma / 2.0,  # decay
            pump_diag,  # pump-diagonal
            0.5j * params.u,  # kerr-diagonal
            1j * params.u,  # kerr-raise
            params.pump,  # pump-lower
            1j * params.omega,  # drive (sign carried by multiplier)
            1j * params.j,  # hop (sign carried by multiplier)
        ],
        dtype=np.complex128,
    )


def structural_terms(
    idx: CorrIndex, n_cavities: int, n_max: int
) -> list[tuple[CorrIndex | None, str, int]]:
    """Parameter-free coupling list for d<idx>/dt: (target, origin, integer
    multiplier) triples. The numeric coefficient is the origin's parameter
    prefactor times the multiplier. Targets are NOT canonicalized; ``None``
    is the identity; raising targets beyond n_max are dropped; zero
    multipliers are omitted.
    """
    if len(idx) != n_cavities:
        raise ValueError(f"index length {len(idx)} != n_cavities {n_cavities}")
    terms: list[tuple[CorrIndex | None, str, int]] = []

    def emit(target: CorrIndex, origin: str, mult: int) -> None:
        if mult:
            if all(m == 0 and nn == 0 for m, nn in target):
                terms.append((None, origin, mult))
            else:
                terms.append((target, origin, mult))

    det = sum(m - nn for m, nn in idx)
    tot = sum(m + nn for m, nn in idx)
    kerr = sum(m * (m - 1) - nn * (nn - 1) for m, nn in idx)
    for origin, mult in (
        ("detuning", det),
        ("decay", tot),
        ("pump-diagonal", tot),
        ("kerr-diagonal", kerr),
    ):
        if mult:
            terms.append((idx, origin, mult))

    def with_pair(base: CorrIndex, pos: int, pair: tuple[int, int]) -> CorrIndex:
        return base[:pos] + (pair,) + base[pos + 1 :]

    for i, (m, nn) in enumerate(idx):
        if m and nn:
            emit(with_pair(idx, i, (m - 1, nn - 1)), "pump-lower", m * nn)
        if m != nn and m < n_max and nn < n_max:
            emit(with_pair(idx, i, (m + 1, nn + 1)), "kerr-raise", m - nn)
        if m:
            emit(with_pair(idx, i, (m - 1, nn)), "drive", m)
        if nn:
            emit(with_pair(idx, i, (m, nn - 1)), "drive", -nn)

    for i, jn in ring_links(n_cavities):
        (mi, ni), (mj, nj) = idx[i], idx[jn]
        if mi and mj < n_max:
            t = with_pair(with_pair(idx, i, (mi - 1, ni)), jn, (mj + 1, nj))
            emit(t, "hop", mi)
        if mj and mi < n_max:
            t = with_pair(with_pair(idx, i, (mi + 1, ni)), jn, (mj - 1, nj))
            emit(t, "hop", mj)
        if ni and nj < n_max:
            t = with_pair(with_pair(idx, i, (mi, ni - 1)), jn, (mj, nj + 1))
            emit(t, "hop", -ni)
        if nj and ni < n_max:
            t = with_pair(with_pair(idx, i, (mi, ni + 1)), jn, (mj, nj - 1))
            emit(t, "hop", -nj)

    return terms


def derivative_terms(idx: CorrIndex, params: SystemParams) -> list[EomTerm]:
    """Complete coupling list for d<idx>/dt at the given parameters.
    Targets are NOT canonicalized; zero-coefficient terms are omitted.
    """
    factors = _origin_factors(params)
    out = []
    for target, origin, mult in structural_terms(
        idx, params.n_cavities, params.n_max
    ):
        coeff = factors[_ORIGIN_ID[origin]] * mult
        if coeff != 0:
            out.append(EomTerm(target, complex(coeff), origin))
    return out


# ---------------------------------------------------------------------------
# cached structural assembly over the canonical set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SystemStructure:
    """Parameter-free sparsity structure of the reduced system.

    Matrix entries are (row, col, origin, integer multiplier); the constant
    vector entries are (row, origin, multiplier). Numeric coefficients are
    origin_factor(params) * multiplier.
    """

    n_cavities: int
    n_max: int
    indices: tuple[CorrIndex, ...]
    rows: np.ndarray
    cols: np.ndarray
    origins: np.ndarray
    mults: np.ndarray
    irows: np.ndarray
    iorigins: np.ndarray
    imults: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.indices)

    @property
    def nnz(self) -> int:
        return len(self.rows)


@lru_cache(maxsize=8)
def system_structure(n_cavities: int, n_max: int) -> SystemStructure:
    """Build (once per ring size and truncation) the tagged structure of the
    reduced equations over the canonical correlator set."""
    canon = enumerate_canonical(n_cavities, n_max)
    dim = len(canon)
    pairs, rank_of = pair_table(n_max)
    n_pairs = len(pairs)
    identity_enc = n_pairs**n_cavities - 1

    mexp = np.array([[p[0] for p in idx] for idx in canon], dtype=np.int64)
    nexp = np.array([[p[1] for p in idx] for idx in canon], dtype=np.int64)
    rank_lut = np.empty((n_max + 1, n_max + 1), dtype=np.int64)
    for (m, n), r in rank_of.items():
        rank_lut[m, n] = r
    powers = n_pairs ** np.arange(n_cavities - 1, -1, -1, dtype=np.int64)
    canon_enc = rank_lut[mexp, nexp] @ powers
    all_rows = np.arange(dim, dtype=np.int64)

    rows_l: list[np.ndarray] = []
    cols_l: list[np.ndarray] = []
    orig_l: list[np.ndarray] = []
    mult_l: list[np.ndarray] = []
    ir_l: list[np.ndarray] = []
    io_l: list[np.ndarray] = []
    ik_l: list[np.ndarray] = []

    def append_targets(
        sel: np.ndarray, mt: np.ndarray, nt: np.ndarray, origin: str, mult: np.ndarray
    ) -> None:
        """Canonicalize target exponents and file them under matrix or
        constant-vector structure. ``sel`` are source row ids."""
        if len(sel) == 0:
            return
        enc = _min_encoding(rank_lut[mt, nt], n_pairs)
        oid = _ORIGIN_ID[origin]
        is_ident = enc == identity_enc
        if np.any(is_ident):
            ir_l.append(sel[is_ident])
            io_l.append(np.full(int(is_ident.sum()), oid, dtype=np.int8))
            ik_l.append(mult[is_ident])
        rest = ~is_ident
        if np.any(rest):
            cols = np.searchsorted(canon_enc, enc[rest])
            if not np.all(canon_enc[cols] == enc[rest]):
                raise AssertionError("canonical target missing from enumeration")
            rows_l.append(sel[rest])
            cols_l.append(cols.astype(np.int64))
            orig_l.append(np.full(int(rest.sum()), oid, dtype=np.int8))
            mult_l.append(mult[rest])

    # self couplings: no canonicalization needed
    for origin, mult in (
        ("detuning", (mexp - nexp).sum(axis=1)),
        ("decay", (mexp + nexp).sum(axis=1)),
        ("pump-diagonal", (mexp + nexp).sum(axis=1)),
        ("kerr-diagonal", (mexp * (mexp - 1) - nexp * (nexp - 1)).sum(axis=1)),
    ):
        keep = mult != 0
        rows_l.append(all_rows[keep])
        cols_l.append(all_rows[keep])
        orig_l.append(np.full(int(keep.sum()), _ORIGIN_ID[origin], dtype=np.int8))
        mult_l.append(mult[keep])

    def shifted(base_m, base_n, sel, pos, dm, dn):
        mt = base_m[sel].copy()
        nt = base_n[sel].copy()
        mt[:, pos] += dm
        nt[:, pos] += dn
        return mt, nt

    for i in range(n_cavities):
        mi, ni = mexp[:, i], nexp[:, i]

        keep = (mi > 0) & (ni > 0)
        sel = all_rows[keep]
        mt, nt = shifted(mexp, nexp, keep, i, -1, -1)
        append_targets(sel, mt, nt, "pump-lower", (mi * ni)[keep])

        keep = (mi != ni) & (mi < n_max) & (ni < n_max)
        sel = all_rows[keep]
        mt, nt = shifted(mexp, nexp, keep, i, +1, +1)
        append_targets(sel, mt, nt, "kerr-raise", (mi - ni)[keep])

        keep = mi > 0
        sel = all_rows[keep]
        mt, nt = shifted(mexp, nexp, keep, i, -1, 0)
        append_targets(sel, mt, nt, "drive", mi[keep])

        keep = ni > 0
        sel = all_rows[keep]
        mt, nt = shifted(mexp, nexp, keep, i, 0, -1)
        append_targets(sel, mt, nt, "drive", -ni[keep])

    for i, j in ring_links(n_cavities):
        mi, ni = mexp[:, i], nexp[:, i]
        mj, nj = mexp[:, j], nexp[:, j]

        for keep, pos_lower, dm_dn, pos_raise, mult in (
            ((mi > 0) & (mj < n_max), i, (-1, 0), j, mi),
            ((mj > 0) & (mi < n_max), j, (-1, 0), i, mj),
            ((ni > 0) & (nj < n_max), i, (0, -1), j, -ni),
            ((nj > 0) & (ni < n_max), j, (0, -1), i, -nj),
        ):
            sel = all_rows[keep]
            if len(sel) == 0:
                continue
            mt = mexp[keep].copy()
            nt = nexp[keep].copy()
            mt[:, pos_lower] += dm_dn[0]
            nt[:, pos_lower] += dm_dn[1]
            mt[:, pos_raise] += -dm_dn[0]
            nt[:, pos_raise] += -dm_dn[1]
            append_targets(sel, mt, nt, "hop", mult[keep])

    def cat(parts, dtype):
        if not parts:
            return np.zeros(0, dtype=dtype)
        return np.concatenate(parts).astype(dtype)

    return SystemStructure(
        n_cavities=n_cavities,
        n_max=n_max,
        indices=canon,
        rows=cat(rows_l, np.int64),
        cols=cat(cols_l, np.int64),
        origins=cat(orig_l, np.int8),
        mults=cat(mult_l, np.int64),
        irows=cat(ir_l, np.int64),
        iorigins=cat(io_l, np.int8),
        imults=cat(ik_l, np.int64),
    )


@dataclass(frozen=True)
class ReducedSystem:
    """Reduced stationary system d v/dt = matrix . v + ivec over the
    canonical correlator set (row r <-> ``indices[r]``)."""

    params: SystemParams
    indices: tuple[CorrIndex, ...]
    matrix: sp.csc_matrix
    ivec: np.ndarray
    structure: SystemStructure

    @property
    def dimension(self) -> int:
        return len(self.indices)

    def row_of(self, idx: CorrIndex) -> int:
        return self.index_of[idx]

    @property
    def index_of(self) -> dict[CorrIndex, int]:
        cached = getattr(self, "_index_of", None)
        if cached is None:
            cached = {idx: k for k, idx in enumerate(self.indices)}
            object.__setattr__(self, "_index_of", cached)
        return cached


def assemble_system(
    params: SystemParams, *, max_nonzeros: int = 2_000_000
) -> ReducedSystem:
    """Assemble the reduced matrix and constant vector for given parameters.

    Raises DimensionOverflow if the structural nonzero count exceeds
    ``max_nonzeros``.
    """
    st = system_structure(params.n_cavities, params.n_max)
    if st.nnz > max_nonzeros:
        raise DimensionOverflow(
            f"{st.nnz} structural nonzeros exceed the cap {max_nonzeros}"
        )
    factors = _origin_factors(params)
    data = factors[st.origins] * st.mults
    matrix = sp.coo_matrix(
        (data, (st.rows, st.cols)), shape=(st.dimension, st.dimension)
    ).tocsc()
    matrix.eliminate_zeros()
    ivec = np.zeros(st.dimension, dtype=np.complex128)
    np.add.at(ivec, st.irows, factors[st.iorigins] * st.imults)
    return ReducedSystem(
        params=params, indices=st.indices, matrix=matrix, ivec=ivec, structure=st
    )


def dump_system(system: ReducedSystem, path: str) -> None:
    """Write the tagged nonzeros as text, one line per structural entry:
    ``row col re im origin``. Constant-vector entries use col = -1."""
    st = system.structure
    factors = _origin_factors(system.params)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# row col re im origin\n")
        coeffs = factors[st.origins] * st.mults
        for r, c, o, z in zip(st.rows, st.cols, st.origins, coeffs):
            if z != 0:
                fh.write(f"{r} {c} {z.real:.17g} {z.imag:.17g} {ORIGINS[o]}\n")
        icoeffs = factors[st.iorigins] * st.imults
        for r, o, z in zip(st.irows, st.iorigins, icoeffs):
            if z != 0:
                fh.write(f"{r} -1 {z.real:.17g} {z.imag:.17g} {ORIGINS[o]}\n")
