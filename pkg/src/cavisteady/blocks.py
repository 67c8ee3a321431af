"""Support-pattern blocks of the reduced equations.

Correlators are grouped by the geometry of the cavities they touch:

  a - one cavity            b - adjacent pair       e - pair at distance two
  c - three consecutive     d - four consecutive    other (only N >= 5)

Grouping the reduced equations by pattern and splitting each row's
couplings by origin gives the block form used by the tunneling expansion
and the small-ring eliminations:

  M_x  : within-pattern couplings that do not involve the tunneling rate
         (detuning, decay, Kerr, pump, and drive terms that stay in x)
  S_x  : within-pattern tunneling couplings, divided by i*j (integers)
  R_xy : cross-pattern tunneling couplings, divided by i*j (integers)
  B_xy : cross-pattern drive / pump-lowering couplings
  I_a  : constant (identity-targeted) terms; only single-cavity rows
         reach the identity in one step

The tunneling blocks carry unit rate, so j enters only through the
explicit i*j prefactors of the block equations. Blocks are scipy sparse
matrices; the extraction is cached per (ring size, truncation) with
parameters applied as cheap per-origin prefactors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .correlators import (
    CorrIndex,
    canonicalize,
    classify_support,
    pattern_canonical_indices,
)
from .eom import _ORIGIN_ID, _origin_factors, structural_terms
from .errors import UnsupportedN
from .params import SystemParams

Pattern = str  # 'a' | 'b' | 'c' | 'd' | 'e' | 'other'

# row patterns resolved by the extraction, per ring size regime
_ROW_PATTERNS = {2: ("a", "b"), 3: ("a", "b", "c")}
_ROW_PATTERNS_BIG = ("a", "b")


def classify_pattern(idx: CorrIndex) -> Pattern:
    """Support-pattern tag of a correlator index (dihedral invariant)."""
    return classify_support(idx)


@dataclass(frozen=True)
class BlockSystem:
    """Pattern-resolved blocks of the reduced equations.

    ``indices`` gives the canonical correlators backing each pattern's
    rows/columns. S/R blocks are integer-valued (tunneling couplings per
    unit i*j); M/B/I carry the remaining parameters. Blocks that do not
    exist for the ring size (e.g. c for N = 2) have zero columns.
    """

    params: SystemParams
    indices: dict[Pattern, tuple[CorrIndex, ...]]
    m_a: sp.csr_matrix
    s_a: sp.csr_matrix
    r_ab: sp.csr_matrix
    i_a: np.ndarray
    m_b: sp.csr_matrix
    s_b: sp.csr_matrix
    b_ba: sp.csr_matrix
    r_ba: sp.csr_matrix
    r_bc: sp.csr_matrix
    r_be: sp.csr_matrix
    m_c: sp.csr_matrix | None = None
    s_c: sp.csr_matrix | None = None
    b_cb: sp.csr_matrix | None = None
    r_cb: sp.csr_matrix | None = None

    @property
    def a_indices(self) -> tuple[CorrIndex, ...]:
        return self.indices["a"]

    @property
    def b_indices(self) -> tuple[CorrIndex, ...]:
        return self.indices["b"]


@dataclass(frozen=True)
class _BlockStructure:
    """Parameter-free extraction: per block, COO arrays of (row, col,
    origin, multiplier); I entries as (row, origin, multiplier)."""

    indices: dict[Pattern, tuple[CorrIndex, ...]]
    entries: dict[str, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]
    ientries: dict[str, tuple[np.ndarray, np.ndarray, np.ndarray]]


@lru_cache(maxsize=8)
def _block_structure(
    n_cavities: int, n_max: int, row_patterns: tuple[Pattern, ...]
) -> _BlockStructure:
    column_patterns = ("a", "b") if n_cavities < 3 else (
        ("a", "b", "c") if n_cavities == 3 else ("a", "b", "c", "e")
    )
    indices = {
        pat: pattern_canonical_indices(n_cavities, n_max, pat)
        for pat in column_patterns
    }
    index_of = {
        pat: {idx: k for k, idx in enumerate(cols)} for pat, cols in indices.items()
    }

    raw: dict[str, list[tuple[int, int, int, int]]] = {}
    iraw: dict[str, list[tuple[int, int, int]]] = {}
    for row_pat in row_patterns:
        for r, idx in enumerate(indices[row_pat]):
            for target, origin, mult in structural_terms(idx, n_cavities, n_max):
                oid = _ORIGIN_ID[origin]
                if target is None:
                    iraw.setdefault(row_pat, []).append((r, oid, mult))
                    continue
                tgt = canonicalize(target)
                pat = classify_support(tgt)
                if pat not in index_of:
                    raise AssertionError(
                        f"{row_pat}-row couples to untracked pattern {pat}"
                    )
                c = index_of[pat][tgt]
                if origin == "hop":
                    key = f"S:{row_pat}" if pat == row_pat else f"R:{row_pat}{pat}"
                elif pat == row_pat:
                    key = f"M:{row_pat}"
                else:
                    if origin not in ("drive", "pump-lower"):
                        raise AssertionError(
                            f"cross-pattern term of origin {origin} "
                            f"({row_pat} -> {pat})"
                        )
                    key = f"B:{row_pat}{pat}"
                raw.setdefault(key, []).append((r, c, oid, mult))

    entries = {
        key: tuple(np.array(col, dtype=np.int64) for col in zip(*vals))
        for key, vals in raw.items()
    }
    ientries = {
        key: tuple(np.array(col, dtype=np.int64) for col in zip(*vals))
        for key, vals in iraw.items()
    }
    return _BlockStructure(indices=indices, entries=entries, ientries=ientries)


def _materialize(
    st: _BlockStructure, key: str, shape: tuple[int, int], factors: np.ndarray | None
) -> sp.csr_matrix:
    """Numeric block from structural entries. ``factors=None`` returns the
    integer multipliers (used for S and R, where the prefactor i*j is kept
    symbolic)."""
    if key not in st.entries:
        return sp.csr_matrix(shape, dtype=np.complex128)
    rows, cols, oids, mults = st.entries[key]
    data = mults.astype(np.complex128) if factors is None else factors[oids] * mults
    out = sp.coo_matrix((data, (rows, cols)), shape=shape).tocsr()
    out.eliminate_zeros()
    return out


def build_blocks(params: SystemParams) -> BlockSystem:
    """Extract the blocks driving the tunneling expansion on an N >= 4 ring.

    Rows of patterns a and b are resolved; columns additionally cover the
    c and e patterns they couple to. Raises UnsupportedN for N < 4 (the
    small rings close differently; see :func:`blocks_for_small_ring`).
    """
    if params.n_cavities < 4:
        raise UnsupportedN(
            f"block extraction for the expansion needs N >= 4, got {params.n_cavities}"
        )
    return _build(params, _ROW_PATTERNS_BIG)


def blocks_for_small_ring(params: SystemParams) -> BlockSystem:
    """Blocks of the N = 2 or N = 3 ring (used by the exact recursion)."""
    if params.n_cavities not in (2, 3):
        raise UnsupportedN(
            f"small-ring blocks need N in {{2, 3}}, got {params.n_cavities}"
        )
    return _build(params, _ROW_PATTERNS[params.n_cavities])


def _build(params: SystemParams, row_patterns: tuple[Pattern, ...]) -> BlockSystem:
    st = _block_structure(params.n_cavities, params.n_max, row_patterns)
    factors = _origin_factors(params)
    dims = {pat: len(cols) for pat, cols in st.indices.items()}
    na, nb = dims["a"], dims["b"]

    i_a = np.zeros(na, dtype=np.complex128)
    if "a" in st.ientries:
        rows, oids, mults = st.ientries["a"]
        np.add.at(i_a, rows, factors[oids] * mults)
    if any(pat != "a" for pat in st.ientries):
        raise AssertionError("identity-targeted terms outside single-cavity rows")

    kwargs: dict = {}
    if "c" in row_patterns:
        nc = dims["c"]
        kwargs = {
            "m_c": _materialize(st, "M:c", (nc, nc), factors),
            "s_c": _materialize(st, "S:c", (nc, nc), None),
            "b_cb": _materialize(st, "B:cb", (nc, nb), factors),
            "r_cb": _materialize(st, "R:cb", (nc, nb), None),
        }

    return BlockSystem(
        params=params,
        indices=st.indices,
        m_a=_materialize(st, "M:a", (na, na), factors),
        s_a=_materialize(st, "S:a", (na, na), None),
        r_ab=_materialize(st, "R:ab", (na, nb), None),
        i_a=i_a,
        m_b=_materialize(st, "M:b", (nb, nb), factors),
        s_b=_materialize(st, "S:b", (nb, nb), None),
        b_ba=_materialize(st, "B:ba", (nb, na), factors),
        r_ba=_materialize(st, "R:ba", (nb, na), None),
        r_bc=_materialize(st, "R:bc", (nb, dims.get("c", 0)), None),
        r_be=_materialize(st, "R:be", (nb, dims.get("e", 0)), None),
        **kwargs,
    )
