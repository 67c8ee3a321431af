"""Correlator indexing and dihedral-orbit canonicalization.

A normal-ordered moment of the N-cavity ring,
``< a_1^+^m1 a_1^n1 ... a_N^+^mN a_N^nN >``, is indexed by a length-N tuple
of exponent pairs ``((m1, n1), ..., (mN, nN))``. Ring translations and the
reflection leave the physics invariant, so each moment has up to 2N
equivalent index tuples. Everything downstream works with one canonical
representative per orbit.

The canonical representative is the minimum of the 2N dihedral images
under a total order on pair sequences: pairs are ranked by descending
(m + n), ties broken by descending m, and sequences compared
lexicographically in that rank. This realizes the usual bookkeeping rules
(nonzero pairs pushed left and clustered, heaviest pair first) while
remaining a total order on all orbits.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import DimensionOverflow

Pair = tuple[int, int]
CorrIndex = tuple[Pair, ...]

# enumeration guard: P**N index tuples are materialized as a dense array
_MAX_FULL_INDICES = 20_000_000


@lru_cache(maxsize=None)
def dihedral_perms(n: int) -> tuple[tuple[int, ...], ...]:
    """Distinct index permutations of the dihedral group of the n-ring.

    Image of a sequence s under perm sigma is ``s[sigma[0]], s[sigma[1]], ...``.
    Rotations come first (identity leading), reflections after; duplicates
    (n <= 2) are removed.
    """
    perms: list[tuple[int, ...]] = []
    for r in range(n):
        perms.append(tuple((i + r) % n for i in range(n)))
    for r in range(n):
        perms.append(tuple((r - i) % n for i in range(n)))
    seen: set[tuple[int, ...]] = set()
    out = []
    for p in perms:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return tuple(out)


@lru_cache(maxsize=None)
def pair_table(n_max: int) -> tuple[tuple[Pair, ...], dict[Pair, int]]:
    """All exponent pairs up to n_max, ranked by the canonical pair order.

    Rank 0 is the heaviest pair (n_max, n_max); the all-zero pair ranks
    last, so the identity tuple always encodes to the largest integer.
    """
    pairs = sorted(
        ((m, n) for m in range(n_max + 1) for n in range(n_max + 1)),
        key=lambda p: (-(p[0] + p[1]), -p[0]),
    )
    rank = {p: i for i, p in enumerate(pairs)}
    return tuple(pairs), rank


def pair_key(p: Pair) -> tuple[int, int]:
    """Sort key realizing the canonical pair order (heaviest first)."""
    return (-(p[0] + p[1]), -p[0])


def index_is_identity(idx: CorrIndex) -> bool:
    return all(m == 0 and n == 0 for m, n in idx)


def conjugate_index(idx: CorrIndex) -> CorrIndex:
    """Swap creation/annihilation exponents on every cavity."""
    return tuple((n, m) for m, n in idx)


def dihedral_images(idx: CorrIndex) -> Iterator[CorrIndex]:
    """All (not necessarily distinct) dihedral images of an index tuple."""
    for perm in dihedral_perms(len(idx)):
        yield tuple(idx[k] for k in perm)


def canonicalize(idx: CorrIndex) -> CorrIndex:
    """Canonical representative of the dihedral orbit of ``idx``.

    Idempotent and constant on each orbit; the representative is the
    image minimizing (pair-rank sequence, raw pair sequence).
    """
    best: tuple | None = None
    best_img: CorrIndex | None = None
    for perm in dihedral_perms(len(idx)):
        img = tuple(idx[k] for k in perm)
        key = (tuple(pair_key(p) for p in img), img)
        if best is None or key < best:
            best = key
            best_img = img
    assert best_img is not None
    return best_img


def orbit_size(idx: CorrIndex) -> int:
    """Number of distinct dihedral images (divides 2N)."""
    return len(set(dihedral_images(idx)))


def classify_support(idx: CorrIndex) -> str:
    """Support-pattern tag of an index tuple on the N-ring.

    a: one cavity; b: adjacent pair; e: pair at ring distance two;
    c: three consecutive cavities; d: four consecutive cavities;
    other: any remaining geometry (possible only for N >= 5).
    Invariant under the dihedral action, so callers need not canonicalize.
    """
    n = len(idx)
    support = [i for i, (m, nn) in enumerate(idx) if m or nn]
    k = len(support)
    if k == 0:
        return "identity"
    if k == 1:
        return "a"
    if k == 2:
        i, j = support
        dist = min(abs(i - j), n - abs(i - j))
        if dist == 1:
            return "b"
        if dist == 2:
            return "e"
        return "other"
    if k in (3, 4):
        sup = set(support)
        for s in support:
            if all((s + t) % n in sup for t in range(k)):
                return "c" if k == 3 else "d"
        return "other"
    return "other"


# ---------------------------------------------------------------------------
# enumeration of the minimal (canonical) correlator set
# ---------------------------------------------------------------------------


def _digit_matrix(n_cavities: int, n_pairs: int) -> np.ndarray:
    """All rank tuples of length N over n_pairs symbols, C-order (T x N)."""
    total = n_pairs**n_cavities
    if total * n_cavities > _MAX_FULL_INDICES:
        raise DimensionOverflow(
            f"{n_pairs}^{n_cavities} index tuples exceed the enumeration cap"
        )
    cols = np.unravel_index(np.arange(total), (n_pairs,) * n_cavities)
    return np.stack(cols, axis=1).astype(np.int64)


def _min_encoding(digits: np.ndarray, n_pairs: int) -> np.ndarray:
    """Per-row minimum of the base-``n_pairs`` encodings over all dihedral images."""
    n = digits.shape[1]
    powers = n_pairs ** np.arange(n - 1, -1, -1, dtype=np.int64)
    best: np.ndarray | None = None
    for perm in dihedral_perms(n):
        enc = digits[:, list(perm)] @ powers
        best = enc if best is None else np.minimum(best, enc)
    assert best is not None
    return best


def encode_index(idx: CorrIndex, n_max: int) -> int:
    """Base-P integer encoding of a pair-rank sequence (P = (n_max+1)^2)."""
    _, rank = pair_table(n_max)
    n_pairs = (n_max + 1) ** 2
    enc = 0
    for p in idx:
        enc = enc * n_pairs + rank[p]
    return enc


@lru_cache(maxsize=None)
def pattern_canonical_indices(
    n_cavities: int, n_max: int, pattern: str
) -> tuple[CorrIndex, ...]:
    """Canonical correlators of one support pattern, generated directly.

    Avoids materializing the full index space (which grows as
    (n_max+1)^(2N)); the per-pattern canonical forms are closed-form:
    the support sits left-packed at positions (0,), (0,1), (0,1,2) or
    (0,2) and the outermost pairs are ordered heaviest-first. Output is
    ascending in the canonical total order, matching
    :func:`enumerate_canonical`.
    """
    pairs, _ = pair_table(n_max)
    live = pairs[:-1]  # all nonzero pairs, ascending rank (heaviest first)
    zero = (0, 0)
    n = n_cavities

    def pad(entries: dict[int, Pair]) -> CorrIndex:
        return tuple(entries.get(i, zero) for i in range(n))

    out: list[CorrIndex] = []
    if pattern == "a":
        out = [pad({0: p}) for p in live]
    elif pattern == "b":
        if n < 2:
            return ()
        for rp, p in enumerate(live):
            for q in live[rp:]:
                out.append(pad({0: p, 1: q}))
    elif pattern == "c":
        if n < 3:
            return ()
        if n == 3:
            # the support is the whole ring: the full dihedral group acts
            seen: set[CorrIndex] = set()
            for p in live:
                for q in live:
                    for r in live:
                        c = canonicalize((p, q, r))
                        if c not in seen:
                            seen.add(c)
                            out.append(c)
            out.sort(key=lambda idx: encode_index(idx, n_max))
        else:
            # each orbit owns one triple (p, q, r) with rank p <= rank r
            # (outer pair order fixed by the middle-fixing reflection); the
            # minimal dihedral image is left-packed when the outer pair p
            # is at least as heavy as the middle q, and otherwise starts
            # with the middle: (q, p, 0, ..., 0, r)
            for rp, p in enumerate(live):
                for rq, q in enumerate(live):
                    for r in live[rp:]:
                        if rp <= rq:
                            out.append(pad({0: p, 1: q, 2: r}))
                        else:
                            out.append(pad({0: q, 1: p, n - 1: r}))
            out.sort(key=lambda idx: encode_index(idx, n_max))
    elif pattern == "e":
        if n < 4:
            return ()
        for rp, p in enumerate(live):
            for r in live[rp:]:
                out.append(pad({0: p, 2: r}))
    else:
        raise ValueError(f"no direct generation for pattern {pattern!r}")
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_canonical(n_cavities: int, n_max: int) -> tuple[CorrIndex, ...]:
    """Ordered minimal set: one representative per dihedral orbit.

    The identity (all-zero) tuple is excluded; it enters the equations as
    the constant term. Output is sorted ascending in the canonical total
    order (heaviest correlators first), which is also the row order of the
    assembled linear system.
    """
    pairs, _ = pair_table(n_max)
    n_pairs = len(pairs)
    digits = _digit_matrix(n_cavities, n_pairs)
    total = digits.shape[0]
    powers = n_pairs ** np.arange(n_cavities - 1, -1, -1, dtype=np.int64)
    enc = digits @ powers  # equals arange(total) by construction
    best = _min_encoding(digits, n_pairs)
    mask = best == enc
    mask[total - 1] = False  # identity encodes to P^N - 1
    out = []
    for i in np.nonzero(mask)[0]:
        out.append(tuple(pairs[d] for d in digits[i]))
    return tuple(out)
