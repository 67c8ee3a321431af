import random

import numpy as np
import pytest

from cavisteady.correlators import canonicalize, conjugate_index, enumerate_canonical
from cavisteady.eom import (
    ReducedSystem,
    assemble_system,
    derivative_terms,
    dump_system,
    ring_links,
    system_structure,
)
from cavisteady.errors import DimensionOverflow
from cavisteady.params import SystemParams

P4 = SystemParams(
    delta=1.0, u=6.0, j=0.3, omega=0.5, gamma0=1.0, n_thermal=0.2, n_cavities=4, n_max=2
)


def by_origin(terms):
    out = {}
    for t in terms:
        out.setdefault(t.origin, []).append(t)
    return out


def test_ring_links_convention():
    assert ring_links(1) == ()
    assert ring_links(2) == ((0, 1),)  # single link, not doubled
    assert len(ring_links(3)) == 3
    assert len(ring_links(6)) == 6


def test_annihilation_row_terms():
    idx = ((0, 1), (0, 0), (0, 0), (0, 0))
    terms = by_origin(derivative_terms(idx, P4))
    # self coupling sums to -i*delta - (gamma - pump)/2
    diag = sum(
        t.coefficient
        for key in ("detuning", "decay", "pump-diagonal")
        for t in terms.get(key, [])
    )
    assert diag == pytest.approx(-1j * P4.delta - (P4.gamma - P4.pump) / 2)
    (drive,) = terms["drive"]
    assert drive.target is None and drive.coefficient == pytest.approx(-1j * P4.omega)
    (raise_,) = terms["kerr-raise"]
    assert raise_.target == ((1, 2), (0, 0), (0, 0), (0, 0))
    assert raise_.coefficient == pytest.approx(-1j * P4.u)
    hops = terms["hop"]
    assert {t.target for t in hops} == {
        ((0, 0), (0, 1), (0, 0), (0, 0)),
        ((0, 0), (0, 0), (0, 0), (0, 1)),
    }
    assert all(t.coefficient == pytest.approx(-1j * P4.j) for t in hops)


def test_population_row_pump_lowers_to_identity():
    idx = ((1, 1), (0, 0), (0, 0), (0, 0))
    terms = by_origin(derivative_terms(idx, P4))
    (lower,) = terms["pump-lower"]
    assert lower.target is None
    assert lower.coefficient == pytest.approx(P4.pump)


def test_no_kerr_raise_on_balanced_top_pair():
    idx = ((2, 2), (0, 0), (0, 0), (0, 0))
    terms = by_origin(derivative_terms(idx, P4))
    assert "kerr-raise" not in terms  # m - n = 0


def test_raising_above_truncation_dropped():
    idx = ((2, 1), (0, 0), (0, 0), (0, 0))
    terms = by_origin(derivative_terms(idx, P4))
    assert "kerr-raise" not in terms  # (3, 2) exceeds n_max = 2
    # hop raising the neighbor is fine, raising the (2, ...) side is not
    for t in terms["hop"]:
        assert all(m <= 2 and n <= 2 for m, n in t.target)


def test_single_cavity_kerr_raise_matches_two_level_example():
    p = SystemParams(delta=0.7, u=6.0, j=0.0, omega=0.0, gamma0=1.0, n_cavities=1, n_max=2)
    terms = by_origin(derivative_terms(((0, 1),), p))
    diag = sum(
        t.coefficient
        for key in ("detuning", "decay", "pump-diagonal")
        for t in terms.get(key, [])
    )
    assert diag == pytest.approx(-1j * p.delta - p.gamma / 2)
    (raise_,) = terms["kerr-raise"]
    assert raise_.target == ((1, 2),)
    assert raise_.coefficient == pytest.approx(-1j * p.u)


def test_appendix_verbatim_drops_pump_diagonal():
    terms = by_origin(
        derivative_terms(((1, 1), (0, 0), (0, 0), (0, 0)), P4.replace(appendix_verbatim=True))
    )
    assert "pump-diagonal" not in terms
    terms = by_origin(derivative_terms(((1, 1), (0, 0), (0, 0), (0, 0)), P4))
    assert "pump-diagonal" in terms


def test_conjugation_symmetry_of_terms():
    rng = random.Random(5)
    for _ in range(50):
        idx = tuple((rng.randint(0, 2), rng.randint(0, 2)) for _ in range(4))
        if all(p == (0, 0) for p in idx):
            continue
        terms = derivative_terms(idx, P4)
        conj_terms = derivative_terms(conjugate_index(idx), P4)
        as_map = {}
        for t in terms:
            key = conjugate_index(t.target) if t.target else None
            as_map[key] = as_map.get(key, 0) + np.conj(t.coefficient)
        conj_map = {}
        for t in conj_terms:
            conj_map[t.target] = conj_map.get(t.target, 0) + t.coefficient
        assert set(as_map) == set(conj_map)
        for key, val in as_map.items():
            assert conj_map[key] == pytest.approx(val)


def test_hop_conserves_total_exponent_sum():
    rng = random.Random(6)
    for _ in range(50):
        idx = tuple((rng.randint(0, 2), rng.randint(0, 2)) for _ in range(4))
        if all(p == (0, 0) for p in idx):
            continue
        total = sum(m + n for m, n in idx)
        for t in derivative_terms(idx, P4):
            if t.origin == "hop":
                assert sum(m + n for m, n in t.target) == total


def test_hop_coefficients_are_integer_multiples_of_ij():
    for idx in enumerate_canonical(4, 2)[:200]:
        for t in derivative_terms(idx, P4):
            if t.origin == "hop":
                ratio = t.coefficient / (1j * P4.j)
                assert abs(ratio.imag) < 1e-12
                assert abs(ratio.real - round(ratio.real)) < 1e-12


def test_zero_grade_sector_closed_without_drive():
    """Without a coherent drive nothing changes the total phase grade
    sum(m) - sum(n); in particular the populations never couple to graded
    correlators. (Per-cavity diagonality itself is only preserved once
    j = 0: tunneling trades population against neighbor coherences.)"""
    p = P4.replace(omega=0.0)
    for idx in enumerate_canonical(4, 2):
        if sum(m - n for m, n in idx) != 0:
            continue
        for t in derivative_terms(idx, p):
            if t.target is not None:
                assert sum(m - n for m, n in t.target) == 0


def test_diagonal_sector_closed_without_drive_or_tunneling():
    p = P4.replace(omega=0.0, j=0.0)
    for idx in enumerate_canonical(4, 2):
        if any(m != n for m, n in idx):
            continue
        for t in derivative_terms(idx, p):
            if t.target is not None:
                assert all(m == n for m, n in t.target)


# ---------------------------------------------------------------------------
# assembled system
# ---------------------------------------------------------------------------


def test_dimension_ring4():
    system = assemble_system(P4)
    assert system.dimension == 1034


def test_constant_vector_two_drive_entries():
    p = SystemParams(delta=0.0, u=6.0, j=0.3, omega=0.5, gamma0=1.0, n_cavities=4, n_max=2)
    system = assemble_system(p)
    nz = np.nonzero(system.ivec)[0]
    entries = {system.indices[k]: system.ivec[k] for k in nz}
    pad = ((0, 0),) * 3
    assert entries == {
        ((0, 1),) + pad: pytest.approx(-1j * 0.5),
        ((1, 0),) + pad: pytest.approx(1j * 0.5),
    }


def test_single_cavity_row_of_matrix():
    p = SystemParams(delta=0.4, u=6.0, j=0.0, omega=0.2, gamma0=1.0, n_cavities=1, n_max=2)
    system = assemble_system(p)
    r = system.index_of[((0, 1),)]
    row = system.matrix.toarray()[r]
    assert row[r] == pytest.approx(-1j * p.delta - p.gamma / 2)
    c = system.index_of[((1, 2),)]
    assert row[c] == pytest.approx(-1j * p.u)


def test_assembly_matches_per_row_terms():
    """The vectorized assembly and the per-row term generator are
    independent paths; they must produce the same reduced matrix."""
    for p in (P4, P4.replace(n_cavities=3, omega=0.0), P4.replace(n_cavities=2)):
        system = assemble_system(p)
        dense = system.matrix.toarray()
        ivec = np.zeros(system.dimension, dtype=complex)
        rebuilt = np.zeros_like(dense)
        for r, idx in enumerate(system.indices):
            for t in derivative_terms(idx, p):
                if t.target is None:
                    ivec[r] += t.coefficient
                else:
                    rebuilt[r, system.index_of[canonicalize(t.target)]] += t.coefficient
        assert np.allclose(rebuilt, dense, atol=1e-14)
        assert np.allclose(ivec, system.ivec, atol=1e-14)


def test_dimension_overflow_guard():
    with pytest.raises(DimensionOverflow):
        assemble_system(P4, max_nonzeros=100)


def test_structure_cached_and_params_free():
    s1 = system_structure(4, 2)
    s2 = system_structure(4, 2)
    assert s1 is s2


def test_dump_system(tmp_path):
    p = SystemParams(delta=0.0, u=1.0, j=0.1, omega=0.2, gamma0=1.0, n_cavities=2, n_max=1)
    system = assemble_system(p)
    path = tmp_path / "dump.txt"
    dump_system(system, str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0].startswith("#")
    body = [ln.split() for ln in lines[1:]]
    assert all(len(parts) == 5 for parts in body)
    # matrix nonzeros all present, identity entries flagged with col = -1
    n_ivec = sum(1 for parts in body if parts[1] == "-1")
    assert n_ivec == int(np.count_nonzero(system.ivec))
    tags = {parts[4] for parts in body}
    assert tags <= {
        "detuning",
        "decay",
        "pump-diagonal",
        "kerr-diagonal",
        "kerr-raise",
        "pump-lower",
        "drive",
        "hop",
    }
