import numpy as np
import pytest

from cavisteady.params import SystemParams
from cavisteady.scan import ScanConfig, rows_to_csv, rows_to_json, run_scan

BASE = SystemParams(
    delta=0.0, u=6.0, j=0.3, omega=0.5, gamma0=1.0, n_cavities=4, n_max=2
)


def test_row_count_and_order():
    config = ScanConfig(
        base=BASE, scan_param="j", start=0.0, stop=1.0, steps=11,
        methods=("exact", "pert2"),
    )
    rows = run_scan(config)
    assert len(rows) == 22
    # parameter-major, method-minor
    assert [r.method for r in rows[:4]] == ["exact", "pert2", "exact", "pert2"]
    assert rows[0].param_value == 0.0
    assert rows[-1].param_value == 1.0
    assert all(r.error == "" for r in rows)


def test_exact_at_zero_tunneling_equals_order_zero():
    config = ScanConfig(
        base=BASE.replace(j=0.0), scan_param="omega", start=0.1, stop=0.7, steps=4,
        methods=("exact", "pert0"),
    )
    rows = run_scan(config)
    by_value = {}
    for r in rows:
        by_value.setdefault(r.param_value, {})[r.method] = r
    for pair in by_value.values():
        assert pair["exact"].n_a == pytest.approx(pair["pert0"].n_a, abs=1e-10)
        assert pair["exact"].g2 == pytest.approx(pair["pert0"].g2, abs=1e-10)


def test_byte_identical_reruns():
    config = ScanConfig(
        base=BASE, scan_param="delta", start=-1.0, stop=1.0, steps=5,
        methods=("exact", "pert1"),
    )
    first = rows_to_csv(config, run_scan(config))
    second = rows_to_csv(config, run_scan(config))
    assert first == second
    assert rows_to_json(config, run_scan(config)) == rows_to_json(
        config, run_scan(config)
    )


def test_workers_do_not_change_output():
    config = ScanConfig(
        base=BASE, scan_param="j", start=0.0, stop=0.4, steps=5,
        methods=("exact", "pert2"),
    )
    serial = rows_to_csv(config, run_scan(config))
    threaded = rows_to_csv(
        ScanConfig(
            base=BASE, scan_param="j", start=0.0, stop=0.4, steps=5,
            methods=("exact", "pert2"), workers=4,
        ),
        run_scan(
            ScanConfig(
                base=BASE, scan_param="j", start=0.0, stop=0.4, steps=5,
                methods=("exact", "pert2"), workers=4,
            )
        ),
    )
    assert serial == threaded


def test_per_point_errors_recorded_and_scan_continues():
    # pert methods are undefined for N = 2: the rows carry the error,
    # the exact rows still come out
    config = ScanConfig(
        base=BASE.replace(n_cavities=2), scan_param="j", start=0.0, stop=0.2, steps=3,
        methods=("exact", "pert2"),
    )
    rows = run_scan(config)
    assert len(rows) == 6
    for r in rows:
        if r.method == "pert2":
            assert "UnsupportedN" in r.error
            assert r.n_a is None
        else:
            assert r.error == ""
            assert r.n_a is not None


def test_oracle_method_uses_cut():
    config = ScanConfig(
        base=BASE.replace(n_cavities=2, n_max=4), scan_param="j",
        start=0.1, stop=0.1, steps=1, methods=("exact", "oracle"), oracle_cut=4,
    )
    rows = run_scan(config)
    exact, oracle = rows
    assert oracle.error == ""
    assert oracle.n_a == pytest.approx(exact.n_a, rel=1e-4)


def test_csv_format():
    config = ScanConfig(
        base=BASE, scan_param="j", start=0.0, stop=0.1, steps=2, methods=("exact",),
    )
    text = rows_to_csv(config, run_scan(config))
    lines = text.splitlines()
    assert lines[0].startswith("#") and "gamma0" in lines[0]
    assert lines[1].startswith("# base:")
    assert lines[2] == "param_name,param_value,method,n_a,g2,re_nn,im_nn,residual,error"
    assert len(lines) == 3 + 2
    # 17 significant digits survive a round trip
    value = float(lines[4].split(",")[3])
    assert f"{value:.17g}" == lines[4].split(",")[3]


def test_single_point_config():
    config = ScanConfig(base=BASE, scan_param="", methods=("exact",))
    rows = run_scan(config)
    assert len(rows) == 1
    assert rows[0].param_name == ""
    assert np.isnan(rows[0].param_value)


def test_invalid_configs_rejected():
    with pytest.raises(ValueError):
        ScanConfig(base=BASE, scan_param="q", start=0, stop=1, steps=2)
    with pytest.raises(ValueError):
        ScanConfig(base=BASE, scan_param="j", start=0, stop=1, steps=0)
    with pytest.raises(ValueError):
        ScanConfig(base=BASE, scan_param="j", start=1.0, stop=0.0, steps=2)
    with pytest.raises(ValueError):
        ScanConfig(base=BASE, scan_param="j", start=0, stop=1, steps=2, methods=())
    with pytest.raises(ValueError):
        ScanConfig(base=BASE, scan_param="j", start=0, stop=1, steps=2,
                   methods=("exactish",))


def test_observable_subset():
    config = ScanConfig(
        base=BASE, scan_param="j", start=0.1, stop=0.1, steps=1,
        methods=("exact",), observables=("n_a",),
    )
    (row,) = run_scan(config)
    assert row.n_a is not None
    assert row.g2 is None and row.re_nn is None
