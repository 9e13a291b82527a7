import csv
import io
import json
import math

import pytest

import spinqec


def test_version_and_header():
    assert spinqec.__version__
    assert spinqec.CSV_HEADER == "d,p2,p_leak,shots,failures,p_logical,stderr"
    assert spinqec.WORKERS_ENV == "SPINQEC_WORKERS"


def test_cz_identities():
    checks = spinqec.verify_cz_decompositions()
    assert checks
    assert all(c["passed"] for c in checks)


def test_device_numbers():
    j_on = spinqec.mediated_exchange(1e9, 1e10, 1e10)
    j_off = spinqec.mediated_exchange(1e9, 1e12, 1e10)
    assert j_on == pytest.approx(1e6)
    assert j_off == pytest.approx(100)
    assert spinqec.residual_exchange_ratio(1e10, 1e12, "direct") == pytest.approx(1e-2)
    assert spinqec.gate_error_pair(0.008) == pytest.approx((0.008, 0.004))
    with pytest.raises(ValueError):
        spinqec.residual_exchange_ratio(1e10, 1e12, "bogus")


def test_lattice_json_schema():
    for d in (3, 5, 7):
        lat = spinqec.lattice_json(d)
        json.dumps(lat)
        assert lat["distance"] == d
        assert len(lat["data_qubits"]) == d * d
        assert len(lat["x_plaquettes"]) == len(lat["z_plaquettes"]) == (d * d - 1) // 2
        for p in lat["x_plaquettes"] + lat["z_plaquettes"]:
            assert set(p) >= {"id", "row", "col", "colour", "data", "slots", "boundary"}
            assert len(p["data"]) in (2, 4)
        assert len(lat["logical_x_support"]) == d
    with pytest.raises(ValueError):
        spinqec.lattice_json(4)


def test_error_table_normalised():
    for basis in ("x", "z"):
        for gate in ("s", "sqrtswap"):
            t = spinqec.error_table_json(basis, gate, p2=0.01, p_leak=0.004)
            assert math.isclose(sum(e["p"] for e in t["entries"]), 1.0, abs_tol=1e-12)
            assert all(len(e["pauli"]) == 4 for e in t["entries"])


def test_sweep_csv_and_threshold():
    rows = spinqec.run_sweep([3, 5], start=0.006, stop=0.010, step=0.002, shots={3: 1000, 5: 1000}, seed=11)
    assert len(rows) == 6
    text = spinqec.format_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert list(parsed[0]) == spinqec.CSV_HEADER.split(",")
    for r, line in zip(rows, parsed):
        assert int(line["failures"]) == r.failures
        assert float(line["p_logical"]) == pytest.approx(r.failures / r.shots)
    back = spinqec.parse_csv(text)
    assert spinqec.format_csv(back) == text
    again = spinqec.run_sweep([3, 5], start=0.006, stop=0.010, step=0.002, shots={3: 1000, 5: 1000}, seed=11, workers=2)
    assert spinqec.format_csv(again) == text
    with pytest.raises(ValueError):
        spinqec.fit_threshold(rows)


def test_estimate_zero_noise():
    r = spinqec.estimate(3, 0.0, shots=200)
    assert r.failures == 0 and r.shots == 200
