import io
from pathlib import Path

import numpy as np
import pytest

from qotto.disorder import DisorderSpec
from qotto.errors import ParameterError
from qotto.model import EngineParams
from qotto.sweep import (RunRecord, SweepSpec, emit_csv, emit_json,
                         read_csv, read_json, run_sweep, verify_dual_route)

GOLDEN = Path(__file__).parent / "data" / "golden_sweep.csv"

BASE = EngineParams.from_lab(2.0, 3.6, 100.0, 0.2, 0.261, 0.99)


def small_spec(**overrides):
    defaults = dict(base=BASE, axis="tau", grid=(100.0, 140.0),
                    outputs=("xi", "eta"), resolution=1500)
    return SweepSpec(**{**defaults, **overrides})


def test_spec_validation():
    with pytest.raises(ParameterError):
        small_spec(axis="nu_cold")
    with pytest.raises(ParameterError):
        small_spec(grid=())
    with pytest.raises(ParameterError):
        small_spec(grid=(2.0, 1.0))
    with pytest.raises(ParameterError):
        small_spec(outputs=("entropy",))
    with pytest.raises(ParameterError):
        small_spec(outputs=("quenched_eta",))  # needs a disorder spec


def test_rows_echo_inputs_in_grid_order():
    records = run_sweep(small_spec())
    assert [r.index for r in records] == [0, 1]
    assert [r.tau_us for r in records] == [100.0, 140.0]
    assert all(r.axis == "tau" and r.error == "" for r in records)
    assert all(set(r.values) == {"xi", "eta"} for r in records)
    assert records[0].nu_cold_khz == 2.0 and records[0].n_steps == 1500


def test_axis_substitution():
    records = run_sweep(small_spec(axis="g", grid=(0.0, 0.3),
                                   outputs=("xi",)))
    assert [r.g for r in records] == [0.0, 0.3]
    records = run_sweep(small_spec(axis="p_plus_hot", grid=(0.7, 0.99),
                                   outputs=("eta",)))
    assert [r.p_plus_hot for r in records] == [0.7, 0.99]


def test_error_rows_do_not_abort():
    # equal populations break the efficiency closed form at that grid
    # point only; the sweep keeps going
    spec = small_spec(axis="p_plus_hot", grid=(0.261, 0.99),
                      outputs=("eta",))
    records = run_sweep(spec)
    assert records[0].error != "" and records[0].values == {}
    assert records[1].error == "" and "eta" in records[1].values


def test_twin_run_columns():
    spec = small_spec(outputs=("delta_eta_vs_g0",), grid=(100.0,))
    r = run_sweep(spec)[0]
    assert set(r.values) == {"eta", "eta_g0", "delta_eta_vs_g0"}
    assert r.values["delta_eta_vs_g0"] == pytest.approx(
        r.values["eta"] - r.values["eta_g0"], abs=1e-15)
    assert r.values["delta_eta_vs_g0"] > 0.0


def test_sigma_axis_reuses_clean_value():
    disorder = DisorderSpec("gaussian", 0.0, 32, 9)
    spec = SweepSpec(base=BASE, axis="sigma", grid=(0.0, 0.02),
                     outputs=("eta", "quenched_eta"), disorder=disorder,
                     resolution=1500)
    records = run_sweep(spec)
    # the sigma = 0 row collapses to the clean efficiency, bit for bit
    assert records[0].values["quenched_eta_mean"] == records[0].values["eta"]
    assert records[0].values["quenched_eta_std_error"] == 0.0
    assert records[1].values["quenched_eta_mean"] != records[1].values["eta"]


def test_workers_match_serial():
    spec = small_spec(outputs=("xi", "eta"))
    serial = run_sweep(spec)
    pooled = run_sweep(small_spec(outputs=("xi", "eta"), workers=2))
    assert serial == pooled


def test_csv_round_trip(tmp_path):
    records = run_sweep(small_spec())
    path = tmp_path / "sweep.csv"
    emit_csv(records, path)
    assert read_csv(path) == records


def test_json_round_trip(tmp_path):
    records = run_sweep(small_spec())
    path = tmp_path / "sweep.json"
    emit_json(records, path)
    assert read_json(path) == records


def test_round_trip_with_error_rows(tmp_path):
    spec = small_spec(axis="p_plus_hot", grid=(0.261, 0.99),
                      outputs=("eta",))
    records = run_sweep(spec)
    for emit, read, name in ((emit_csv, read_csv, "e.csv"),
                             (emit_json, read_json, "e.json")):
        path = tmp_path / name
        emit(records, path)
        assert read(path) == records


def test_empty_records_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv([], path)
    lines = path.read_text().splitlines()
    assert len(lines) == 1
    assert lines[0].startswith("index,axis,axis_value")
    assert read_csv(path) == []


def test_reruns_byte_identical(tmp_path):
    spec = small_spec()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(run_sweep(spec), a)
    emit_csv(run_sweep(spec), b)
    assert a.read_bytes() == b.read_bytes()


def test_golden_regression(tmp_path):
    spec = SweepSpec(base=BASE, axis="p_plus_hot", grid=(0.7, 0.9, 0.99),
                     outputs=("xi", "eta", "delta_eta_vs_g0"),
                     resolution=4000)
    path = tmp_path / "regen.csv"
    emit_csv(run_sweep(spec), path)
    assert path.read_bytes() == GOLDEN.read_bytes()


def test_seed_column_echoes_disorder_seed(tmp_path):
    disorder = DisorderSpec("uniform", 0.1, 16, 4242)
    spec = SweepSpec(base=BASE, axis="sigma", grid=(0.05,),
                     outputs=("quenched_eta",), disorder=disorder,
                     resolution=1000)
    records = run_sweep(spec)
    assert records[0].seed == 4242
    path = tmp_path / "seeded.csv"
    emit_csv(records, path)
    assert read_csv(path)[0].seed == 4242


def test_verify_dual_route_thresholds():
    dev = verify_dual_route(BASE, taus_us=(100.0, 400.0), gs=(0.0, 1.0),
                            n_steps=20_000, analytic_steps=400_000)
    assert dev["propagator"] < 1e-8
    assert dev["matrix_elements"] < 1e-12
    assert dev["first_law"] < 1e-12
    assert dev["efficiency"] < 1e-10
    assert dev["analytic_g1"] < 1e-10
