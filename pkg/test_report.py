import csv
import json

import pytest

from emp_cs.bench.report import (
    build_experiment_config,
    emit_report,
    load_config_file,
    merge_overrides,
    report_metadata,
    summarize,
)
from emp_cs.recovery.error_handling import ConfigError, ReportIOError
from emp_cs.recovery.model import Algorithm, Experiment, ReportRow

HEADER = "algorithm,m,trial,srer_db,snr_db,ip,recovered,iterations,termination"


def _row(**overrides):
    values = dict(
        algorithm="EMP",
        m=20,
        trial=0,
        srer_db=12.3456789,
        snr_db=None,
        ip=0.0584,
        recovered=True,
        iterations=4,
        termination="ResidualBelowEpsilon",
    )
    values.update(overrides)
    return ReportRow(**values)


def test_empty_rows_give_header_only_csv(tmp_path):
    path = tmp_path / "report.csv"
    emit_report([], "csv", path)
    assert path.read_text() == HEADER + "\n"


def test_one_row_csv(tmp_path):
    path = tmp_path / "report.csv"
    emit_report([_row()], "csv", path)
    lines = path.read_text().splitlines()
    assert lines == [HEADER, "EMP,20,0,12.345679,,0.058400,true,4,ResidualBelowEpsilon"]


def test_csv_and_json_agree_at_six_decimals(tmp_path):
    rows = [
        _row(),
        _row(algorithm="OMP", trial=1, srer_db=-0.0000001, snr_db=2.71828182, recovered=None),
    ]
    emit_report(rows, "csv", tmp_path / "r.csv")
    emit_report(rows, "json", tmp_path / "r.json")

    with (tmp_path / "r.csv").open() as handle:
        parsed = list(csv.DictReader(handle))
    objects = json.loads((tmp_path / "r.json").read_text())
    assert len(parsed) == len(objects) == 2
    for text_row, obj in zip(parsed, objects):
        assert list(obj) == HEADER.split(",")
        assert text_row["algorithm"] == obj["algorithm"]
        assert int(text_row["m"]) == obj["m"]
        for name in ("srer_db", "snr_db", "ip"):
            if obj[name] is None:
                assert text_row[name] == ""
            else:
                assert float(text_row[name]) == obj[name]
    assert objects[1]["srer_db"] == 0.0
    assert parsed[1]["srer_db"] == "0.000000"


def test_metadata_sidecar(tmp_path):
    cfg = build_experiment_config(
        {"experiment": "NoiselessKnownK", "n": 16, "k": 2, "m_grid": [8], "trials": 3}
    )
    path = tmp_path / "r.csv"
    emit_report([], "csv", path, metadata=report_metadata(cfg, workers=1))
    meta = json.loads((tmp_path / "r.csv.meta.json").read_text())
    assert meta["config"]["trials"] == 3
    assert meta["rows"] == 3 * 5


def test_unwritable_destination(tmp_path):
    with pytest.raises(ReportIOError) as info:
        emit_report([_row()], "csv", tmp_path / "missing" / "r.csv")
    assert "missing" in info.value.path


def test_summarize_means_per_cell():
    rows = [
        _row(trial=1, srer_db=10.0, recovered=False, iterations=2),
        _row(trial=0, srer_db=20.0, recovered=True, iterations=4),
        _row(algorithm="OMP", srer_db=5.0, ip=None, recovered=None),
    ]
    summary = summarize(rows)
    assert [(s.algorithm, s.m) for s in summary] == [("EMP", 20), ("OMP", 20)]
    emp, omp = summary
    assert emp.trials == 2
    assert emp.mean_srer_db == pytest.approx(15.0)
    assert emp.recovery_rate == pytest.approx(0.5)
    assert emp.mean_iterations == pytest.approx(3.0)
    assert emp.mean_snr_db is None
    assert omp.mean_ip is None
    assert omp.recovery_rate is None


def test_load_config_file_casts_values(tmp_path):
    path = tmp_path / "sweep.env"
    path.write_text(
        "# noisy sparse sweep\n"
        "experiment = NoisySparse\n"
        "n = 40\n"
        "k = 4\n"
        "basis = RandomFrame\n"
        "m_grid = 20, 24, 28\n"
        "snr_db = 3\n"
        "algorithms = EMP,OMP\n"
        "workers = 2\n"
    )
    values = load_config_file(path)
    assert values["m_grid"] == [20, 24, 28]
    assert values["input_snr_db"] == 3.0
    assert values["workers"] == 2

    cfg = build_experiment_config(values)
    assert cfg.experiment == Experiment.NOISY_SPARSE
    assert cfg.m_grid == (20, 24, 28)
    assert cfg.algorithms == (Algorithm.EMP, Algorithm.OMP)


def test_load_config_file_rejects_unknown_key(tmp_path):
    path = tmp_path / "bad.env"
    path.write_text("colour = blue\n")
    with pytest.raises(ConfigError):
        load_config_file(path)


def test_load_config_file_missing(tmp_path):
    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "nope.env")


def test_merge_overrides_prefers_flags():
    merged = merge_overrides({"n": 40, "trials": 5}, {"n": 20, "trials": None, "seed": 3})
    assert merged == {"n": 20, "trials": 5, "seed": 3}


@pytest.mark.parametrize(
    "values",
    [
        {"experiment": "NoiselessKnownK", "n": 16, "k": 2, "m_grid": [20]},
        {"experiment": "NoisySparse", "n": 16, "k": 2, "m_grid": [8]},
        {"experiment": "NoisyCompressible", "n": 16, "m_grid": [8], "input_snr_db": 3.0},
        {"experiment": "NoiselessKnownK", "n": 15, "k": 2, "m_grid": [8]},
        {"experiment": "NoiselessKnownK", "n": 16, "k": 2, "m_grid": [8], "algorithms": "BP"},
        {"experiment": "Nonsense", "n": 16, "k": 2, "m_grid": [8]},
        {"experiment": "NoiselessKnownK", "n": 16, "k": 2, "m_grid": [8], "snr_grid": "0,3"},
        {"experiment": "NoisySparse", "n": 16, "k": 2, "m_grid": [8], "snr_grid": "0,3,0"},
    ],
)
def test_invalid_configs_raise_config_error(values):
    with pytest.raises(ConfigError):
        build_experiment_config(values)


def test_snr_grid_rows_add_input_snr_column(tmp_path):
    rows = [_row(input_snr_db=-6.0, snr_db=1.5), _row(input_snr_db=3.0, snr_db=4.0)]
    emit_report(rows, "csv", tmp_path / "r.csv")
    emit_report(rows, "json", tmp_path / "r.json")

    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == HEADER.replace("algorithm,", "algorithm,input_snr_db,")
    assert lines[1].startswith("EMP,-6.000000,20,0,")
    objects = json.loads((tmp_path / "r.json").read_text())
    assert [obj["input_snr_db"] for obj in objects] == [-6.0, 3.0]


def test_summarize_splits_cells_by_input_snr():
    rows = [
        _row(input_snr_db=-6.0, snr_db=1.0),
        _row(input_snr_db=-6.0, trial=1, snr_db=2.0),
        _row(input_snr_db=3.0, snr_db=5.0),
    ]
    summary = summarize(rows)
    assert [(s.input_snr_db, s.trials) for s in summary] == [(-6.0, 2), (3.0, 1)]
    assert summary[0].mean_snr_db == pytest.approx(1.5)


def test_config_file_snr_grid(tmp_path):
    path = tmp_path / "grid.env"
    path.write_text(
        "experiment = NoisySparse\nn = 40\nk = 4\nbasis = RandomFrame\n"
        "m_grid = 20\nsnr_grid = -6, -3, 0, 3\nalgorithms = OMP,EMP\n"
    )
    cfg = build_experiment_config(load_config_file(path))
    assert cfg.snr_levels == (-6.0, -3.0, 0.0, 3.0)
    meta = report_metadata(cfg, workers=1)
    assert meta["rows"] == 4 * 1 * 1 * 2
