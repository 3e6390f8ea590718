import json
import os
from multiprocessing import get_all_start_methods, get_context
import numpy as np
import pytest
from helpers import (BenchReport,
                     BenchRow,
                     DatasetSpec,
                     SweepRow,
                     make_bench_config,
                     load_bench_config,
                     load_dataset,
                     rate_sweep,
                     select_best_rate,
                     compare_methods,
                     run_method_comparison,
                     emit_report,
                     read_report_csv,
                     make_tpe_config,
                     space_to_json,
                     stratified_kfold,
                     BenchConfigError,
                     InvalidArgumentError)
from helpers.hpo.bench import bench_functions
from conftest import make_blobs

BANKNOTE_SWEEP = [(0.10, 0.9991), (0.20, 0.9998), (0.25, 0.9995), (0.50, 0.9999)]


def _sweep(pairs):
    return [SweepRow(rate=rate, mean_gini=gini, time_seconds=1.0) for rate, gini in pairs]


@pytest.fixture
def space_file(tmp_path, small_space):
    path = tmp_path / "space.json"
    path.write_text(json.dumps(space_to_json(small_space)), encoding="utf-8")
    return str(path)


@pytest.fixture
def quick_config(space_file):
    return make_bench_config(rates=[0.5], space=space_file,
                             budgets={"random": 3, "tpe": 4, "randomized": 4,
                                      "grid_resolution": 1, "grid_max_points": 4})


def _dataset_csv(csv_writer, name, seed):
    dataset = make_blobs(60, 60, n_features=2, shift=2.0, seed=seed, name=name)
    rows = [[*features, label] for features, label in zip(dataset.features.tolist(),
                                                          dataset.labels.tolist())]
    return str(csv_writer(f"{name}.csv", ["a", "b", "y"], rows))


def test_select_best_rate_examples():
    assert select_best_rate(_sweep(BANKNOTE_SWEEP), 0.002) == 0.10
    assert select_best_rate(_sweep([(0.1, 0.5), (0.2, 0.5), (0.5, 0.5)])) == 0.1
    assert select_best_rate(_sweep([(0.1, 0.9), (0.2, 0.95), (0.5, 0.93)]), 0.0) == 0.2


def test_select_best_rate_is_monotone_in_epsilon():
    rng = np.random.default_rng(0)
    for _ in range(50):
        rows = _sweep(zip([0.1, 0.2, 0.25, 0.5], rng.uniform(0.8, 1.0, size=4)))
        selected = [select_best_rate(rows, epsilon) for epsilon in (0.0, 0.001, 0.01, 0.05, 1.0)]
        assert selected == sorted(selected, reverse=True)
        assert selected[-1] == 0.1


def test_select_best_rate_errors():
    with pytest.raises(InvalidArgumentError):
        select_best_rate([])
    with pytest.raises(InvalidArgumentError):
        select_best_rate(_sweep(BANKNOTE_SWEEP), -0.1)


def test_rate_sweep_covers_every_rate(small_dataset, small_space):
    rows = rate_sweep(small_dataset, [0.5, 0.1, 0.25, 0.2], space=small_space,
                      config=make_tpe_config(n_trials=3), seed=0)
    assert [row.rate for row in rows] == [0.1, 0.2, 0.25, 0.5]
    assert all(-1 <= row.mean_gini <= 1 and row.time_seconds > 0 for row in rows)
    assert all(row.full_data_gini is None for row in rows)


def test_rate_sweep_rejects_bad_rates(small_dataset):
    with pytest.raises(InvalidArgumentError):
        rate_sweep(small_dataset, [])
    with pytest.raises(InvalidArgumentError):
        rate_sweep(small_dataset, [0.5, 1.2])


def test_compare_methods_share_fold_plan(small_dataset, small_space, quick_config):
    results = compare_methods(small_dataset, quick_config, 0.5, space=small_space)
    assert list(results) == ["grid", "random", "tpe", "randomized"]
    shared = stratified_kfold(small_dataset, quick_config.folds, quick_config.seed)
    for method in ("grid", "random", "tpe"):
        assert results[method].fold_plan == shared
    assert results["randomized"].full_data_fold_plan == shared
    assert results["randomized"].fold_plan.rows.size < small_dataset.n_rows
    assert len(results["grid"].trials) <= 4
    assert len(results["random"].trials) == 3
    assert len(results["tpe"].trials) == 4


def test_run_method_comparison_two_datasets(csv_writer, quick_config):
    specs = [DatasetSpec(path=_dataset_csv(csv_writer, "first", 1), target="y"),
             DatasetSpec(path=_dataset_csv(csv_writer, "second", 2), target="y")]
    report = run_method_comparison(specs, quick_config)
    assert len(report.rows) == 8
    assert [row.dataset for row in report.rows] == ["first"] * 4 + ["second"] * 4
    assert [row.rate for row in report.rows if row.method == "randomized"] == [0.5, 0.5]
    assert all(row.rate is None for row in report.rows if row.method != "randomized")
    assert report.metadata["errors"] == {}
    assert report.metadata["selected_rates"] == {"first": 0.5, "second": 0.5}
    assert set(report.metadata["full_data"]) == {"first", "second"}
    assert report.metadata["K"] == 3


def test_run_method_comparison_method_subset(small_dataset, space_file):
    config = make_bench_config(methods=["random"], space=space_file, budgets={"random": 2})
    report = run_method_comparison([small_dataset], config)
    assert [row.method for row in report.rows] == ["random"]


def test_run_method_comparison_records_load_errors(csv_writer, tmp_path, space_file):
    config = make_bench_config(methods=["random", "default"], space=space_file,
                               budgets={"random": 2}, overrides={"n_rounds": 5})
    specs = [DatasetSpec(path=str(tmp_path / "absent.csv"), target="y", label="absent"),
             DatasetSpec(path=_dataset_csv(csv_writer, "present", 3), target="y")]
    report = run_method_comparison(specs, config)
    assert [row.method for row in report.rows] == ["random", "default"]
    assert "absent" in report.metadata["errors"]


def test_run_method_comparison_sweeps_when_rate_unset(small_dataset, space_file):
    config = make_bench_config(methods=["randomized"], rates=[0.25, 0.5], space=space_file,
                               budgets={"randomized": 3})
    report = run_method_comparison([small_dataset], config)
    assert len(report.metadata["sweeps"]["small"]) == 2
    assert report.rows[0].rate in (0.25, 0.5)


def _parallel_config(space_file, **fields):
    return make_bench_config(methods=["random", "randomized"], rates=[0.5], space=space_file,
                             budgets={"random": 2, "randomized": 3}, parallel=True, **fields)


def _blob_pair():
    return [make_blobs(60, 60, n_features=2, shift=2.0, seed=1, name="first"),
            make_blobs(60, 60, n_features=2, shift=2.0, seed=2, name="second")]


def _scores(report):
    return [(row.dataset, row.method, row.rate, row.mean_gini) for row in report.rows]


def test_parallel_comparison_matches_sequential(space_file):
    config = _parallel_config(space_file)
    parallel = run_method_comparison(_blob_pair(), config)
    sequential = run_method_comparison(_blob_pair(), config.copy(update={"parallel": False}))
    assert _scores(parallel) == _scores(sequential)
    assert parallel.metadata["errors"] == {}
    assert parallel.metadata["selected_rates"] == {"first": 0.5, "second": 0.5}


def test_parallel_comparison_with_spawned_workers(space_file, monkeypatch):
    monkeypatch.setattr(bench_functions, "MpProcess", get_context("spawn").Process)
    report = run_method_comparison(_blob_pair(), _parallel_config(space_file))
    assert [row.dataset for row in report.rows] == ["first", "first", "second", "second"]


def test_parallel_worker_records_its_error(space_file):
    config = _parallel_config(space_file, overrides={"booster": "dart"})
    report = run_method_comparison(_blob_pair(), config)
    assert report.rows == []
    assert set(report.metadata["errors"]) == {"first", "second"}
    assert all(error.startswith("InvalidArgumentError:")
               for error in report.metadata["errors"].values())


@pytest.mark.skipif("fork" not in get_all_start_methods(), reason="needs fork")
def test_parallel_worker_exit_code_is_recorded(space_file, monkeypatch):
    monkeypatch.setattr(bench_functions, "MpProcess", get_context("fork").Process)
    monkeypatch.setattr(bench_functions, "_compare_one", lambda *args: os._exit(3))
    report = run_method_comparison(_blob_pair(), _parallel_config(space_file))
    assert report.metadata["errors"] == {"first": "worker process exited with code 3",
                                         "second": "worker process exited with code 3"}


def test_sequential_comparison_propagates_learner_errors(space_file):
    config = _parallel_config(space_file, overrides={"booster": "dart"})
    with pytest.raises(InvalidArgumentError):
        run_method_comparison(_blob_pair(), config.copy(update={"parallel": False}))


def test_run_method_comparison_rejects_repeated_labels(csv_writer, space_file):
    path = _dataset_csv(csv_writer, "twice", 4)
    specs = [DatasetSpec(path=path, target="y"), DatasetSpec(path=path, target="y")]
    with pytest.raises(BenchConfigError):
        run_method_comparison(specs, make_bench_config(methods=["random"], space=space_file))
    with pytest.raises(BenchConfigError):
        run_method_comparison([make_blobs(20, 20, name="d"), make_blobs(30, 30, name="d")],
                              make_bench_config(methods=["random"], space=space_file))


def test_emit_empty_report(tmp_path):
    path = tmp_path / "empty.csv"
    emit_report(BenchReport(), "csv", path)
    assert path.read_text(encoding="utf-8").splitlines() == [
        "dataset,method,rate,mean_gini,time_seconds"]


def test_emit_report_formats_values(tmp_path):
    report = BenchReport(rows=[BenchRow(dataset="banknote", method="randomized", rate=0.2,
                                        mean_gini=0.99981, time_seconds=0.312),
                               BenchRow(dataset="banknote", method="grid",
                                        mean_gini=0.9991, time_seconds=12.0)])
    path = tmp_path / "report.csv"
    emit_report(report, "csv", path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[1] == "banknote,randomized,0.2,0.9998,0.31"
    assert lines[2] == "banknote,grid,,0.9991,12.00"

    parsed = read_report_csv(path)
    assert [(row.method, row.rate) for row in parsed] == [("randomized", 0.2), ("grid", None)]
    assert parsed[0].mean_gini == pytest.approx(0.9998)


def test_emit_markdown_report(tmp_path):
    report = BenchReport(rows=[BenchRow(dataset="d", method="randomized", rate=0.25,
                                        mean_gini=0.5, time_seconds=1.0, full_data_gini=0.45),
                               BenchRow(dataset="d", method="tpe", mean_gini=0.6,
                                        time_seconds=2.0)])
    path = tmp_path / "report.md"
    emit_report(report, "markdown", path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 4
    assert lines[2] == "| d | randomized | 0.25 | 0.5000 | 1.00 | 0.4500 |"


def test_emit_report_rejects_unknown_format(tmp_path):
    with pytest.raises(InvalidArgumentError):
        emit_report(BenchReport(), "xlsx", tmp_path / "report.xlsx")


@pytest.mark.parametrize("fields", [{"methods": ["anneal"]}, {"methods": []},
                                    {"rates": [1.5]}, {"folds": 1}, {"format": "xlsx"},
                                    {"datasets": [{"path": "x.csv"}]}, {"unknown": True}])
def test_bench_config_validation(fields):
    with pytest.raises(BenchConfigError):
        make_bench_config(**fields)


def test_bench_config_defaults():
    config = make_bench_config()
    assert config.methods == ["grid", "random", "tpe", "randomized"]
    assert config.rates == [0.1, 0.2, 0.25, 0.5]
    assert config.folds == 3
    assert config.budgets.grid_resolution == 2


def test_load_bench_config(tmp_path):
    path = tmp_path / "bench.json"
    path.write_text(json.dumps({"datasets": [{"path": "data/banknote.csv",
                                              "preset": "banknote"}],
                                "rates": [0.2]}), encoding="utf-8")
    config = load_bench_config(path)
    assert config.datasets[0].target == "class"
    assert config.datasets[0].label == "banknote"
    with pytest.raises(BenchConfigError):
        load_bench_config(tmp_path / "absent.json")


def test_dataset_spec_preset_keeps_explicit_fields():
    spec = DatasetSpec(path="t.csv", preset="transfusion", label="blood")
    assert spec.target == "whether he/she donated blood in March 2007"
    assert spec.label == "blood"


@pytest.mark.slow
def test_banknote_protocol(banknote_csv, tmp_path):
    space_path = tmp_path / "space.json"
    space_path.write_text(json.dumps({
        "eta": {"dist": "loguniform", "lo": 0.01, "hi": 0.3},
        "max_depth": {"dist": "quniform", "lo": 2, "hi": 6, "q": 1},
        "n_rounds": {"dist": "quniform", "lo": 50, "hi": 150, "q": 50}}), encoding="utf-8")
    config = make_bench_config(rates=[0.2], space=str(space_path))
    report = run_method_comparison([load_dataset(DatasetSpec(path=str(banknote_csv),
                                                             preset="banknote"))], config)
    assert [row.method for row in report.rows] == ["grid", "random", "tpe", "randomized"]
    path = tmp_path / "banknote.csv"
    emit_report(report, "csv", path)
    parsed = read_report_csv(path)
    assert len(parsed) == 4
    assert all(abs(row.mean_gini - original.mean_gini) <= 5e-5
               for row, original in zip(parsed, report.rows))
