from math import floor
import numpy as np
import pytest
from helpers import (Dataset,
                     load_csv,
                     stratified_kfold,
                     stratified_sample,
                     per_class_sample_size,
                     describe_dataset,
                     DataLoadError,
                     EmptyDataError,
                     MissingTargetError,
                     UnparseableCellError,
                     SingleClassError,
                     StratificationError,
                     InvalidArgumentError)


def _labelled(positives, negatives):
    labels = np.array([1] * positives + [0] * negatives)
    return Dataset(np.arange(labels.size, dtype=float).reshape(-1, 1), labels)


def test_load_csv_encodes_categorical_levels(csv_writer):
    path = csv_writer("colors.csv", ["size", "color", "y"],
                      [[1.5, "red", 1], [2.0, "blue", 0], [0.5, "green", 1], [3.0, "red", 0]])
    dataset = load_csv(path, target="y", categorical=["color"])
    assert dataset.n_features == 4
    assert dataset.feature_names == ("size", "color=blue", "color=green", "color=red")
    assert dataset.features[:, 1:].sum(axis=1).tolist() == [1, 1, 1, 1]
    assert dataset.features[0].tolist() == [1.5, 0, 0, 1]
    assert dataset.labels.tolist() == [1, 0, 1, 0]
    assert dataset.name == "colors"


def test_load_csv_missing_cells(csv_writer):
    path = csv_writer("gaps.csv", ["a", "b", "y"],
                      [["?", "x", 1], [2, "", 0], [3, "NA", 1], [4, "x", 0]])
    dataset = load_csv(path, target="y", categorical=["b"])
    assert dataset.missing_mask.tolist() == [[True, False], [False, True],
                                             [False, True], [False, False]]
    assert dataset.features[0, 0] == 0.0
    assert dataset.features[1:3, 1].tolist() == [0.0, 0.0]


def test_load_csv_custom_tokens_and_positive_label(csv_writer):
    path = csv_writer("custom.csv", ["a", "outcome"],
                      [["-", "yes"], [1, "no"], [2, "yes"]])
    dataset = load_csv(path, target="outcome", missing_tokens=["-"], positive_label="yes")
    assert dataset.labels.tolist() == [1, 0, 1]
    assert dataset.missing_mask[:, 0].tolist() == [True, False, False]


def test_load_csv_is_deterministic(csv_writer):
    path = csv_writer("same.csv", ["a", "c", "y"], [[1, "p", 1], [2, "q", 0], ["?", "p", 0]])
    first = load_csv(path, target="y", categorical=["c"])
    second = load_csv(path, target="y", categorical=["c"])
    assert np.array_equal(first.features, second.features)
    assert np.array_equal(first.missing_mask, second.missing_mask)
    assert first.feature_names == second.feature_names


def test_load_csv_header_only(csv_writer):
    path = csv_writer("empty.csv", ["a", "y"], [])
    with pytest.raises(EmptyDataError):
        load_csv(path, target="y")


def test_load_csv_empty_file(tmp_path):
    path = tmp_path / "nothing.csv"
    path.write_text("", encoding="utf-8")
    with pytest.raises(EmptyDataError):
        load_csv(path, target="y")


def test_load_csv_missing_target(csv_writer):
    path = csv_writer("notarget.csv", ["a", "b"], [[1, 2]])
    with pytest.raises(MissingTargetError):
        load_csv(path, target="y")


def test_load_csv_unparseable_cell(csv_writer):
    path = csv_writer("bad.csv", ["a", "y"], [[1, 1], ["abc", 0]])
    with pytest.raises(UnparseableCellError) as err:
        load_csv(path, target="y")
    assert "'a'" in str(err.value)


def test_load_csv_single_class(csv_writer):
    path = csv_writer("oneclass.csv", ["a", "y"], [[1, 0], [2, 0]])
    with pytest.raises(SingleClassError):
        load_csv(path, target="y")


def test_load_csv_absent_file(tmp_path):
    with pytest.raises(DataLoadError):
        load_csv(tmp_path / "absent.csv", target="y")


def test_load_errors_share_a_base():
    assert issubclass(MissingTargetError, DataLoadError)
    assert issubclass(UnparseableCellError, DataLoadError)


def test_dataset_validates_labels():
    with pytest.raises(InvalidArgumentError):
        Dataset([[1.0], [2.0]], [0, 2])
    with pytest.raises(InvalidArgumentError):
        Dataset([[1.0], [2.0]], [0])


def test_kfold_nine_rows():
    plan = stratified_kfold(_labelled(6, 3), k=3, seed=0)
    labels = _labelled(6, 3).labels
    for _, test in plan:
        assert labels[test].sum() == 2
        assert (labels[test] == 0).sum() == 1


def test_kfold_ten_rows():
    dataset = _labelled(7, 3)
    plan = stratified_kfold(dataset, k=3, seed=0)
    positives = sorted(int(dataset.labels[test].sum()) for _, test in plan)
    assert positives == [2, 2, 3]


def test_kfold_rejects_small_k_and_small_classes():
    with pytest.raises(InvalidArgumentError):
        stratified_kfold(_labelled(6, 3), k=1, seed=0)
    with pytest.raises(StratificationError):
        stratified_kfold(_labelled(6, 2), k=3, seed=0)


def test_kfold_is_deterministic():
    dataset = _labelled(40, 25)
    assert stratified_kfold(dataset, 5, seed=11) == stratified_kfold(dataset, 5, seed=11)


def test_kfold_partition_properties():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(60, 5001))
        k = int(rng.choice([2, 3, 5]))
        positives = int(np.clip(round(rng.uniform(0.05, 0.95) * n), 5, n - 5))
        labels = rng.permutation(np.array([1] * positives + [0] * (n - positives)))
        dataset = Dataset(np.zeros((n, 1)), labels)
        plan = stratified_kfold(dataset, k, seed=int(rng.integers(1 << 30)))

        assert len(plan) == k
        tests = np.concatenate([test for _, test in plan])
        assert np.array_equal(np.sort(tests), np.arange(n))
        for train, test in plan:
            assert np.intersect1d(train, test).size == 0
            assert train.size + test.size == n
        for label in (0, 1):
            counts = [int((labels[test] == label).sum()) for _, test in plan]
            assert max(counts) - min(counts) <= 1


def test_kfold_on_row_subset():
    dataset = _labelled(30, 30)
    rows = np.arange(0, 60, 2)
    plan = stratified_kfold(dataset, 3, seed=0, rows=rows)
    assert np.array_equal(plan.rows, rows)
    assert np.array_equal(np.sort(np.concatenate([test for _, test in plan])), rows)


def test_sample_examples():
    dataset = _labelled(40, 60)
    rows = stratified_sample(dataset, 0.5, seed=0)
    assert rows.size == 50
    assert dataset.labels[rows].sum() == 20

    assert np.array_equal(stratified_sample(dataset, 1.0, seed=3), np.arange(100))

    tiny = _labelled(9, 1)
    rows = stratified_sample(tiny, 0.2, seed=0)
    assert int(tiny.labels[rows].sum()) == 2
    assert int((tiny.labels[rows] == 0).sum()) == 1


def test_sample_sizes_follow_rounding_rule():
    rng = np.random.default_rng(5)
    for _ in range(100):
        positives, negatives = (int(value) for value in rng.integers(1, 500, size=2))
        rate = float(rng.uniform(0.01, 1.0))
        dataset = _labelled(positives, negatives)
        rows = stratified_sample(dataset, rate, seed=1)
        expected = [max(1, floor(rate * size + 0.5)) for size in (negatives, positives)]
        assert list(dataset.class_counts(rows)) == [min(size, count) for size, count
                                                    in zip((negatives, positives), expected)]
        assert np.unique(rows).size == rows.size
        assert np.all(np.diff(rows) > 0)


def test_sample_is_deterministic():
    dataset = _labelled(200, 300)
    assert np.array_equal(stratified_sample(dataset, 0.1, seed=9),
                          stratified_sample(dataset, 0.1, seed=9))


@pytest.mark.parametrize("rate", [0, -0.1, 1.5])
def test_sample_rejects_bad_rate(rate):
    with pytest.raises(InvalidArgumentError):
        stratified_sample(_labelled(5, 5), rate, seed=0)


def test_per_class_sample_size_rounds_half_up():
    assert per_class_sample_size(0.5, 5) == 3
    assert per_class_sample_size(0.01, 10) == 1
    assert per_class_sample_size(1.0, 7) == 7


def test_describe_dataset(csv_writer):
    path = csv_writer("described.csv", ["a", "c", "y"],
                      [[1, "p", 1], ["?", "q", 0], [3, "r", 0], [4, "p", 0]])
    summary = describe_dataset(load_csv(path, target="y", categorical=["c"]), label="demo")
    assert summary.label == "demo"
    assert summary.n_attributes == 2
    assert summary.n_features == 4
    assert summary.n_observations == 4
    assert (summary.n_positive, summary.n_negative) == (1, 3)
    assert summary.positive_rate == pytest.approx(0.25)
    assert summary.n_missing == 1
