"""
Shared fixtures: seeded synthetic datasets, CSV writers and the optional
BANKNOTE/TRANSFUSION files (tests needing them skip when absent).
"""
import csv
from pathlib import Path
import numpy as np
import pytest
from helpers import Dataset, SearchSpace, QUniform, Uniform

DATA_DIR = Path(__file__).parent / "data"


def make_blobs(n_negative, n_positive, n_features=4, shift=3.0, seed=0, name="synthetic"):
    """
    Two Gaussian classes; the first two features are shifted by +/- shift/2
    for positives/negatives, the rest are noise.
    """
    rng = np.random.default_rng(seed)
    labels = np.concatenate([np.zeros(n_negative, dtype=int), np.ones(n_positive, dtype=int)])
    features = rng.normal(size=(labels.size, n_features))
    informative = min(2, n_features)
    features[:, :informative] += np.where(labels == 1, shift / 2, -shift / 2)[:, None]
    order = rng.permutation(labels.size)
    return Dataset(features[order], labels[order], name=name)


def write_csv(path, header, rows):
    """
    Write a header-first CSV file and return its path.
    """
    with open(path, "w", encoding="utf-8", newline="") as csv_file:
        writer = csv.writer(csv_file)
        writer.writerow(header)
        writer.writerows(rows)
    return path


@pytest.fixture(scope="session")
def banknote_like():
    """
    Seeded stand-in with BANKNOTE's shape: 1372 rows, 4 numeric features,
    762 negatives and 610 positives, nearly separable.
    """
    return make_blobs(762, 610, n_features=4, shift=3.0, seed=1372, name="banknote_like")


@pytest.fixture(scope="session")
def small_dataset():
    """
    300 rows, 150 per class, 3 features.
    """
    return make_blobs(150, 150, n_features=3, shift=2.0, seed=7, name="small")


@pytest.fixture(scope="session")
def separable_dataset():
    """
    Class 0 in [0, 1], class 1 in [2, 3] on the single feature.
    """
    rng = np.random.default_rng(3)
    features = np.concatenate([rng.uniform(0, 1, 30), rng.uniform(2, 3, 30)]).reshape(-1, 1)
    labels = np.repeat([0, 1], 30)
    return Dataset(features, labels, name="separable")


@pytest.fixture
def small_space():
    """
    A quick learner space: few shallow trees.
    """
    return SearchSpace({"n_rounds": QUniform(lo=5, hi=15, q=5),
                        "max_depth": QUniform(lo=1, hi=3, q=1),
                        "eta": Uniform(lo=0.1, hi=0.5)})


@pytest.fixture
def csv_writer(tmp_path):
    """
    Factory writing CSV files under tmp_path.
    """
    def _write(name, header, rows):
        return write_csv(tmp_path / name, header, rows)
    return _write


def _fixture_file(name):
    path = DATA_DIR / name
    if not path.exists():
        pytest.skip(f"{path} not present: real-data acceptance unverified until the UCI "
                    f"file is added")
    return path


@pytest.fixture
def banknote_csv():
    """
    Path of the BANKNOTE CSV (header variance,skewness,curtosis,entropy,class).
    """
    return _fixture_file("banknote.csv")


@pytest.fixture
def transfusion_csv():
    """
    Path of the TRANSFUSION CSV (original header row).
    """
    return _fixture_file("transfusion.csv")
