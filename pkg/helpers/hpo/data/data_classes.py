"""
Dataset and FoldPlan classes.  Arrays are made read-only on construction so
both objects can be shared between tuners, trials and threads.
"""
from logging import getLogger
from typing import Optional, Sequence, Tuple
import numpy as np
from ..exceptions import InvalidArgumentError

logger = getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class Dataset:
    """
    Encoded numeric feature matrix, missing-value mask and binary labels.
    """
    def __init__(self,
                 features,
                 labels,
                 missing_mask=None,
                 feature_names: Optional[Sequence[str]] = None,
                 name: str = "dataset"):
        """
        :param features: (n_rows, n_features) array-like of reals
        :param labels: (n_rows,) array-like of 0/1
        :param missing_mask: optional boolean array, same shape as features.
            Defaults to no missing values.
        :param feature_names: optional names, default f0..f{n-1}
        :param name: label used in logs and reports
        :raises:
            InvalidArgumentError: on shape mismatches or non-binary labels
        """
        features = np.array(features, dtype=np.float64)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        if features.ndim != 2:
            raise InvalidArgumentError(f"Features must be 2-D, got shape {features.shape}")

        labels = np.array(labels)
        if labels.shape != (features.shape[0],):
            raise InvalidArgumentError(f"Expected {features.shape[0]} labels, "
                                       f"got shape {labels.shape}")
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise InvalidArgumentError("Labels must be 0 or 1")

        if missing_mask is None:
            missing_mask = np.zeros(features.shape, dtype=bool)
        else:
            missing_mask = np.array(missing_mask, dtype=bool)
        if missing_mask.shape != features.shape:
            raise InvalidArgumentError(f"Missing mask shape {missing_mask.shape} does not "
                                       f"match features {features.shape}")

        if feature_names is None:
            feature_names = [f"f{i}" for i in range(features.shape[1])]
        if len(feature_names) != features.shape[1]:
            raise InvalidArgumentError(f"Expected {features.shape[1]} feature names, "
                                       f"got {len(feature_names)}")

        # Masked cells carry no value of their own
        features[missing_mask] = 0.0

        self.features = _frozen(features)
        self.labels = _frozen(labels.astype(np.int8))
        self.missing_mask = _frozen(missing_mask)
        self.feature_names = tuple(feature_names)
        self.name = name

    def __repr__(self):
        return f"Dataset({self.name!r}, rows={self.n_rows}, features={self.n_features})"

    @property
    def n_rows(self) -> int:
        """
        :return: number of rows
        """
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        """
        :return: number of encoded features
        """
        return int(self.features.shape[1])

    def class_counts(self, rows: Optional[np.ndarray] = None) -> Tuple[int, int]:
        """
        :param rows: optional row subset
        :return: (negatives, positives) among the rows
        """
        labels = self.labels if rows is None else self.labels[rows]
        positives = int(labels.sum())
        return int(labels.size) - positives, positives


class FoldPlan:
    """
    K (train_indices, test_indices) pairs over a row universe.  Test sets
    partition the universe; indices are global dataset row numbers, sorted.
    """
    def __init__(self, folds, k: int, seed: int, rows: np.ndarray):
        """
        :param folds: sequence of K (train, test) index arrays
        :param k: fold count
        :param seed: seed the plan was built with
        :param rows: the row universe the plan partitions
        """
        self.folds = tuple((_frozen(np.asarray(train, dtype=np.int64)),
                            _frozen(np.asarray(test, dtype=np.int64)))
                           for train, test in folds)
        self.k = int(k)
        self.seed = int(seed)
        self.rows = _frozen(np.asarray(rows, dtype=np.int64))

    def __repr__(self):
        return f"FoldPlan(k={self.k}, seed={self.seed}, rows={self.rows.size})"

    def __eq__(self, other):
        if not isinstance(other, FoldPlan):
            return NotImplemented
        return (self.k == other.k
                and self.seed == other.seed
                and np.array_equal(self.rows, other.rows)
                and all(np.array_equal(a_train, b_train) and np.array_equal(a_test, b_test)
                        for (a_train, a_test), (b_train, b_test)
                        in zip(self.folds, other.folds)))

    __hash__ = None

    def __iter__(self):
        return iter(self.folds)

    def __len__(self):
        return len(self.folds)
