"""
Scoring functions: ROC AUC through the Mann-Whitney rank statistic, the
Gini transform G = 2 * AUC - 1 and the mean Gini across folds.
"""
from logging import getLogger
from math import fsum
from typing import Sequence
import numpy as np
from scipy.stats import rankdata
from ..exceptions import UndefinedAucError, InvalidArgumentError

logger = getLogger(__name__)


def roc_auc(scores, labels) -> float:
    """
    Area under the ROC curve, computed as the normalized Mann-Whitney U
    statistic with average ranks for tied scores.  Equals the fraction of
    (positive, negative) pairs ranked correctly, tied pairs counting half.

    :param scores: sequence of reals, higher means more positive
    :param labels: sequence of 0/1, same length
    :raises:
        InvalidArgumentError: if the lengths differ
        UndefinedAucError: if only one class is present
    :return: AUC in [0, 1]
    """
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels).ravel()
    if scores.shape != labels.shape:
        raise InvalidArgumentError(f"scores ({scores.size}) and labels ({labels.size}) "
                                   f"differ in length")
    positive = labels == 1
    n_positive = int(positive.sum())
    n_negative = int(labels.size - n_positive)
    if n_positive == 0 or n_negative == 0:
        raise UndefinedAucError(f"ROC AUC is undefined with {n_positive} positive and "
                                f"{n_negative} negative labels")

    ranks = rankdata(scores, method="average")
    u_statistic = ranks[positive].sum() - n_positive * (n_positive + 1) / 2.0
    return float(u_statistic / (n_positive * n_negative))


def gini(auc: float) -> float:
    """
    Gini score G = 2 * AUC - 1.

    :param auc: ROC AUC in [0, 1]
    :raises:
        InvalidArgumentError: if auc is outside [0, 1]
    :return: Gini in [-1, 1]
    """
    if not 0.0 <= auc <= 1.0:
        raise InvalidArgumentError(f"AUC must be in [0, 1], got {auc!r}")
    return 2.0 * auc - 1.0


def mean_gini(fold_ginis: Sequence[float]) -> float:
    """
    Arithmetic mean of per-fold Gini scores (folds are scored separately,
    never pooled).

    :param fold_ginis: non-empty sequence of reals
    :raises:
        InvalidArgumentError: if the sequence is empty
    :return: mean Gini
    """
    fold_ginis = list(fold_ginis)
    if not fold_ginis:
        raise InvalidArgumentError("mean_gini needs at least one fold score")
    return fsum(fold_ginis) / len(fold_ginis)


def fold_gini(scores, labels) -> float:
    """
    Gini of one scored fold.

    :param scores: predicted scores for the fold's test rows
    :param labels: true labels for the same rows
    :return: gini(roc_auc(scores, labels))
    """
    return gini(roc_auc(scores, labels))
