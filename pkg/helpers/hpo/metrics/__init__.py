# pylint: disable=use-tuple-over-list
"""
Define public imports for scoring functions.
"""
from .metric_functions import (roc_auc,
                               gini,
                               mean_gini,
                               fold_gini)

from .metric_models import ScoredFold

__all__ = ["roc_auc",
           "gini",
           "mean_gini",
           "fold_gini",
           "ScoredFold"]
