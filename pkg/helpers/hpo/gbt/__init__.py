# pylint: disable=use-tuple-over-list
"""
Define public imports for the gradient boosted tree classifier.
"""
from .gbt_models import GbtHyperParams

from .gbt_classes import (Tree,
                          GbtModel)

from .gbt_functions import (make_hyperparams,
                            sigmoid,
                            leaf_weight,
                            logloss,
                            train,
                            predict_proba,
                            staged_predict_proba,
                            dump_model)

from .gbt_vars import default_hyperparams

__all__ = ["GbtHyperParams",
           "Tree",
           "GbtModel",
           "make_hyperparams",
           "sigmoid",
           "leaf_weight",
           "logloss",
           "train",
           "predict_proba",
           "staged_predict_proba",
           "dump_model",
           "default_hyperparams"]
