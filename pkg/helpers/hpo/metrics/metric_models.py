"""
pydantic model for one scored cross-validation fold.
"""
# pylint: disable=too-few-public-methods, no-self-argument, no-name-in-module
from logging import getLogger
from typing import Optional
import numpy as np
from pydantic import BaseModel, root_validator
from .metric_functions import fold_gini

logger = getLogger(__name__)


class ScoredFold(BaseModel):
    """
    Scores and labels of one test fold.  The Gini is derived from them when
    not supplied, and checked against them when it is.
    """
    scores: np.ndarray
    labels: np.ndarray
    gini: Optional[float] = None

    class Config:
        """pydantic configuration"""
        arbitrary_types_allowed = True
        frozen = True

    @root_validator(pre=True)
    def derive_gini(cls, values):
        """
        Coerce scores/labels to arrays, require equal lengths, and derive the
        fold Gini.  UndefinedAucError (single-class labels) propagates
        unchanged.

        :param values: raw field values
        :raises:
            ValueError: on length mismatch or an inconsistent supplied gini
        :return: values with arrays and gini set
        """
        scores = np.asarray(values.get("scores"), dtype=np.float64).ravel()
        labels = np.asarray(values.get("labels")).ravel()
        if scores.shape != labels.shape:
            raise ValueError(f"scores ({scores.size}) and labels ({labels.size}) "
                             f"differ in length")
        derived = fold_gini(scores, labels)
        supplied = values.get("gini")
        if supplied is not None and abs(supplied - derived) > 1e-12:
            raise ValueError(f"gini {supplied} does not match the scores ({derived})")
        values.update({"scores": scores, "labels": labels, "gini": derived})
        return values
