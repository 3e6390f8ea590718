"""
pydantic model for the boosted tree learner's hyperparameters.  Range
violations are rejected at construction.
"""
# pylint: disable=too-few-public-methods, no-self-argument, no-name-in-module
from logging import getLogger
from typing import Optional
from pydantic import BaseModel, Extra, confloat, conint, validator
from .gbt_vars import default_hyperparams

logger = getLogger(__name__)


class GbtHyperParams(BaseModel):
    """
    Hyperparameters of the gradient boosted tree classifier.

    base_score is the prior log-odds; None means "log-odds of the training
    subset's positive rate".
    """
    eta: confloat(gt=0, le=1) = default_hyperparams["eta"]
    n_rounds: conint(ge=0) = default_hyperparams["n_rounds"]
    max_depth: conint(ge=1) = default_hyperparams["max_depth"]
    min_child_weight: confloat(ge=0) = default_hyperparams["min_child_weight"]
    min_split_gain: confloat(ge=0) = default_hyperparams["min_split_gain"]
    l2_reg: confloat(ge=0) = default_hyperparams["l2_reg"]
    subsample: confloat(gt=0, le=1) = default_hyperparams["subsample"]
    colsample: confloat(gt=0, le=1) = default_hyperparams["colsample"]
    base_score: Optional[float] = default_hyperparams["base_score"]
    seed: int = default_hyperparams["seed"]

    class Config:
        """pydantic configuration: immutable, unknown fields rejected"""
        frozen = True
        extra = Extra.forbid

    @validator("n_rounds", "max_depth", pre=True)
    def integral(cls, value):
        """
        Accept integral floats (quantized search dimensions produce floats
        such as 6.0) but reject fractional ones.

        :param value: raw value
        :raises:
            ValueError: if the value is a non-integral float
        :return: int value
        """
        if isinstance(value, float):
            if not value.is_integer():
                raise ValueError(f"expected an integer, got {value}")
            return int(value)
        return value
