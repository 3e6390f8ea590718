"""
pydantic models for dataset ingestion options and dataset summaries.
"""
# pylint: disable=too-few-public-methods, no-self-argument, no-name-in-module
from logging import getLogger
from typing import List
from pydantic import BaseModel, constr, validator
from .data_vars import default_missing_tokens, default_positive_label

logger = getLogger(__name__)


class CsvSchema(BaseModel):
    """
    Declared schema for a CSV file: which column is the target, which
    feature columns are categorical, which cell values mean "missing" and
    which target value is the positive class.
    """
    target: constr(min_length=1)
    categorical: List[str] = []
    missing_tokens: List[str] = list(default_missing_tokens)
    positive_label: str = default_positive_label

    @validator("missing_tokens", each_item=True)
    def strip_token(cls, token):
        """
        Tokens are matched against stripped cells, so strip them as well.

        :param token: missing token
        :return: stripped token
        """
        return token.strip()

    @validator("positive_label")
    def strip_label(cls, label):
        """
        :param label: positive class label
        :return: stripped label
        """
        return label.strip()


class DatasetSummary(BaseModel):
    """
    One row of the dataset description table.
    """
    label: str
    n_attributes: int
    n_features: int
    n_observations: int
    n_positive: int
    n_negative: int
    positive_rate: float
    n_missing: int
