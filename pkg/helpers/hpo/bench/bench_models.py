"""
pydantic models for benchmark configuration (the JSON accepted by
"bench --config") and for benchmark reports.
"""
# pylint: disable=too-few-public-methods, no-self-argument, no-name-in-module
from json import dumps as json_dumps
from logging import getLogger
from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Extra, confloat, conint, constr, root_validator, validator
from ..data import dataset_presets
from .bench_vars import (default_rates,
                         default_methods,
                         known_methods,
                         DEFAULT_EPSILON,
                         GRID_RESOLUTION,
                         GRID_MAX_POINTS,
                         REPORT_FORMATS)

logger = getLogger(__name__)

Rate = confloat(gt=0, le=1)


class DatasetSpec(BaseModel):
    """
    Where a dataset lives and how to read it.  A preset fills in the schema
    fields that are not given explicitly.
    """
    path: constr(min_length=1)
    target: Optional[str] = None
    categorical: List[str] = []
    missing_tokens: Optional[List[str]] = None
    positive_label: Optional[str] = None
    label: Optional[str] = None
    preset: Optional[str] = None
    rate: Optional[Rate] = None

    class Config:
        """pydantic configuration: unknown fields rejected"""
        extra = Extra.forbid

    @root_validator(skip_on_failure=True)
    def apply_preset(cls, values):
        """
        Merge the preset schema and require a target column.

        :param values: validated field values
        :raises:
            ValueError: on an unknown preset or a missing target
        :return: values
        """
        preset = values.get("preset")
        if preset is not None:
            if preset not in dataset_presets:
                raise ValueError(f"unknown preset {preset!r}, expected one of "
                                 f"{sorted(dataset_presets)}")
            for field, value in dataset_presets[preset].items():
                if not values.get(field):
                    values[field] = value
            if values.get("label") is None:
                values["label"] = preset
        if not values.get("target"):
            raise ValueError("a target column (or a preset) is required")
        return values


class BenchBudgets(BaseModel):
    """
    Trial budgets per method and the grid size.
    """
    random: conint(ge=1) = 10
    tpe: conint(ge=1) = 25
    randomized: conint(ge=1) = 25
    grid_resolution: conint(ge=1) = GRID_RESOLUTION
    grid_max_points: conint(ge=1) = GRID_MAX_POINTS

    class Config:
        """pydantic configuration: unknown fields rejected"""
        extra = Extra.forbid


class BenchConfig(BaseModel):
    """
    A benchmark run: datasets, methods, sampling rates, folds, budgets,
    seed and output.
    """
    datasets: List[DatasetSpec] = []
    methods: List[str] = list(default_methods)
    rates: List[Rate] = list(default_rates)
    folds: conint(ge=2) = 3
    budgets: BenchBudgets = BenchBudgets()
    epsilon: confloat(ge=0) = DEFAULT_EPSILON
    seed: conint(ge=0) = 0
    space: Optional[str] = None
    overrides: Dict[str, Any] = {}
    output: Optional[str] = None
    format: str = "csv"
    parallel: bool = False
    n_jobs: conint(ge=1) = 1

    class Config:
        """pydantic configuration: unknown fields rejected"""
        extra = Extra.forbid

    @validator("methods")
    def check_methods(cls, methods):
        """
        :param methods: method labels
        :raises:
            ValueError: if empty, repeated or unknown
        :return: methods
        """
        if not methods:
            raise ValueError("at least one method is required")
        unknown = [method for method in methods if method not in known_methods]
        if unknown:
            raise ValueError(f"unknown methods {unknown}, expected a subset of {known_methods}")
        if len(set(methods)) != len(methods):
            raise ValueError(f"methods repeat: {methods}")
        return methods

    @validator("rates")
    def check_rates(cls, rates):
        """
        :param rates: sampling rates
        :raises:
            ValueError: if empty
        :return: rates sorted ascending without duplicates
        """
        if not rates:
            raise ValueError("at least one sampling rate is required")
        return sorted(set(rates))

    @validator("format")
    def check_format(cls, report_format):
        """
        :param report_format: report format
        :raises:
            ValueError: if not csv or markdown
        :return: report_format
        """
        if report_format not in REPORT_FORMATS:
            raise ValueError(f"format must be one of {REPORT_FORMATS}")
        return report_format


class SweepRow(BaseModel):
    """
    One Randomized-Hyperopt run of a rate sweep.
    """
    rate: Rate
    mean_gini: float
    time_seconds: confloat(ge=0)
    full_data_gini: Optional[float] = None


class BenchRow(BaseModel):
    """
    One report row.  rate is set for the randomized method only.
    """
    dataset: str
    method: str
    rate: Optional[Rate] = None
    mean_gini: float
    time_seconds: confloat(ge=0)
    full_data_gini: Optional[float] = None


class BenchReport(BaseModel):
    """
    Report rows plus run metadata (tool version, seed, budgets, K, selected
    rates, errors, ...).
    """
    rows: List[BenchRow] = []
    metadata: Dict[str, Any] = {}

    @property
    def metadata_json(self) -> str:
        """
        :return: metadata as indented JSON
        """
        return json_dumps(self.metadata, indent=2, default=str)
