# pylint: disable=use-tuple-over-list
"""
Define public imports for dataset ingestion, splitting and sampling.
"""
from .data_classes import (Dataset,
                           FoldPlan)

from .data_models import (CsvSchema,
                          DatasetSummary)

from .data_functions import (load_csv,
                             stratified_kfold,
                             stratified_sample,
                             per_class_sample_size,
                             describe_dataset)

from .data_vars import dataset_presets

__all__ = ["Dataset",
           "FoldPlan",
           "CsvSchema",
           "DatasetSummary",
           "load_csv",
           "stratified_kfold",
           "stratified_sample",
           "per_class_sample_size",
           "describe_dataset",
           "dataset_presets"]
