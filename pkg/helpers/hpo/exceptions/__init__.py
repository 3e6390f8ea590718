# pylint: disable=use-tuple-over-list
"""
Import file for exceptions. Exceptions are being separated from other class
files to make it more obvious that imports from here are ... exceptions.
"""
from .base_exceptions import (HpoError,
                              InvalidArgumentError,
                              SpaceDefinitionError,
                              DataLoadError,
                              EmptyDataError,
                              MissingTargetError,
                              UnparseableCellError,
                              SingleClassError,
                              StratificationError,
                              MetricError,
                              UndefinedAucError,
                              LearnerError,
                              FeatureCountMismatchError,
                              BenchConfigError)

__all__ = ["HpoError",
           "InvalidArgumentError",
           "SpaceDefinitionError",
           "DataLoadError",
           "EmptyDataError",
           "MissingTargetError",
           "UnparseableCellError",
           "SingleClassError",
           "StratificationError",
           "MetricError",
           "UndefinedAucError",
           "LearnerError",
           "FeatureCountMismatchError",
           "BenchConfigError"]
