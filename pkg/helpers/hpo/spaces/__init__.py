# pylint: disable=use-tuple-over-list
"""
Define public imports for search space definitions.
"""
from .space_models import (Distribution,
                           ContinuousDistribution,
                           Uniform,
                           LogUniform,
                           QUniform,
                           QLogUniform,
                           Normal,
                           QNormal,
                           LogNormal,
                           QLogNormal,
                           Choice)

from .space_classes import (SearchSpace,
                            ParamAssignment)

from .space_functions import (sample,
                              grid_points,
                              dimension_values,
                              log_density,
                              in_support,
                              parse_space,
                              load_space,
                              space_to_json)

__all__ = ["Distribution",
           "ContinuousDistribution",
           "Uniform",
           "LogUniform",
           "QUniform",
           "QLogUniform",
           "Normal",
           "QNormal",
           "LogNormal",
           "QLogNormal",
           "Choice",
           "SearchSpace",
           "ParamAssignment",
           "sample",
           "grid_points",
           "dimension_values",
           "log_density",
           "in_support",
           "parse_space",
           "load_space",
           "space_to_json"]
