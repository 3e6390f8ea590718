# pylint: disable=use-tuple-over-list
"""
Define public imports for the hyperparameter response function.
"""
from .objective_models import Trial

from .objective_functions import (default_space,
                                  to_hyperparams,
                                  evaluate,
                                  evaluate_defaults)

from .objective_classes import (Objective,
                                ObjectiveContext,
                                FunctionObjective)

__all__ = ["Trial",
           "default_space",
           "to_hyperparams",
           "evaluate",
           "evaluate_defaults",
           "Objective",
           "ObjectiveContext",
           "FunctionObjective"]
