# pylint: disable=use-tuple-over-list
"""
Define public imports for the hyperparameter optimization strategies.
"""
from .tuner_models import (TpeConfig,
                           TuneResult)

from .tuner_classes import (CategoricalParzen,
                            ContinuousParzen)

from .tuner_functions import (make_tpe_config,
                              grid_search,
                              random_search,
                              tpe_suggest,
                              smbo,
                              randomized_hyperopt,
                              trials_to_records,
                              tune)

from .tuner_vars import (GRID,
                         RANDOM,
                         TPE,
                         RANDOMIZED,
                         DEFAULT,
                         DEFAULT_RANDOM_TRIALS)

__all__ = ["TpeConfig",
           "TuneResult",
           "CategoricalParzen",
           "ContinuousParzen",
           "make_tpe_config",
           "grid_search",
           "random_search",
           "tpe_suggest",
           "smbo",
           "randomized_hyperopt",
           "trials_to_records",
           "tune",
           "GRID",
           "RANDOM",
           "TPE",
           "RANDOMIZED",
           "DEFAULT",
           "DEFAULT_RANDOM_TRIALS"]
