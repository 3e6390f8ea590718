"""
Tuner labels and budget defaults.
"""

# Method labels used in results and reports
GRID = "grid"
RANDOM = "random"
TPE = "tpe"
RANDOMIZED = "randomized"
DEFAULT = "default"

# Random search trial budget when none is given
DEFAULT_RANDOM_TRIALS = 10

# TpeConfig defaults
tpe_defaults = {
    "n_trials": 25,
    "n_startup": 10,
    "gamma_quantile": 0.25,
    "n_candidates": 24,
    "kde_bandwidth_floor": 1e-3,
    "prior_weight": 1.0,
}
