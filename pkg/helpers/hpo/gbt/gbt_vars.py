"""
Constants for the boosted tree learner.
"""

# Margins are clipped to +/- this value before the sigmoid so probabilities
# stay strictly inside (0, 1) in float64.
MARGIN_CLIP = 30.0

# Replaces a zero H + lambda denominator (lambda = 0 with saturated
# probabilities) in leaf weights and split gains.
DENOMINATOR_FLOOR = 1e-16

# Learner defaults used when a hyperparameter is not tuned.
default_hyperparams = {
    "eta": 0.3,
    "n_rounds": 100,
    "max_depth": 6,
    "min_child_weight": 1.0,
    "min_split_gain": 0.0,
    "l2_reg": 1.0,
    "subsample": 1.0,
    "colsample": 1.0,
    "base_score": None,
    "seed": 0,
}

# Leaf marker in the flat node arrays
LEAF = -1
