"""
Default tuning space and clamping limits for mapping sampled values onto
the learner's legal hyperparameter ranges.
"""

# JSON form of the default tuning space (see parse_space)
default_space_definition = {
    "eta": {"dist": "loguniform", "lo": 0.005, "hi": 0.3},
    "max_depth": {"dist": "quniform", "lo": 2, "hi": 10, "q": 1},
    "min_child_weight": {"dist": "quniform", "lo": 1, "hi": 10, "q": 1},
    "subsample": {"dist": "uniform", "lo": 0.5, "hi": 1.0},
    "colsample": {"dist": "uniform", "lo": 0.5, "hi": 1.0},
    "l2_reg": {"dist": "loguniform", "lo": 1e-3, "hi": 10},
    "min_split_gain": {"dist": "uniform", "lo": 0, "hi": 5},
    "n_rounds": {"dist": "quniform", "lo": 50, "hi": 300, "q": 50},
}

# Smallest value a (0, 1] fraction is clamped up to
MIN_FRACTION = 1e-6

# Field name -> clamping rule
FRACTION_FIELDS = ("eta", "subsample", "colsample")
NON_NEGATIVE_FIELDS = ("min_child_weight", "min_split_gain", "l2_reg")
INTEGER_FIELDS = {"n_rounds": 0, "max_depth": 1}
