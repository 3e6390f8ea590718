"""
Benchmark defaults and report formats.
"""

TOOL_VERSION = "0.1.0"

# Sampling rates swept for Randomized-Hyperopt
default_rates = (0.10, 0.20, 0.25, 0.50)

# Rate selection slack: the smallest rate within epsilon of the best Gini wins
DEFAULT_EPSILON = 0.002

default_methods = ("grid", "random", "tpe", "randomized")
known_methods = ("grid", "random", "tpe", "randomized", "default")

# Grid search: points per continuous dimension and the cap on total points
GRID_RESOLUTION = 2
GRID_MAX_POINTS = 500

REPORT_FORMATS = ("csv", "markdown")
report_header = ("dataset", "method", "rate", "mean_gini", "time_seconds")
markdown_header = report_header + ("full_data_gini",)

# Table precision
GINI_FORMAT = "{:.4f}"
SECONDS_FORMAT = "{:.2f}"
