"""
Variables used by search space definitions: tolerances, grid conventions and
the JSON tag to distribution model mapping (populated in space_functions to
avoid a circular import).
"""

# Quantized values are compared against multiples of q with this relative
# tolerance.
QUANTIZATION_TOLERANCE = 1e-9

# Grids over unbounded (normal family) dimensions span mu +/- this many sigma
# on the internal scale.
NORMAL_GRID_HALF_WIDTH = 2.0

# Python types accepted as Choice labels
LABEL_TYPES = (str, int, float, bool)

# Fields a JSON space file entry may carry, per "dist" tag.  Used to produce
# parse errors that name the offending field.
distribution_fields = {
    "uniform": ("lo", "hi"),
    "loguniform": ("lo", "hi"),
    "quniform": ("lo", "hi", "q"),
    "qloguniform": ("lo", "hi", "q"),
    "normal": ("mu", "sigma"),
    "qnormal": ("mu", "sigma", "q"),
    "lognormal": ("mu", "sigma"),
    "qlognormal": ("mu", "sigma", "q"),
    "choice": ("options",),
}
