"""
Variables used for dataset ingestion: default missing-value tokens and the
schema presets for the two bundled datasets.
"""

# Cells equal to one of these (after stripping whitespace) are flagged in the
# missing mask instead of being parsed.
default_missing_tokens = ("", "?", "NA")

default_positive_label = "1"

# Schema presets.  Column names follow the header rows of the bundled CSV
# fixtures (tests/data).  Both datasets are all-numeric.
dataset_presets = {
    "banknote": {
        "target": "class",
        "categorical": [],
        "positive_label": "1",
    },
    "transfusion": {
        "target": "whether he/she donated blood in March 2007",
        "categorical": [],
        "positive_label": "1",
    },
}
