"""
Dataset ingestion, stratified K-fold splitting and stratified random
subsampling.  Every randomized operation takes an explicit integer seed and
is deterministic given that seed.
"""
from csv import DictReader as CsvDictReader, Error as CsvError
from logging import getLogger
from math import floor
from typing import Iterable, List, Optional
import numpy as np
from pydantic import ValidationError
from ..exceptions import (DataLoadError,
                          EmptyDataError,
                          MissingTargetError,
                          UnparseableCellError,
                          SingleClassError,
                          StratificationError,
                          InvalidArgumentError)
from .data_classes import Dataset, FoldPlan
from .data_models import CsvSchema, DatasetSummary

logger = getLogger(__name__)


def load_csv(path,
             target: str,
             categorical: Iterable[str] = (),
             missing_tokens: Optional[Iterable[str]] = None,
             positive_label: Optional[str] = None,
             name: Optional[str] = None) -> Dataset:
    # pylint: disable=too-many-arguments, too-many-locals, too-many-branches
    """
    Read a header-first UTF-8 CSV file into a Dataset.

      - Categorical feature columns are one-hot encoded, one indicator per
        observed level in sorted level order, named "column=level".
      - Other feature columns are parsed as floats.
      - Cells equal (after stripping) to a missing token set the missing mask;
        a missing categorical cell masks all of that column's indicators.
      - The target is 1 where it equals positive_label and 0 elsewhere.

    :param path: CSV file path
    :param target: target column name
    :param categorical: names of categorical feature columns
    :param missing_tokens: cell values meaning "missing" (defaults from
        data_vars)
    :param positive_label: target value of the positive class (default "1")
    :param name: dataset label, defaults to the file stem
    :raises:
        MissingTargetError: if the target column is absent
        EmptyDataError: if the file has no header or no data rows
        UnparseableCellError: on a non-numeric, non-missing numeric cell
        SingleClassError: if the mapped target has only one class
        DataLoadError: on any other read or schema problem
    :return: Dataset
    """
    schema_fields = {"target": target, "categorical": list(categorical)}
    if missing_tokens is not None:
        schema_fields["missing_tokens"] = list(missing_tokens)
    if positive_label is not None:
        schema_fields["positive_label"] = str(positive_label)
    try:
        schema = CsvSchema(**schema_fields)
    except ValidationError as err:
        raise DataLoadError(f"Invalid CSV schema: {err}") from err

    if name is None:
        name = str(path).replace("\\", "/").rsplit("/", 1)[-1].rsplit(".", 1)[0]

    missing = set(schema.missing_tokens)

    try:
        with open(path, "r", encoding="utf-8-sig", newline="") as csv_file:
            reader = CsvDictReader(csv_file)
            header = reader.fieldnames
            if not header:
                raise EmptyDataError(f"{path}: file is empty")
            header = [column.strip() for column in header]
            reader.fieldnames = header
            rows = list(reader)
    except FileNotFoundError as err:
        raise DataLoadError(f"Unable to open CSV file: {err}") from err
    except (OSError, UnicodeDecodeError, CsvError) as err:
        raise DataLoadError(f"Unable to read CSV file {path}: {err}") from err

    if schema.target not in header:
        raise MissingTargetError(f"{path}: target column '{schema.target}' not in header {header}")
    unknown = [column for column in schema.categorical if column not in header]
    if unknown:
        raise DataLoadError(f"{path}: categorical columns {unknown} not in header")
    if not rows:
        raise EmptyDataError(f"{path}: no data rows after the header")

    feature_columns = [column for column in header if column != schema.target]
    categorical_columns = set(schema.categorical)

    # First data row is line 2 of the file
    labels = []
    for line_number, row in enumerate(rows, start=2):
        if None in row or any(row.get(column) is None for column in header):
            raise DataLoadError(f"{path}:{line_number}: expected {len(header)} cells")
        label = row[schema.target].strip()
        if label in missing:
            raise DataLoadError(f"{path}:{line_number}: target value is missing")
        labels.append(1 if label == schema.positive_label else 0)

    blocks, block_masks, feature_names = [], [], []
    for column in feature_columns:
        cells = [row[column].strip() for row in rows]
        is_missing = np.array([cell in missing for cell in cells], dtype=bool)

        if column in categorical_columns:
            levels = sorted({cell for cell, absent in zip(cells, is_missing) if not absent})
            level_index = {level: position for position, level in enumerate(levels)}
            block = np.zeros((len(rows), len(levels)), dtype=np.float64)
            for row_number, (cell, absent) in enumerate(zip(cells, is_missing)):
                if not absent:
                    block[row_number, level_index[cell]] = 1.0
            blocks.append(block)
            block_masks.append(np.repeat(is_missing[:, None], len(levels), axis=1))
            feature_names.extend(f"{column}={level}" for level in levels)
        else:
            values = np.zeros(len(rows), dtype=np.float64)
            for row_number, (cell, absent) in enumerate(zip(cells, is_missing)):
                if absent:
                    continue
                try:
                    values[row_number] = float(cell)
                except ValueError as err:
                    raise UnparseableCellError(f"{path}:{row_number + 2}: column '{column}': "
                                               f"cannot parse {cell!r} as a number") from err
            blocks.append(values[:, None])
            block_masks.append(is_missing[:, None])
            feature_names.append(column)

    if blocks:
        features = np.hstack(blocks)
        missing_mask = np.hstack(block_masks)
    else:
        features = np.zeros((len(rows), 0))
        missing_mask = np.zeros((len(rows), 0), dtype=bool)

    labels = np.array(labels, dtype=np.int8)
    if labels.min() == labels.max():
        raise SingleClassError(f"{path}: target '{schema.target}' has a single class "
                               f"(positive label {schema.positive_label!r})")

    dataset = Dataset(features=features,
                      labels=labels,
                      missing_mask=missing_mask,
                      feature_names=feature_names,
                      name=name)
    logger.info("Loaded %s from %s: %s rows, %s encoded features, %s missing cells",
                dataset.name, path, dataset.n_rows, dataset.n_features,
                int(missing_mask.sum()))
    return dataset


def _universe(dataset: Dataset, rows) -> np.ndarray:
    if rows is None:
        return np.arange(dataset.n_rows, dtype=np.int64)
    rows = np.unique(np.asarray(rows, dtype=np.int64))
    if rows.size and (rows[0] < 0 or rows[-1] >= dataset.n_rows):
        raise InvalidArgumentError(f"Row indices must lie in [0, {dataset.n_rows})")
    return rows


def stratified_kfold(dataset: Dataset, k: int, seed: int, rows=None) -> FoldPlan:
    """
    Stratified K-fold plan.  Within each class the row indices are shuffled
    with the seed and dealt round-robin to the folds; dealing continues
    across classes from where the previous class stopped so fold sizes stay
    balanced too.

    :param dataset: Dataset to split
    :param k: fold count (>= 2)
    :param seed: integer seed
    :param rows: optional row subset to split (defaults to all rows)
    :raises:
        InvalidArgumentError: if k < 2
        StratificationError: if a class has fewer than k members
    :return: FoldPlan whose test sets partition the rows
    """
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 2:
        raise InvalidArgumentError(f"K must be an integer >= 2, got {k!r}")
    universe = _universe(dataset, rows)
    rng = np.random.default_rng(seed)

    fold_members: List[List[np.ndarray]] = [[] for _ in range(k)]
    offset = 0
    for label in (0, 1):
        members = universe[dataset.labels[universe] == label]
        if members.size < k:
            raise StratificationError(f"Class {label} has {members.size} rows, fewer than "
                                      f"K={k}: stratified folds are not feasible")
        members = rng.permutation(members)
        for position in range(k):
            fold_members[(offset + position) % k].append(members[position::k])
        offset = (offset + members.size) % k

    folds = []
    for members in fold_members:
        test = np.sort(np.concatenate(members))
        train = np.setdiff1d(universe, test, assume_unique=True)
        folds.append((train, test))

    logger.debug("Built %s-fold plan over %s rows with seed %s", k, universe.size, seed)
    return FoldPlan(folds=folds, k=k, seed=seed, rows=universe)


def per_class_sample_size(rate: float, class_size: int) -> int:
    """
    Rows kept from one class: round(rate * class_size), half rounding up,
    floored at one and capped at the class size.

    :param rate: sampling rate in (0, 1]
    :param class_size: rows in the class
    :return: sample size for the class
    """
    return min(class_size, max(1, int(floor(rate * class_size + 0.5))))


def stratified_sample(dataset: Dataset, rate: float, seed: int, rows=None) -> np.ndarray:
    """
    Stratified random sample without replacement: for each class, choose
    per_class_sample_size(rate, |class|) rows uniformly.

    :param dataset: Dataset to sample
    :param rate: fraction in (0, 1]
    :param seed: integer seed
    :param rows: optional row subset to sample from
    :raises:
        InvalidArgumentError: if rate is outside (0, 1]
        StratificationError: if a class has no rows to sample from
    :return: sorted array of row indices
    """
    if isinstance(rate, bool) or not isinstance(rate, (int, float, np.floating)) \
            or not 0.0 < rate <= 1.0:
        raise InvalidArgumentError(f"Sampling rate must be in (0, 1], got {rate!r}")
    universe = _universe(dataset, rows)
    rng = np.random.default_rng(seed)

    chosen = []
    for label in (0, 1):
        members = universe[dataset.labels[universe] == label]
        if members.size == 0:
            raise StratificationError(f"Class {label} has no rows: the sample would lose it")
        size = per_class_sample_size(rate, members.size)
        chosen.append(rng.choice(members, size=size, replace=False))

    sample_rows = np.sort(np.concatenate(chosen))
    logger.debug("Stratified %.0f%% sample of %s: %s of %s rows",
                 rate * 100, dataset.name, sample_rows.size, universe.size)
    return sample_rows


def describe_dataset(dataset: Dataset, label: Optional[str] = None) -> DatasetSummary:
    """
    Summarize a dataset for the dataset description table.  n_attributes
    counts source columns (one-hot indicators of the same column count once).

    :param dataset: Dataset to describe
    :param label: optional display label, defaults to the dataset name
    :return: DatasetSummary
    """
    source_columns = {feature.split("=", 1)[0] for feature in dataset.feature_names}
    negatives, positives = dataset.class_counts()
    return DatasetSummary(label=label or dataset.name,
                          n_attributes=len(source_columns),
                          n_features=dataset.n_features,
                          n_observations=dataset.n_rows,
                          n_positive=positives,
                          n_negative=negatives,
                          positive_rate=positives / dataset.n_rows if dataset.n_rows else 0.0,
                          n_missing=int(dataset.missing_mask.sum()))
