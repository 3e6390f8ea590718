"""
Training and prediction for the gradient boosted tree classifier:
second-order boosting of the logistic loss with exact greedy, level-wise
tree growth.
"""
from logging import getLogger
from math import floor, log
from typing import Iterator, Optional, Tuple
import numpy as np
from pydantic import ValidationError
from scipy.special import expit
from ..data import Dataset
from ..exceptions import (InvalidArgumentError,
                          LearnerError,
                          FeatureCountMismatchError,
                          SingleClassError)
from .gbt_classes import GbtModel, Tree
from .gbt_kernels import find_level_splits, apply_level_splits, predict_forest
from .gbt_models import GbtHyperParams
from .gbt_vars import MARGIN_CLIP, DENOMINATOR_FLOOR, LEAF

logger = getLogger(__name__)


def make_hyperparams(**fields) -> GbtHyperParams:
    """
    Build GbtHyperParams, converting validation failures to the domain error.

    :param fields: GbtHyperParams fields; unset fields take the defaults
    :raises:
        InvalidArgumentError: if a value is out of range or unknown
    :return: GbtHyperParams
    """
    try:
        return GbtHyperParams(**fields)
    except ValidationError as err:
        raise InvalidArgumentError(f"Invalid learner hyperparameters: {err}") from err


def sigmoid(margin) -> np.ndarray:
    """
    Logistic function of margins clipped to +/- MARGIN_CLIP, so the result
    lies strictly inside (0, 1).

    :param margin: array of log-odds
    :return: array of probabilities
    """
    return expit(np.clip(margin, -MARGIN_CLIP, MARGIN_CLIP))


def leaf_weight(grad_sum: float, hess_sum: float, l2_reg: float) -> float:
    """
    Newton step of a leaf: -G / (H + lambda).  A zero denominator is replaced
    by DENOMINATOR_FLOOR.

    :param grad_sum: G, sum of gradients in the leaf
    :param hess_sum: H, sum of hessians in the leaf
    :param l2_reg: lambda
    :return: raw (unscaled) leaf weight
    """
    denominator = hess_sum + l2_reg
    if denominator <= 0.0:
        denominator = DENOMINATOR_FLOOR
    return -grad_sum / denominator


def logloss(probabilities, labels) -> float:
    """
    Mean binary cross-entropy.

    :param probabilities: predicted P(y = 1), strictly inside (0, 1)
    :param labels: 0/1 labels
    :return: mean negative log-likelihood
    """
    probabilities = np.asarray(probabilities, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    return float(-np.mean(labels * np.log(probabilities)
                          + (1.0 - labels) * np.log1p(-probabilities)))


def _presort(features: np.ndarray, missing_mask: np.ndarray) -> Tuple[np.ndarray, ...]:
    """
    Per-feature row orders, computed once per fit: present rows in ascending
    value order and missing rows, each flattened with a pointer array.
    """
    orders, missing = [], []
    for feature in range(features.shape[1]):
        present = np.flatnonzero(~missing_mask[:, feature])
        orders.append(present[np.argsort(features[present, feature], kind="stable")])
        missing.append(np.flatnonzero(missing_mask[:, feature]))
    order_ptr = np.zeros(features.shape[1] + 1, dtype=np.int64)
    missing_ptr = np.zeros(features.shape[1] + 1, dtype=np.int64)
    order_ptr[1:] = np.cumsum([order.size for order in orders])
    missing_ptr[1:] = np.cumsum([rows.size for rows in missing])
    order_flat = np.concatenate(orders).astype(np.int64) if orders else np.zeros(0, np.int64)
    missing_flat = np.concatenate(missing).astype(np.int64) if missing \
        else np.zeros(0, np.int64)
    return order_flat, order_ptr, missing_flat, missing_ptr


def _fraction_count(fraction: float, total: int) -> int:
    return min(total, max(1, int(floor(fraction * total + 0.5))))


def _grow_tree(features, missing_mask, grad, hess, node_of, candidate_features, presorted,
               params: GbtHyperParams) -> Tree:
    # pylint: disable=too-many-arguments, too-many-locals
    """
    Grow one tree level by level.  node_of maps each training row to its
    position on the current level (-1 when the row is out of the round's
    sample or already in a finished leaf).
    """
    order_flat, order_ptr, missing_flat, missing_ptr = presorted
    feature, threshold, default_left = [LEAF], [0.0], [True]
    left, right, value, gain = [LEAF], [LEAF], [0.0], [0.0]

    level_nodes = [0]
    for depth in range(params.max_depth + 1):
        n_level = len(level_nodes)
        active = node_of >= 0
        node_grad = np.bincount(node_of[active], weights=grad[active], minlength=n_level)
        node_hess = np.bincount(node_of[active], weights=hess[active], minlength=n_level)

        if depth < params.max_depth and candidate_features.size:
            split_gain, split_feature, split_threshold, split_default = find_level_splits(
                features, grad, hess, node_of, node_grad, node_hess, candidate_features,
                order_flat, order_ptr, missing_flat, missing_ptr,
                float(params.l2_reg), float(params.min_child_weight),
                float(params.min_split_gain), DENOMINATOR_FLOOR)
        else:
            split_gain = np.zeros(n_level)
            split_feature = np.full(n_level, LEAF, dtype=np.int64)
            split_threshold = np.zeros(n_level)
            split_default = np.zeros(n_level, dtype=np.bool_)

        left_child = np.full(n_level, LEAF, dtype=np.int64)
        right_child = np.full(n_level, LEAF, dtype=np.int64)
        next_level = []
        for position, node in enumerate(level_nodes):
            if split_feature[position] == LEAF:
                value[node] = params.eta * leaf_weight(node_grad[position],
                                                       node_hess[position], params.l2_reg)
                continue
            feature[node] = int(split_feature[position])
            threshold[node] = float(split_threshold[position])
            default_left[node] = bool(split_default[position])
            gain[node] = float(split_gain[position])
            for children, child_of in ((left, left_child), (right, right_child)):
                child = len(feature)
                feature.append(LEAF)
                threshold.append(0.0)
                default_left.append(True)
                left.append(LEAF)
                right.append(LEAF)
                value.append(0.0)
                gain.append(0.0)
                children[node] = child
                child_of[position] = len(next_level)
                next_level.append(child)

        if not next_level:
            break
        node_of = apply_level_splits(features, missing_mask, node_of, split_feature,
                                     split_threshold, split_default, left_child, right_child)
        level_nodes = next_level

    return Tree(feature=feature, threshold=threshold, default_left=default_left,
                left=left, right=right, value=value, gain=gain)


def _tree_output(tree: Tree, features: np.ndarray, missing_mask: np.ndarray) -> np.ndarray:
    return predict_forest(features, missing_mask, np.zeros(1, dtype=np.int64), tree.feature,
                          tree.threshold, tree.default_left, tree.left, tree.right, tree.value)


def train(dataset: Dataset, rows, params: Optional[GbtHyperParams] = None) -> GbtModel:
    # pylint: disable=too-many-locals
    """
    Fit a boosted tree ensemble on a subset of the dataset's rows.

    Each round computes g = p - y and h = p (1 - p) from the current
    predictions, draws the round's row sample and the tree's feature sample
    from a Generator seeded with params.seed, grows a tree with exact greedy
    splits and adds it, leaf weights scaled by eta.

    :param dataset: Dataset holding the rows
    :param rows: row indices to train on
    :param params: GbtHyperParams, defaults when omitted
    :raises:
        LearnerError: if the subset is empty
        SingleClassError: if the subset holds a single class
    :return: GbtModel
    """
    if params is None:
        params = GbtHyperParams()
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        raise LearnerError("Cannot train on an empty row subset")

    labels = dataset.labels[rows].astype(np.float64)
    positives = float(labels.sum())
    if positives in (0.0, float(rows.size)):
        raise SingleClassError(f"Training subset of {dataset.name} ({rows.size} rows) has a "
                               f"single class")

    features = np.ascontiguousarray(dataset.features[rows])
    missing_mask = np.ascontiguousarray(dataset.missing_mask[rows])
    n_rows, n_features = features.shape

    if params.base_score is None:
        base_score = log(positives / (n_rows - positives))
    else:
        base_score = float(params.base_score)

    presorted = _presort(features, missing_mask)
    rng = np.random.default_rng(params.seed)
    margin = np.full(n_rows, base_score)
    trees = []
    for round_number in range(params.n_rounds):
        probabilities = sigmoid(margin)
        grad = probabilities - labels
        hess = probabilities * (1.0 - probabilities)

        if params.subsample < 1.0:
            node_of = np.full(n_rows, -1, dtype=np.int64)
            node_of[rng.choice(n_rows, _fraction_count(params.subsample, n_rows),
                               replace=False)] = 0
        else:
            node_of = np.zeros(n_rows, dtype=np.int64)

        if params.colsample < 1.0 and n_features:
            candidate_features = np.sort(rng.choice(
                n_features, _fraction_count(params.colsample, n_features), replace=False))
        else:
            candidate_features = np.arange(n_features, dtype=np.int64)

        tree = _grow_tree(features, missing_mask, grad, hess, node_of,
                          candidate_features.astype(np.int64), presorted, params)
        trees.append(tree)
        margin = margin + _tree_output(tree, features, missing_mask)
        logger.debug("Round %s: %s nodes, depth %s", round_number, tree.n_nodes, tree.depth)

    model = GbtModel(base_score=base_score, trees=trees, feature_count=n_features)
    logger.debug("Trained %r on %s rows of %s", model, n_rows, dataset.name)
    return model


def _checked_view(model: GbtModel, dataset: Dataset, rows):
    if dataset.n_features != model.feature_count:
        raise FeatureCountMismatchError(f"Model expects {model.feature_count} features, "
                                        f"{dataset.name} has {dataset.n_features}")
    if rows is None:
        return dataset.features, dataset.missing_mask
    rows = np.asarray(rows, dtype=np.int64)
    return dataset.features[rows], dataset.missing_mask[rows]


def predict_proba(model: GbtModel, dataset: Dataset, rows=None) -> np.ndarray:
    """
    P(y = 1) = sigmoid(base_score + sum of tree outputs).  Missing features
    follow each node's stored default direction.

    :param model: GbtModel
    :param dataset: Dataset to score
    :param rows: optional row indices (defaults to every row)
    :raises:
        FeatureCountMismatchError: if the dataset's feature count differs
            from the model's
    :return: array of probabilities strictly inside (0, 1)
    """
    features, missing_mask = _checked_view(model, dataset, rows)
    return sigmoid(model.base_score + model.tree_output(features, missing_mask))


def staged_predict_proba(model: GbtModel, dataset: Dataset, rows=None) -> Iterator[np.ndarray]:
    """
    Probabilities after 0, 1, ..., len(model.trees) trees.

    :param model: GbtModel
    :param dataset: Dataset to score
    :param rows: optional row indices
    :raises:
        FeatureCountMismatchError: if the feature counts differ
    :return: iterator of probability arrays
    """
    features, missing_mask = _checked_view(model, dataset, rows)
    features = np.ascontiguousarray(features)
    missing_mask = np.ascontiguousarray(missing_mask)
    margin = np.full(features.shape[0], model.base_score)
    yield sigmoid(margin)
    for tree in model.trees:
        margin = margin + _tree_output(tree, features, missing_mask)
        yield sigmoid(margin)


def dump_model(model: GbtModel, path) -> None:
    """
    Write the model's JSON tree structure to a file.

    :param model: GbtModel
    :param path: output path
    """
    with open(path, "w", encoding="utf-8") as model_file:
        model_file.write(model.json)
    logger.info("Wrote %r to %s", model, path)
