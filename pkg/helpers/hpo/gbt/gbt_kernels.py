"""
numba kernels for the exact greedy split search and for tree traversal.

Split search works level by level: for every candidate feature the rows are
visited once in ascending value order (missing rows are listed separately),
and statistics are accumulated per open node, so one pass evaluates every
threshold of every node on the level.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _score(grad_sum, hess_sum, l2_reg, floor):
    denominator = hess_sum + l2_reg
    if denominator <= 0.0:
        denominator = floor
    return grad_sum * grad_sum / denominator


@njit(cache=True, nogil=True)
def find_level_splits(features, grad, hess, node_of, node_grad, node_hess,
                      candidate_features, order_flat, order_ptr, missing_flat, missing_ptr,
                      l2_reg, min_child_weight, min_split_gain, floor):
    # pylint: disable=too-many-arguments, too-many-locals, too-many-branches, too-many-statements
    """
    Best split of every open node on a level.

    Candidates are visited in ascending feature index, then ascending
    threshold, and only a strictly larger gain replaces the current best, so
    equal-gain ties go to the lowest feature index, then the lowest
    threshold.  A split must have gain > min_split_gain and a hessian sum of
    at least min_child_weight on both sides.  Missing rows go to whichever
    side gives the larger gain; on equal gains they go to the side with the
    larger present hessian (left when equal).

    :return: (gain, feature, threshold, default_left) arrays per node;
        feature -1 means no acceptable split
    """
    n_nodes = node_grad.shape[0]
    best_gain = np.full(n_nodes, min_split_gain)
    best_feature = np.full(n_nodes, -1, dtype=np.int64)
    best_threshold = np.zeros(n_nodes)
    best_default_left = np.zeros(n_nodes, dtype=np.bool_)

    parent_score = np.empty(n_nodes)
    for node in range(n_nodes):
        parent_score[node] = _score(node_grad[node], node_hess[node], l2_reg, floor)

    miss_grad = np.zeros(n_nodes)
    miss_hess = np.zeros(n_nodes)
    left_grad = np.zeros(n_nodes)
    left_hess = np.zeros(n_nodes)
    last_value = np.zeros(n_nodes)
    has_last = np.zeros(n_nodes, dtype=np.bool_)

    for position in range(candidate_features.shape[0]):
        feature = candidate_features[position]
        miss_grad[:] = 0.0
        miss_hess[:] = 0.0
        left_grad[:] = 0.0
        left_hess[:] = 0.0
        has_last[:] = False

        for k in range(missing_ptr[feature], missing_ptr[feature + 1]):
            row = missing_flat[k]
            node = node_of[row]
            if node >= 0:
                miss_grad[node] += grad[row]
                miss_hess[node] += hess[row]

        for k in range(order_ptr[feature], order_ptr[feature + 1]):
            row = order_flat[k]
            node = node_of[row]
            if node < 0:
                continue
            value = features[row, feature]
            if has_last[node] and value != last_value[node]:
                grad_left = left_grad[node]
                hess_left = left_hess[node]
                grad_right = node_grad[node] - miss_grad[node] - grad_left
                hess_right = node_hess[node] - miss_hess[node] - hess_left

                # Missing rows sent right
                gain_right = 0.5 * (_score(grad_left, hess_left, l2_reg, floor)
                                    + _score(grad_right + miss_grad[node],
                                             hess_right + miss_hess[node], l2_reg, floor)
                                    - parent_score[node])
                valid_right = (hess_left >= min_child_weight
                               and hess_right + miss_hess[node] >= min_child_weight)
                # Missing rows sent left
                gain_left = 0.5 * (_score(grad_left + miss_grad[node],
                                          hess_left + miss_hess[node], l2_reg, floor)
                                   + _score(grad_right, hess_right, l2_reg, floor)
                                   - parent_score[node])
                valid_left = (hess_left + miss_hess[node] >= min_child_weight
                              and hess_right >= min_child_weight)

                use_left = False
                if valid_left and valid_right:
                    if gain_left > gain_right:
                        use_left = True
                    elif gain_left == gain_right and hess_left >= hess_right:
                        use_left = True
                elif valid_left:
                    use_left = True

                if valid_left or valid_right:
                    gain = gain_left if use_left else gain_right
                    if gain > best_gain[node]:
                        threshold = last_value[node] + (value - last_value[node]) / 2.0
                        if threshold >= value:
                            threshold = last_value[node]
                        best_gain[node] = gain
                        best_feature[node] = feature
                        best_threshold[node] = threshold
                        best_default_left[node] = use_left

            left_grad[node] += grad[row]
            left_hess[node] += hess[row]
            last_value[node] = value
            has_last[node] = True

    return best_gain, best_feature, best_threshold, best_default_left


@njit(cache=True, nogil=True)
def apply_level_splits(features, missing_mask, node_of, split_feature, split_threshold,
                       split_default_left, left_child, right_child):
    # pylint: disable=too-many-arguments
    """
    Move every row of a split node to its child on the next level.  Rows of
    nodes that became leaves (split_feature -1) leave the active set (-1).

    :return: node_of array for the next level
    """
    next_node_of = np.full(node_of.shape[0], -1, dtype=np.int64)
    for row in range(node_of.shape[0]):
        node = node_of[row]
        if node < 0:
            continue
        feature = split_feature[node]
        if feature < 0:
            continue
        if missing_mask[row, feature]:
            go_left = split_default_left[node]
        else:
            go_left = features[row, feature] <= split_threshold[node]
        next_node_of[row] = left_child[node] if go_left else right_child[node]
    return next_node_of


@njit(cache=True, nogil=True)
def predict_forest(features, missing_mask, roots, node_feature, node_threshold,
                   node_default_left, node_left, node_right, node_value):
    # pylint: disable=too-many-arguments
    """
    Sum of leaf values over every tree for every row.  Node arrays hold all
    trees back to back; child indices are absolute; roots lists each tree's
    first node.

    :return: array of summed tree outputs per row
    """
    n_rows = features.shape[0]
    output = np.zeros(n_rows)
    for row in range(n_rows):
        total = 0.0
        for tree in range(roots.shape[0]):
            node = roots[tree]
            while node_feature[node] >= 0:
                feature = node_feature[node]
                if missing_mask[row, feature]:
                    go_left = node_default_left[node]
                else:
                    go_left = features[row, feature] <= node_threshold[node]
                node = node_left[node] if go_left else node_right[node]
            total += node_value[node]
        output[row] = total
    return output
