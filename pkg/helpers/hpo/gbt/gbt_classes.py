"""
Tree and GbtModel classes.  Trees are stored as flat node arrays (breadth
first, root at index 0) so prediction runs in a single numba kernel; the
nested dict/JSON form is produced on demand for introspection.
"""
from json import dumps as json_dumps
from logging import getLogger
from typing import Any, Dict, Iterator, List, Optional, Sequence
import numpy as np
from .gbt_kernels import predict_forest
from .gbt_vars import LEAF

logger = getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class Tree:
    """
    One regression tree.  Internal nodes hold a feature index, threshold
    (value <= threshold goes left), default direction for missing values and
    child indices; leaves hold an (eta-scaled) weight.
    """
    def __init__(self,
                 feature: Sequence[int],
                 threshold: Sequence[float],
                 default_left: Sequence[bool],
                 left: Sequence[int],
                 right: Sequence[int],
                 value: Sequence[float],
                 gain: Optional[Sequence[float]] = None):
        # pylint: disable=too-many-arguments
        self.feature = _frozen(np.asarray(feature, dtype=np.int64))
        self.threshold = _frozen(np.asarray(threshold, dtype=np.float64))
        self.default_left = _frozen(np.asarray(default_left, dtype=np.bool_))
        self.left = _frozen(np.asarray(left, dtype=np.int64))
        self.right = _frozen(np.asarray(right, dtype=np.int64))
        self.value = _frozen(np.asarray(value, dtype=np.float64))
        if gain is None:
            gain = np.zeros(self.feature.size)
        self.gain = _frozen(np.asarray(gain, dtype=np.float64))

    @classmethod
    def leaf(cls, weight: float) -> "Tree":
        """
        A tree with a single leaf.

        :param weight: leaf output (already eta-scaled)
        :return: Tree
        """
        return cls(feature=[LEAF], threshold=[0.0], default_left=[True],
                   left=[LEAF], right=[LEAF], value=[weight], gain=[0.0])

    def __repr__(self):
        return f"Tree(nodes={self.n_nodes}, depth={self.depth})"

    @property
    def n_nodes(self) -> int:
        """
        :return: node count
        """
        return int(self.feature.size)

    @property
    def depth(self) -> int:
        """
        :return: longest root-to-leaf edge count
        """
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        for node in range(self.n_nodes):
            if self.feature[node] != LEAF:
                depths[self.left[node]] = depths[node] + 1
                depths[self.right[node]] = depths[node] + 1
        return int(depths.max())

    def internal_nodes(self) -> Iterator[int]:
        """
        :return: iterator over internal node indices
        """
        return (node for node in range(self.n_nodes) if self.feature[node] != LEAF)

    def leaf_nodes(self) -> Iterator[int]:
        """
        :return: iterator over leaf node indices
        """
        return (node for node in range(self.n_nodes) if self.feature[node] == LEAF)

    def to_dict(self, node: int = 0) -> Dict[str, Any]:
        """
        Nested dict representation of the subtree rooted at node.

        :param node: subtree root index
        :return: {"leaf": weight} or {"feature", "threshold",
            "default_direction", "gain", "left", "right"}
        """
        if self.feature[node] == LEAF:
            return {"leaf": float(self.value[node])}
        return {"feature": int(self.feature[node]),
                "threshold": float(self.threshold[node]),
                "default_direction": "left" if self.default_left[node] else "right",
                "gain": float(self.gain[node]),
                "left": self.to_dict(int(self.left[node])),
                "right": self.to_dict(int(self.right[node]))}

    def apply(self, features: np.ndarray, missing_mask: np.ndarray) -> np.ndarray:
        """
        Leaf index reached by every row.

        :param features: (n, n_features) array
        :param missing_mask: boolean array, same shape
        :return: int array of leaf indices
        """
        leaves = np.empty(features.shape[0], dtype=np.int64)
        for row in range(features.shape[0]):
            node = 0
            while self.feature[node] != LEAF:
                feature = self.feature[node]
                if missing_mask[row, feature]:
                    go_left = self.default_left[node]
                else:
                    go_left = features[row, feature] <= self.threshold[node]
                node = self.left[node] if go_left else self.right[node]
            leaves[row] = node
        return leaves


class GbtModel:
    """
    Trained boosted tree ensemble: prior log-odds plus the sum of tree
    outputs, mapped through the sigmoid.
    """
    def __init__(self, base_score: float, trees: List[Tree], feature_count: int):
        """
        :param base_score: prior log-odds
        :param trees: list of Tree
        :param feature_count: number of features the model was trained on
        :raises:
            ValueError: if a tree references a feature >= feature_count
        """
        for tree in trees:
            used = tree.feature[tree.feature != LEAF]
            if used.size and int(used.max()) >= feature_count:
                raise ValueError(f"Tree references feature {int(used.max())} but the model "
                                 f"has {feature_count} features")
        self.base_score = float(base_score)
        self.trees = tuple(trees)
        self.feature_count = int(feature_count)
        self._forest = self._pack()

    def __repr__(self):
        return (f"GbtModel(base_score={self.base_score:.4f}, trees={len(self.trees)}, "
                f"features={self.feature_count})")

    def _pack(self):
        """
        Concatenate every tree's node arrays, offsetting child indices, for
        the forest kernel.
        """
        if not self.trees:
            empty_int = np.zeros(0, dtype=np.int64)
            return (empty_int, empty_int, np.zeros(0), np.zeros(0, dtype=np.bool_),
                    empty_int, empty_int, np.zeros(0))
        offsets = np.cumsum([0] + [tree.n_nodes for tree in self.trees[:-1]])
        roots = np.asarray(offsets, dtype=np.int64)
        lefts, rights = [], []
        for offset, tree in zip(offsets, self.trees):
            lefts.append(np.where(tree.left == LEAF, LEAF, tree.left + offset))
            rights.append(np.where(tree.right == LEAF, LEAF, tree.right + offset))
        return (roots,
                np.concatenate([tree.feature for tree in self.trees]),
                np.concatenate([tree.threshold for tree in self.trees]),
                np.concatenate([tree.default_left for tree in self.trees]),
                np.concatenate(lefts).astype(np.int64),
                np.concatenate(rights).astype(np.int64),
                np.concatenate([tree.value for tree in self.trees]))

    def tree_output(self, features: np.ndarray, missing_mask: np.ndarray) -> np.ndarray:
        """
        Sum of tree outputs (no base score) per row.

        :param features: (n, feature_count) float array
        :param missing_mask: boolean array, same shape
        :return: float array
        """
        features = np.ascontiguousarray(features, dtype=np.float64)
        missing_mask = np.ascontiguousarray(missing_mask, dtype=np.bool_)
        return predict_forest(features, missing_mask, *self._forest)

    @property
    def dict(self) -> Dict[str, Any]:
        """
        :return: JSON-ready dump of the model
        """
        return {"base_score": self.base_score,
                "feature_count": self.feature_count,
                "trees": [tree.to_dict() for tree in self.trees]}

    @property
    def json(self) -> str:
        """
        :return: JSON representation of self.dict
        """
        return json_dumps(self.dict)
