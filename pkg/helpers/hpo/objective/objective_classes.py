"""
Objective classes.  The tuners only need an object with a param_space and
an evaluate(params, index) -> Trial method: ObjectiveContext scores
assignments by cross-validating the boosted tree learner, FunctionObjective
wraps a plain loss function.
"""
from logging import getLogger
from time import perf_counter
from typing import Any, Callable, Mapping, Optional
import numpy as np
from ..data import Dataset, FoldPlan, stratified_kfold
from ..exceptions import InvalidArgumentError
from ..spaces import SearchSpace, ParamAssignment
from .objective_functions import default_space, evaluate as evaluate_cv
from .objective_models import Trial

logger = getLogger(__name__)


class Objective:
    """
    Base objective: something the tuners can minimize over a SearchSpace.
    """
    def __init__(self, param_space: SearchSpace):
        self.param_space = param_space

    def evaluate(self, params: Mapping[str, Any], index: int) -> Trial:
        """
        :param params: assignment valid in self.param_space
        :param index: trial sequence number
        :return: Trial
        """
        raise NotImplementedError


class ObjectiveContext(Objective):
    """
    Cross-validated learner objective over a row subset of a dataset.
    """
    def __init__(self,
                 dataset: Dataset,
                 rows,
                 fold_plan: FoldPlan,
                 param_space: Optional[SearchSpace] = None,
                 overrides: Optional[Mapping[str, Any]] = None,
                 seed: int = 0):
        # pylint: disable=too-many-arguments
        """
        :param dataset: Dataset
        :param rows: row subset the objective may touch (full data or a
            stratified sample)
        :param fold_plan: FoldPlan over rows
        :param param_space: SearchSpace, default_space() when omitted
        :param overrides: fixed learner settings not being tuned
        :param seed: run seed; trial k trains with seed XOR k
        :raises:
            InvalidArgumentError: if the fold plan indexes rows outside the
                subset
        """
        super().__init__(param_space if param_space is not None else default_space())
        self.dataset = dataset
        self.rows = np.unique(np.asarray(rows, dtype=np.int64))
        if not np.isin(fold_plan.rows, self.rows).all():
            raise InvalidArgumentError("Fold plan indexes rows outside the objective's subset")
        self.fold_plan = fold_plan
        self.overrides = dict(overrides or {})
        self.seed = int(seed)

    def __repr__(self):
        return (f"ObjectiveContext({self.dataset.name!r}, rows={self.rows.size}, "
                f"k={self.fold_plan.k}, seed={self.seed})")

    @classmethod
    def build(cls,
              dataset: Dataset,
              rows=None,
              k: int = 3,
              seed: int = 0,
              param_space: Optional[SearchSpace] = None,
              overrides: Optional[Mapping[str, Any]] = None,
              fold_plan: Optional[FoldPlan] = None) -> "ObjectiveContext":
        # pylint: disable=too-many-arguments
        """
        Build a context, creating a stratified K-fold plan over the rows with
        the same seed unless one is supplied.

        :param dataset: Dataset
        :param rows: row subset, all rows when omitted
        :param k: fold count
        :param seed: run seed (also the fold seed)
        :param param_space: SearchSpace, default_space() when omitted
        :param overrides: fixed learner settings
        :param fold_plan: optional existing plan to share
        :return: ObjectiveContext
        """
        if rows is None:
            rows = np.arange(dataset.n_rows, dtype=np.int64)
        if fold_plan is None:
            fold_plan = stratified_kfold(dataset, k, seed, rows=rows)
        return cls(dataset, rows, fold_plan, param_space, overrides, seed)

    def evaluate(self, params, index):
        return evaluate_cv(self, params, index)


class FunctionObjective(Objective):
    """
    Objective defined by a loss function of the assignment; the trial's
    single "fold" score is -loss.
    """
    def __init__(self, param_space: SearchSpace, loss: Callable[[ParamAssignment], float]):
        super().__init__(param_space)
        self.loss = loss

    def __repr__(self):
        return f"FunctionObjective({self.param_space!r})"

    def evaluate(self, params, index):
        params = self.param_space.assignment(params)
        start = perf_counter()
        score = -float(self.loss(params))
        return Trial(params=params, fold_ginis=(score,),
                     wall_seconds=perf_counter() - start, index=index)
