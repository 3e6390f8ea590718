"""
pydantic models for TPE configuration and tuning run results.
"""
# pylint: disable=too-few-public-methods, no-self-argument, no-name-in-module
from logging import getLogger
from typing import Any, Dict, List, Optional, Tuple
from pydantic import BaseModel, Extra, confloat, conint, root_validator
from ..data import FoldPlan
from ..objective import Trial
from ..spaces import ParamAssignment
from .tuner_vars import tpe_defaults

logger = getLogger(__name__)


class TpeConfig(BaseModel):
    """
    Settings of the TPE-based SMBO driver.

    n_startup is capped at n_trials, so a budget at or below the warmup size
    runs as pure random search.
    """
    n_trials: conint(ge=1) = tpe_defaults["n_trials"]
    n_startup: conint(ge=0) = tpe_defaults["n_startup"]
    gamma_quantile: confloat(gt=0, lt=1) = tpe_defaults["gamma_quantile"]
    n_candidates: conint(ge=1) = tpe_defaults["n_candidates"]
    kde_bandwidth_floor: confloat(gt=0) = tpe_defaults["kde_bandwidth_floor"]
    prior_weight: confloat(gt=0) = tpe_defaults["prior_weight"]

    class Config:
        """pydantic configuration: immutable, unknown fields rejected"""
        frozen = True
        extra = Extra.forbid

    @root_validator(skip_on_failure=True)
    def cap_startup(cls, values):
        """
        :param values: validated field values
        :return: values with n_startup <= n_trials
        """
        values["n_startup"] = min(values["n_startup"], values["n_trials"])
        return values


class TuneResult(BaseModel):
    """
    Outcome of one tuning run.  best_params is the first trial attaining the
    highest mean Gini.
    """
    method: str
    trials: Tuple[Trial, ...]
    best_params: Optional[ParamAssignment] = None
    best_mean_gini: Optional[float] = None
    best_index: Optional[int] = None
    elapsed_seconds: confloat(gt=0)
    sample_rate: Optional[confloat(gt=0, le=1)] = None
    full_data_mean_gini: Optional[float] = None
    full_data_seconds: Optional[confloat(ge=0)] = None
    fold_plan: Optional[FoldPlan] = None
    full_data_fold_plan: Optional[FoldPlan] = None

    class Config:
        """pydantic configuration"""
        arbitrary_types_allowed = True
        frozen = True

    @root_validator(skip_on_failure=True)
    def select_best(cls, values):
        """
        Derive the best trial (first occurrence wins ties).

        :param values: validated field values
        :raises:
            ValueError: if there are no trials
        :return: values with best_params, best_mean_gini and best_index set
        """
        trials = values["trials"]
        if not trials:
            raise ValueError("a tuning result needs at least one trial")
        best = trials[0]
        for trial in trials[1:]:
            if trial.mean_gini > best.mean_gini:
                best = trial
        values.update({"best_params": best.params,
                       "best_mean_gini": best.mean_gini,
                       "best_index": best.index})
        return values

    @property
    def records(self) -> List[Dict[str, Any]]:
        """
        :return: per-trial flat records
        """
        return [trial.record for trial in self.trials]
