"""
pydantic model for one evaluation of the hyperparameter response function.
"""
# pylint: disable=too-few-public-methods, no-self-argument, no-name-in-module
from logging import getLogger
from math import isclose
from typing import Any, Dict, Optional, Tuple
from pydantic import BaseModel, confloat, conint, root_validator
from ..metrics import mean_gini as metrics_mean_gini
from ..spaces import ParamAssignment

logger = getLogger(__name__)


class Trial(BaseModel):
    """
    One objective evaluation: the assignment, its per-fold Gini scores, the
    mean Gini and loss = -mean Gini, wall time and sequence number.

    mean_gini and loss are derived from fold_ginis when omitted.
    """
    params: ParamAssignment
    fold_ginis: Tuple[float, ...]
    mean_gini: Optional[float] = None
    loss: Optional[float] = None
    wall_seconds: confloat(ge=0)
    index: conint(ge=0)

    class Config:
        """pydantic configuration"""
        arbitrary_types_allowed = True
        frozen = True

    @root_validator(skip_on_failure=True)
    def derive_scores(cls, values):
        """
        Fill in mean_gini and loss, and check supplied values agree with the
        fold scores.

        :param values: validated field values
        :raises:
            ValueError: if fold_ginis is empty or a supplied score disagrees
        :return: values
        """
        if not values["fold_ginis"]:
            raise ValueError("a trial needs at least one fold score")
        derived = metrics_mean_gini(values["fold_ginis"])
        supplied = values.get("mean_gini")
        if supplied is not None and not isclose(supplied, derived, abs_tol=1e-12):
            raise ValueError(f"mean_gini {supplied} is not the mean of {values['fold_ginis']}")
        values["mean_gini"] = derived
        if values.get("loss") is not None and not isclose(values["loss"], -derived,
                                                          abs_tol=1e-12):
            raise ValueError(f"loss {values['loss']} must equal -mean_gini ({-derived})")
        values["loss"] = -derived
        return values

    @property
    def record(self) -> Dict[str, Any]:
        """
        :return: flat JSON-ready dict of the trial
        """
        return {"index": self.index,
                "params": self.params.dict,
                "fold_ginis": list(self.fold_ginis),
                "mean_gini": self.mean_gini,
                "loss": self.loss,
                "wall_seconds": self.wall_seconds}
