"""
The hyperparameter response function: a ParamAssignment is scored by the
stratified cross-validated mean Gini of the boosted tree learner, and the
loss minimized by the tuners is its negative.
"""
from logging import getLogger
from time import perf_counter
from typing import Any, List, Mapping, Optional
from ..exceptions import InvalidArgumentError
from ..gbt import (GbtHyperParams,
                   default_hyperparams,
                   make_hyperparams,
                   train,
                   predict_proba)
from ..metrics import ScoredFold
from ..spaces import SearchSpace, ParamAssignment, parse_space
from .objective_models import Trial
from .objective_vars import (default_space_definition,
                             MIN_FRACTION,
                             FRACTION_FIELDS,
                             NON_NEGATIVE_FIELDS,
                             INTEGER_FIELDS)

logger = getLogger(__name__)


def default_space() -> SearchSpace:
    """
    The default tuning space over the learner's hyperparameters: eta,
    max_depth, min_child_weight, subsample, colsample, l2_reg,
    min_split_gain and n_rounds.

    :return: SearchSpace with 8 dimensions
    """
    return parse_space(default_space_definition)


def _clamp(name: str, value: Any) -> Any:
    if name in INTEGER_FIELDS:
        return max(INTEGER_FIELDS[name], int(round(float(value))))
    if name in FRACTION_FIELDS:
        return min(1.0, max(MIN_FRACTION, float(value)))
    if name in NON_NEGATIVE_FIELDS:
        return max(0.0, float(value))
    return value


def to_hyperparams(params: Mapping[str, Any],
                   overrides: Optional[Mapping[str, Any]] = None,
                   seed: Optional[int] = None) -> GbtHyperParams:
    """
    Map an assignment onto GbtHyperParams.  Learner defaults are overlaid by
    the overrides, then by the assignment, then by the seed.  Values are
    clamped into the learner's legal ranges: integer fields rounded,
    fractions clamped into (0, 1], non-negative fields floored at 0.

    :param params: ParamAssignment (or any mapping of learner field names)
    :param overrides: fixed learner settings not being tuned
    :param seed: learner seed, if given
    :raises:
        InvalidArgumentError: on unknown field names or uncoercible values
    :return: GbtHyperParams
    """
    fields = dict(default_hyperparams)
    fields.update(overrides or {})
    fields.update(params)
    if seed is not None:
        fields["seed"] = seed
    unknown = [name for name in fields if name not in default_hyperparams]
    if unknown:
        raise InvalidArgumentError(f"Unknown learner hyperparameters: {unknown}")
    try:
        clamped = {name: _clamp(name, value) for name, value in fields.items()
                   if value is not None}
    except (TypeError, ValueError) as err:
        raise InvalidArgumentError(f"Unable to map {dict(params)} onto the learner: "
                                   f"{err}") from err
    return make_hyperparams(**clamped)


def _cross_validate(ctx, hyperparams: GbtHyperParams) -> List[float]:
    fold_ginis = []
    for fold_number, (train_rows, test_rows) in enumerate(ctx.fold_plan):
        model = train(ctx.dataset, train_rows, hyperparams)
        scored = ScoredFold(scores=predict_proba(model, ctx.dataset, test_rows),
                            labels=ctx.dataset.labels[test_rows])
        logger.debug("Fold %s: %s train rows, %s test rows, gini %.4f",
                     fold_number, train_rows.size, test_rows.size, scored.gini)
        fold_ginis.append(scored.gini)
    return fold_ginis


def evaluate(ctx, params: Mapping[str, Any], index: int) -> Trial:
    """
    Score one assignment: for every fold of the context's plan, train on the
    fold's training rows, predict its test rows and take the fold Gini; the
    trial's mean Gini is their mean (fold order).  The learner seed is
    ctx.seed XOR index.

    :param ctx: ObjectiveContext
    :param params: assignment valid in ctx.param_space
    :param index: trial sequence number
    :raises:
        InvalidArgumentError: if params is not valid in the space
        LearnerError: propagated from the learner
    :return: Trial
    """
    params = ctx.param_space.assignment(params)
    hyperparams = to_hyperparams(params, ctx.overrides, ctx.seed ^ index)
    start = perf_counter()
    fold_ginis = _cross_validate(ctx, hyperparams)
    trial = Trial(params=params, fold_ginis=fold_ginis,
                  wall_seconds=perf_counter() - start, index=index)
    logger.info("Trial %s on %s: mean gini %.4f in %.2fs", index, ctx.dataset.name,
                trial.mean_gini, trial.wall_seconds)
    return trial


def evaluate_defaults(ctx, index: int = 0) -> Trial:
    """
    Score the learner's default hyperparameters (plus the context's
    overrides) on the context's folds, as an untuned reference.

    :param ctx: ObjectiveContext
    :param index: trial sequence number (also mixed into the learner seed)
    :return: Trial whose params are the learner settings used
    """
    hyperparams = to_hyperparams({}, ctx.overrides, ctx.seed ^ index)
    start = perf_counter()
    fold_ginis = _cross_validate(ctx, hyperparams)
    settings = hyperparams.dict(exclude={"seed", "base_score"})
    trial = Trial(params=ParamAssignment(settings), fold_ginis=fold_ginis,
                  wall_seconds=perf_counter() - start, index=index)
    logger.info("Default learner on %s: mean gini %.4f in %.2fs", ctx.dataset.name,
                trial.mean_gini, trial.wall_seconds)
    return trial
