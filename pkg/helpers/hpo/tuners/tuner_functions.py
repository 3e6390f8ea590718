"""
Hyperparameter optimization strategies: grid search, random search,
TPE-based SMBO and Randomized-Hyperopt (SMBO on a stratified sample of the
rows).

Every tuner minimizes trial loss (= -mean Gini) and reports the first trial
attaining the highest mean Gini.  random_search and smbo draw from
default_rng(seed) in the same order, so an SMBO run whose budget fits in its
warmup reproduces random search exactly.
"""
from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from math import ceil
from time import perf_counter
from typing import Any, Dict, List, Mapping, Optional, Sequence
from pydantic import ValidationError
import numpy as np
from ..data import Dataset, FoldPlan, stratified_kfold, stratified_sample
from ..exceptions import InvalidArgumentError
from ..objective import Objective, ObjectiveContext, Trial
from ..spaces import SearchSpace, ParamAssignment, sample
from .tuner_classes import CategoricalParzen, ContinuousParzen
from .tuner_models import TpeConfig, TuneResult
from .tuner_vars import GRID, RANDOM, TPE, RANDOMIZED, DEFAULT_RANDOM_TRIALS

logger = getLogger(__name__)


def make_tpe_config(**fields) -> TpeConfig:
    """
    Build a TpeConfig, converting validation failures to the domain error.

    :param fields: TpeConfig fields; unset fields take the defaults
    :raises:
        InvalidArgumentError: if a value is out of range or unknown
    :return: TpeConfig
    """
    try:
        return TpeConfig(**fields)
    except ValidationError as err:
        raise InvalidArgumentError(f"Invalid TPE configuration: {err}") from err


def _evaluate_all(ctx: Objective, assignments: Sequence[ParamAssignment],
                  n_jobs: int) -> List[Trial]:
    """
    Evaluate assignments, trial k getting index k.  With n_jobs > 1 trials
    run on a thread pool; results keep submission order.
    """
    if n_jobs < 1:
        raise InvalidArgumentError(f"n_jobs must be >= 1, got {n_jobs}")
    if n_jobs == 1:
        return [ctx.evaluate(params, index) for index, params in enumerate(assignments)]
    with ThreadPoolExecutor(max_workers=n_jobs) as executor:
        futures = [executor.submit(ctx.evaluate, params, index)
                   for index, params in enumerate(assignments)]
        return [future.result() for future in futures]


def _fold_plan_of(ctx: Objective) -> Optional[FoldPlan]:
    return getattr(ctx, "fold_plan", None)


def grid_search(ctx: Objective, grid: Sequence[Mapping[str, Any]], n_jobs: int = 1) -> TuneResult:
    """
    Evaluate every grid point exactly once, in order.

    :param ctx: objective
    :param grid: non-empty ordered list of assignments (see grid_points)
    :param n_jobs: concurrent trial evaluations
    :raises:
        InvalidArgumentError: if the grid is empty
    :return: TuneResult
    """
    grid = list(grid)
    if not grid:
        raise InvalidArgumentError("Grid search needs at least one grid point")
    logger.info("Grid search over %s points", len(grid))
    start = perf_counter()
    trials = _evaluate_all(ctx, grid, n_jobs)
    return TuneResult(method=GRID, trials=trials, elapsed_seconds=perf_counter() - start,
                      fold_plan=_fold_plan_of(ctx))


def random_search(ctx: Objective, n_trials: int = DEFAULT_RANDOM_TRIALS, seed: int = 0,
                  n_jobs: int = 1) -> TuneResult:
    """
    Evaluate n_trials independent draws from the space.  The draws come
    from default_rng(seed) before any evaluation, so the trial sequence
    depends on the seed only.

    :param ctx: objective
    :param n_trials: trial budget (>= 1)
    :param seed: integer seed
    :param n_jobs: concurrent trial evaluations
    :raises:
        InvalidArgumentError: if n_trials < 1
    :return: TuneResult
    """
    if n_trials < 1:
        raise InvalidArgumentError(f"Random search needs n_trials >= 1, got {n_trials}")
    logger.info("Random search: %s trials, seed %s", n_trials, seed)
    start = perf_counter()
    rng = np.random.default_rng(seed)
    assignments = [sample(ctx.param_space, rng) for _ in range(n_trials)]
    trials = _evaluate_all(ctx, assignments, n_jobs)
    return TuneResult(method=RANDOM, trials=trials, elapsed_seconds=perf_counter() - start,
                      fold_plan=_fold_plan_of(ctx))


def _estimator(dist, observations, config: TpeConfig):
    if dist.categorical:
        return CategoricalParzen(dist, observations, config.prior_weight)
    return ContinuousParzen(dist, observations, config.prior_weight,
                            config.kde_bandwidth_floor)


def tpe_suggest(history: Sequence[Trial], space: SearchSpace, config: TpeConfig,
                rng: np.random.Generator) -> ParamAssignment:
    """
    Propose the next assignment with the Tree-structured Parzen Estimator.

    History is sorted by loss (stable, so earlier trials win ties); the best
    ceil(gamma_quantile * n) trials are "good" and the rest "bad".  For each
    dimension a Parzen estimator l is fitted to the good values and g to the
    bad ones; n_candidates assignments are drawn from l and the one with the
    largest sum over dimensions of log l(x) - log g(x) is returned.  Below
    two trials the surrogate is not defined and a prior draw is returned.

    :param history: evaluated trials
    :param space: SearchSpace
    :param config: TpeConfig
    :param rng: numpy Generator owned by the caller
    :return: ParamAssignment within the space's support
    """
    if len(history) < 2:
        logger.warning("TPE history has %s trial(s); drawing from the prior", len(history))
        return sample(space, rng)

    ordered = sorted(history, key=lambda trial: trial.loss)
    n_good = ceil(config.gamma_quantile * len(ordered))
    good, bad = ordered[:n_good], ordered[n_good:]

    columns: Dict[str, List[Any]] = {}
    scores = np.zeros(config.n_candidates)
    for name, dist in space.dimensions.items():
        below = _estimator(dist, [trial.params[name] for trial in good], config)
        above = _estimator(dist, [trial.params[name] for trial in bad], config)
        candidates = below.draw(rng, config.n_candidates)
        with np.errstate(invalid="ignore"):
            scores += below.log_pdf(candidates) - above.log_pdf(candidates)
        columns[name] = candidates

    scores = np.where(np.isnan(scores), -np.inf, scores)
    best = int(np.argmax(scores))
    logger.debug("TPE picked candidate %s of %s (score %.4f) from %s good / %s bad trials",
                 best, config.n_candidates, scores[best], len(good), len(bad))
    return space.assignment({name: values[best] for name, values in columns.items()})


def smbo(ctx: Objective, config: Optional[TpeConfig] = None, seed: int = 0) -> TuneResult:
    """
    Sequential model-based optimization: the first n_startup trials are
    prior draws, every later trial is tpe_suggest over the full history.

    :param ctx: objective
    :param config: TpeConfig, defaults when omitted
    :param seed: integer seed
    :return: TuneResult
    """
    if config is None:
        config = TpeConfig()
    logger.info("SMBO: %s trials (%s warmup), seed %s", config.n_trials, config.n_startup, seed)
    start = perf_counter()
    rng = np.random.default_rng(seed)
    trials: List[Trial] = []
    for index in range(config.n_trials):
        if index < config.n_startup:
            params = sample(ctx.param_space, rng)
        else:
            params = tpe_suggest(trials, ctx.param_space, config, rng)
        trials.append(ctx.evaluate(params, index))
    return TuneResult(method=TPE, trials=trials, elapsed_seconds=perf_counter() - start,
                      fold_plan=_fold_plan_of(ctx))


def randomized_hyperopt(dataset: Dataset,
                        rate: float,
                        space: Optional[SearchSpace] = None,
                        config: Optional[TpeConfig] = None,
                        k: int = 3,
                        seed: int = 0,
                        overrides: Optional[Mapping[str, Any]] = None,
                        full_fold_plan: Optional[FoldPlan] = None,
                        reevaluate: bool = True) -> TuneResult:
    # pylint: disable=too-many-arguments
    """
    Randomized-Hyperopt: draw a stratified sample of the rows at the given
    rate, build a K-fold plan on the sample only and run smbo on it.  The
    best assignment is then scored once on a full-data K-fold plan; that
    re-evaluation is timed separately from elapsed_seconds.

    :param dataset: Dataset
    :param rate: sampling rate in (0, 1]
    :param space: SearchSpace, default_space() when omitted
    :param config: TpeConfig
    :param k: fold count
    :param seed: seed for sampling, folds and SMBO
    :param overrides: fixed learner settings
    :param full_fold_plan: full-data plan to re-evaluate on (built with the
        seed when omitted)
    :param reevaluate: set False to skip the full-data re-evaluation
    :raises:
        InvalidArgumentError: if rate is outside (0, 1]
        StratificationError: if the sample can't support K folds
    :return: TuneResult with sample_rate and full_data_mean_gini set
    """
    start = perf_counter()
    sample_rows = stratified_sample(dataset, rate, seed)
    ctx = ObjectiveContext.build(dataset, sample_rows, k=k, seed=seed,
                                 param_space=space, overrides=overrides)
    logger.info("Randomized-Hyperopt on %s: %s of %s rows at rate %s", dataset.name,
                sample_rows.size, dataset.n_rows, rate)
    searched = smbo(ctx, config, seed)
    elapsed = perf_counter() - start

    full_gini, full_seconds = None, None
    if reevaluate:
        if full_fold_plan is None:
            full_fold_plan = stratified_kfold(dataset, k, seed)
        full_ctx = ObjectiveContext(dataset, full_fold_plan.rows, full_fold_plan,
                                    ctx.param_space, overrides, seed)
        reevaluation = full_ctx.evaluate(searched.best_params, searched.best_index)
        full_gini, full_seconds = reevaluation.mean_gini, reevaluation.wall_seconds
        logger.info("Randomized-Hyperopt best params on full %s: mean gini %.4f "
                    "(sample %.4f)", dataset.name, full_gini, searched.best_mean_gini)

    return TuneResult(method=RANDOMIZED, trials=searched.trials, elapsed_seconds=elapsed,
                      sample_rate=rate, full_data_mean_gini=full_gini,
                      full_data_seconds=full_seconds, fold_plan=ctx.fold_plan,
                      full_data_fold_plan=full_fold_plan if reevaluate else None)


def trials_to_records(result: TuneResult) -> List[Dict[str, Any]]:
    """
    Flatten a run's trials for JSON output.

    :param result: TuneResult
    :return: list of dicts with index, params, fold_ginis, mean_gini, loss
        and wall_seconds
    """
    return result.records


def tune(ctx: ObjectiveContext, method: str, budget: Optional[int] = None, seed: int = 0,
         grid: Optional[Sequence[Mapping[str, Any]]] = None,
         config: Optional[TpeConfig] = None, n_jobs: int = 1) -> TuneResult:
    # pylint: disable=too-many-arguments
    """
    Dispatch to grid_search, random_search or smbo by method label.

    :param ctx: objective
    :param method: "grid", "random" or "tpe"
    :param budget: trial budget for random/tpe
    :param seed: integer seed
    :param grid: grid points for "grid"
    :param config: TpeConfig for "tpe"
    :param n_jobs: concurrent trial evaluations for grid/random
    :raises:
        InvalidArgumentError: on an unknown method
    :return: TuneResult
    """
    if method == GRID:
        return grid_search(ctx, grid or [], n_jobs=n_jobs)
    if method == RANDOM:
        n_trials = DEFAULT_RANDOM_TRIALS if budget is None else budget
        return random_search(ctx, n_trials, seed, n_jobs=n_jobs)
    if method == TPE:
        if config is None:
            config = make_tpe_config() if budget is None else make_tpe_config(n_trials=budget)
        return smbo(ctx, config, seed)
    raise InvalidArgumentError(f"Unknown tuning method {method!r}")
