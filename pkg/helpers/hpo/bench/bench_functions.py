"""
Benchmark runner: Randomized-Hyperopt rate sweeps, rate selection, the
four-method comparison on shared folds and report emission.
"""
from csv import (DictReader as CsvDictReader,
                 writer as csv_writer,
                 Error as CsvError)
from json import load as json_load, JSONDecodeError
from logging import getLogger
from multiprocessing import Manager as MpManager, Process as MpProcess
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
from pydantic import ValidationError
from ..data import Dataset, FoldPlan, load_csv, stratified_kfold
from ..exceptions import (BenchConfigError,
                          DataLoadError,
                          InvalidArgumentError,
                          StratificationError)
from ..objective import ObjectiveContext, default_space, evaluate_defaults
from ..spaces import SearchSpace, grid_points, load_space, space_to_json
from ..tuners import (TuneResult,
                      make_tpe_config,
                      grid_search,
                      random_search,
                      smbo,
                      randomized_hyperopt,
                      GRID,
                      RANDOM,
                      TPE,
                      RANDOMIZED,
                      DEFAULT)
from .bench_models import BenchConfig, BenchReport, BenchRow, DatasetSpec, SweepRow
from .bench_vars import (TOOL_VERSION,
                         DEFAULT_EPSILON,
                         report_header,
                         markdown_header,
                         GINI_FORMAT,
                         SECONDS_FORMAT)

logger = getLogger(__name__)


def make_bench_config(**fields) -> BenchConfig:
    """
    Build a BenchConfig, converting validation failures to the domain error.

    :param fields: BenchConfig fields
    :raises:
        BenchConfigError: if validation fails
    :return: BenchConfig
    """
    try:
        return BenchConfig(**fields)
    except ValidationError as err:
        raise BenchConfigError(f"Invalid benchmark configuration: {err}") from err


def load_bench_config(path) -> BenchConfig:
    """
    Read a BenchConfig from a JSON file.

    :param path: JSON file path
    :raises:
        BenchConfigError: if the file can't be read or fails validation
    :return: BenchConfig
    """
    try:
        with open(path, "r", encoding="utf-8") as config_file:
            fields = json_load(config_file)
    except (OSError, JSONDecodeError) as err:
        raise BenchConfigError(f"Unable to read benchmark config {path}: {err}") from err
    if not isinstance(fields, dict):
        raise BenchConfigError(f"{path}: benchmark config must be a JSON object")
    return make_bench_config(**fields)


def load_dataset(spec: DatasetSpec) -> Dataset:
    """
    :param spec: DatasetSpec
    :return: Dataset loaded with the DatasetSpec's schema
    """
    return load_csv(spec.path, spec.target, categorical=spec.categorical,
                    missing_tokens=spec.missing_tokens, positive_label=spec.positive_label,
                    name=spec.label)


def config_space(config: BenchConfig) -> SearchSpace:
    """
    :param config: BenchConfig
    :return: the space file named by the config, or default_space()
    """
    if config.space:
        return load_space(config.space)
    return default_space()


def _check_rates(rates: Sequence[float]) -> List[float]:
    rates = list(rates)
    if not rates:
        raise InvalidArgumentError("A rate sweep needs at least one rate")
    for rate in rates:
        if not 0.0 < rate <= 1.0:
            raise InvalidArgumentError(f"Sampling rate must be in (0, 1], got {rate!r}")
    return sorted(rates)


def rate_sweep(dataset: Dataset,
               rates: Sequence[float],
               space: Optional[SearchSpace] = None,
               config=None,
               seed: int = 0,
               k: int = 3,
               overrides: Optional[Dict[str, Any]] = None,
               full_data: bool = False) -> List[SweepRow]:
    # pylint: disable=too-many-arguments
    """
    Run randomized_hyperopt once per rate with the same seed and budget.

    :param dataset: Dataset
    :param rates: sampling rates in (0, 1]
    :param space: SearchSpace, default_space() when omitted
    :param config: TpeConfig
    :param seed: integer seed
    :param k: fold count
    :param overrides: fixed learner settings
    :param full_data: also re-evaluate each run's best params on full data
    :raises:
        InvalidArgumentError: on an empty rate list or a rate outside (0, 1]
    :return: one SweepRow per rate, ordered by rate ascending
    """
    rows = []
    for rate in _check_rates(rates):
        result = randomized_hyperopt(dataset, rate, space=space, config=config, k=k, seed=seed,
                                     overrides=overrides, reevaluate=full_data)
        rows.append(SweepRow(rate=rate, mean_gini=result.best_mean_gini,
                             time_seconds=result.elapsed_seconds,
                             full_data_gini=result.full_data_mean_gini))
        logger.info("Sweep %s at rate %s: mean gini %.4f in %.2fs", dataset.name, rate,
                    result.best_mean_gini, result.elapsed_seconds)
    return rows


def select_best_rate(rows: Sequence[SweepRow], epsilon: float = DEFAULT_EPSILON) -> float:
    """
    The smallest rate whose mean Gini is within epsilon of the best.

    :param rows: sweep rows
    :param epsilon: tolerated Gini shortfall (>= 0)
    :raises:
        InvalidArgumentError: on an empty sweep or a negative epsilon
    :return: selected rate
    """
    if not rows:
        raise InvalidArgumentError("Cannot select a rate from an empty sweep")
    if epsilon < 0:
        raise InvalidArgumentError(f"epsilon must be >= 0, got {epsilon}")
    best = max(row.mean_gini for row in rows)
    return min(row.rate for row in rows if row.mean_gini >= best - epsilon)


def default_grid(space: SearchSpace, config: BenchConfig):
    """
    :param space: SearchSpace
    :param config: BenchConfig (grid resolution and point cap)
    :return: grid points for grid search
    """
    return grid_points(space, config.budgets.grid_resolution,
                       max_points=config.budgets.grid_max_points)


def _as_result(trial, method: str, fold_plan: FoldPlan) -> TuneResult:
    return TuneResult(method=method, trials=[trial],
                      elapsed_seconds=max(trial.wall_seconds, 1e-9), fold_plan=fold_plan)


def compare_methods(dataset: Dataset,
                    config: BenchConfig,
                    rate: float,
                    space: Optional[SearchSpace] = None,
                    fold_plan: Optional[FoldPlan] = None) -> Dict[str, TuneResult]:
    """
    Run the configured methods on one dataset.  Every method shares one
    full-data FoldPlan built with the run seed; Randomized-Hyperopt searches
    on its sample's own plan and re-evaluates its best params on the shared
    one.

    :param dataset: Dataset
    :param config: BenchConfig
    :param rate: Randomized-Hyperopt sampling rate
    :param space: SearchSpace, from the config when omitted
    :param fold_plan: shared plan, built when omitted
    :return: dict of method label -> TuneResult, in config.methods order
    """
    if space is None:
        space = config_space(config)
    if fold_plan is None:
        fold_plan = stratified_kfold(dataset, config.folds, config.seed)
    ctx = ObjectiveContext(dataset, fold_plan.rows, fold_plan, space, config.overrides,
                           config.seed)

    results = {}
    for method in config.methods:
        logger.info("Running %s on %s", method, dataset.name)
        if method == GRID:
            results[method] = grid_search(ctx, default_grid(space, config), n_jobs=config.n_jobs)
        elif method == RANDOM:
            results[method] = random_search(ctx, config.budgets.random, config.seed,
                                            n_jobs=config.n_jobs)
        elif method == TPE:
            results[method] = smbo(ctx, make_tpe_config(n_trials=config.budgets.tpe),
                                   config.seed)
        elif method == RANDOMIZED:
            results[method] = randomized_hyperopt(
                dataset, rate, space=space,
                config=make_tpe_config(n_trials=config.budgets.randomized),
                k=config.folds, seed=config.seed, overrides=config.overrides,
                full_fold_plan=fold_plan)
        elif method == DEFAULT:
            results[method] = _as_result(evaluate_defaults(ctx), DEFAULT, fold_plan)
    return results


def result_row(label: str, result: TuneResult) -> BenchRow:
    """
    :param label: dataset label
    :param result: TuneResult
    :return: BenchRow of the result
    """
    return BenchRow(dataset=label, method=result.method, rate=result.sample_rate,
                    mean_gini=result.best_mean_gini, time_seconds=result.elapsed_seconds,
                    full_data_gini=result.full_data_mean_gini)


def _item_label(item: Union[Dataset, DatasetSpec]) -> str:
    if isinstance(item, Dataset):
        return item.name
    if item.label:
        return item.label
    return item.path.replace("\\", "/").rsplit("/", 1)[-1].rsplit(".", 1)[0]


def _compare_one(item: Union[Dataset, DatasetSpec], config: BenchConfig,
                 space: SearchSpace) -> Tuple[str, List[BenchRow], Dict[str, Any]]:
    """
    Load (if needed), pick the rate and compare methods on one dataset.  Data
    errors are returned in the metadata rather than raised.
    """
    label = _item_label(item)
    details: Dict[str, Any] = {}
    try:
        dataset = item if isinstance(item, Dataset) else load_dataset(item)
        label = dataset.name
        rate = None if isinstance(item, Dataset) else item.rate
        if rate is None and RANDOMIZED in config.methods:
            if len(config.rates) == 1:
                rate = config.rates[0]
            else:
                sweep = rate_sweep(dataset, config.rates, space=space,
                                   config=make_tpe_config(n_trials=config.budgets.randomized),
                                   seed=config.seed, k=config.folds,
                                   overrides=config.overrides)
                rate = select_best_rate(sweep, config.epsilon)
                details["sweep"] = [row.dict() for row in sweep]
        details["selected_rate"] = rate
        results = compare_methods(dataset, config, rate, space=space)
    except (DataLoadError, StratificationError) as err:
        logger.error("Skipping %s: %s", label, err)
        details["error"] = str(err)
        return label, [], details

    if RANDOMIZED in results:
        details["full_data"] = {"mean_gini": results[RANDOMIZED].full_data_mean_gini,
                                "seconds": results[RANDOMIZED].full_data_seconds}
    return label, [result_row(label, result) for result in results.values()], details


def _comparison_worker(position, item, config, space, shared_results, msg_queue=None,
                       log_configurer=None):
    # pylint: disable=too-many-arguments
    """
    Process target for dataset-level parallelism.  Results are returned
    through a Manager dict keyed by dataset position.
    """
    if log_configurer is not None and msg_queue is not None:
        log_configurer(msg_queue)
    try:
        label, rows, details = _compare_one(item, config, space)
    except Exception as err:  # pylint: disable=broad-except
        label = _item_label(item)
        logger.exception("Comparison on %s failed", label)
        shared_results[position] = (label, [], {"error": f"{type(err).__name__}: {err}"})
        return
    shared_results[position] = (label, [row.dict() for row in rows], details)


def run_method_comparison(datasets: Sequence[Union[Dataset, DatasetSpec]],
                          config: BenchConfig,
                          message_queue=None,
                          log_configurer=None) -> BenchReport:
    """
    Compare the configured methods on every dataset.  Randomized-Hyperopt
    uses the dataset spec's rate, the only configured rate, or the rate
    selected from a sweep over the configured rates.  A dataset that fails
    to load or split is skipped and its error recorded in the metadata.

    With config.parallel, each dataset runs in its own process (timings are
    then approximate); workers log through message_queue when given.  A worker
    that fails records the error class and message instead of its rows.

    :param datasets: Dataset objects or DatasetSpec entries
    :param config: BenchConfig
    :param message_queue: optional multiprocessing.Queue for worker logging
    :param log_configurer: function(queue) configuring a worker's logging
    :raises:
        BenchConfigError: if two datasets share a label
    :return: BenchReport with rows in dataset order, then method order
    """
    labels = [_item_label(item) for item in datasets]
    repeated = sorted({label for label in labels if labels.count(label) > 1})
    if repeated:
        raise BenchConfigError(f"Dataset labels must be unique, repeated: {repeated}")
    space = config_space(config)
    outcomes = []
    if config.parallel and len(datasets) > 1:
        with MpManager() as manager:
            shared_results = manager.dict()
            workers = []
            for position, item in enumerate(datasets):
                worker = MpProcess(target=_comparison_worker,
                                   name=f"dataset-{position}",
                                   kwargs={"position": position,
                                           "item": item,
                                           "config": config,
                                           "space": space,
                                           "shared_results": shared_results,
                                           "msg_queue": message_queue,
                                           "log_configurer": log_configurer})
                worker.start()
                workers.append(worker)
            for worker in workers:
                worker.join()
            for position, (item, worker) in enumerate(zip(datasets, workers)):
                if position not in shared_results:
                    label = _item_label(item)
                    logger.error("Worker for %s exited with code %s", label, worker.exitcode)
                    outcomes.append((label, [], {"error": f"worker process exited with "
                                                          f"code {worker.exitcode}"}))
                    continue
                label, rows, details = shared_results[position]
                outcomes.append((label, [BenchRow(**row) for row in rows], details))
    else:
        outcomes = [_compare_one(item, config, space) for item in datasets]

    rows = [row for _, dataset_rows, _ in outcomes for row in dataset_rows]
    metadata = {"tool_version": TOOL_VERSION,
                "seed": config.seed,
                "K": config.folds,
                "methods": list(config.methods),
                "budgets": config.budgets.dict(),
                "space": space_to_json(space),
                "parallel": config.parallel,
                "selected_rates": {label: details.get("selected_rate")
                                   for label, _, details in outcomes if "error" not in details},
                "errors": {label: details["error"]
                           for label, _, details in outcomes if "error" in details},
                "full_data": {label: details["full_data"]
                              for label, _, details in outcomes if "full_data" in details},
                "sweeps": {label: details["sweep"]
                           for label, _, details in outcomes if "sweep" in details}}
    return BenchReport(rows=rows, metadata=metadata)


def _format_rate(rate: Optional[float]) -> str:
    return "" if rate is None else f"{rate:g}"


def _format_row(row: BenchRow) -> List[str]:
    return [row.dataset, row.method, _format_rate(row.rate),
            GINI_FORMAT.format(row.mean_gini), SECONDS_FORMAT.format(row.time_seconds)]


def emit_report(report: BenchReport, report_format: str, path) -> None:
    """
    Write the report.  CSV has the header dataset,method,rate,mean_gini,
    time_seconds with rate blank for non-randomized methods; Gini is printed
    to 4 decimals and seconds to 2.  Markdown is the same table plus a
    full_data_gini column.

    :param report: BenchReport
    :param report_format: "csv" or "markdown"
    :param path: output path
    :raises:
        InvalidArgumentError: on an unknown format
        OSError: if the file can't be written
    """
    if report_format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as report_file:
            writer = csv_writer(report_file)
            writer.writerow(report_header)
            writer.writerows(_format_row(row) for row in report.rows)
    elif report_format == "markdown":
        lines = ["| " + " | ".join(markdown_header) + " |",
                 "|" + "---|" * len(markdown_header)]
        for row in report.rows:
            full_data = "" if row.full_data_gini is None \
                else GINI_FORMAT.format(row.full_data_gini)
            lines.append("| " + " | ".join(_format_row(row) + [full_data]) + " |")
        with open(path, "w", encoding="utf-8") as report_file:
            report_file.write("\n".join(lines) + "\n")
    else:
        raise InvalidArgumentError(f"Unknown report format {report_format!r}")
    logger.info("Wrote %s report with %s rows to %s", report_format, len(report.rows), path)


def read_report_csv(path) -> List[BenchRow]:
    """
    Parse a CSV report written by emit_report.

    :param path: CSV path
    :raises:
        DataLoadError: if the file can't be read or has the wrong header
    :return: list of BenchRow
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as report_file:
            reader = CsvDictReader(report_file)
            if tuple(reader.fieldnames or ()) != report_header:
                raise DataLoadError(f"{path}: unexpected report header {reader.fieldnames}")
            return [BenchRow(dataset=line["dataset"],
                             method=line["method"],
                             rate=float(line["rate"]) if line["rate"] else None,
                             mean_gini=float(line["mean_gini"]),
                             time_seconds=float(line["time_seconds"]))
                    for line in reader]
    except (OSError, CsvError, ValueError) as err:
        raise DataLoadError(f"Unable to read report {path}: {err}") from err
