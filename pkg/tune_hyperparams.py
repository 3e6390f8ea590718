"""
Main hyperparameter tuning script.

Subcommands:
  tune      tune the boosted tree learner on one CSV dataset with one method
  sweep     run Randomized-Hyperopt over several sampling rates and select one
  bench     compare grid, random, TPE and Randomized-Hyperopt per a JSON config
  describe  print the dataset description table

With "bench --parallel" each dataset runs in its own process; workers send
log records through a multiprocessing queue to a dedicated root logging
process.
"""
import logging
from argparse import ArgumentParser
from json import dump as json_dump
from logging.handlers import QueueHandler as LoggingQueueHandler
from multiprocessing import (Queue as MpQueue,
                             Process as MpProcess)
from os import environ
from sys import (exit as sys_exit,
                 stdout as sys_stdout,
                 stderr as sys_stderr)
from time import perf_counter
from traceback import print_exc
from pydantic import ValidationError
from helpers import (HpoError,
                     BenchConfigError,
                     SpaceDefinitionError,
                     InvalidArgumentError,
                     DataLoadError,
                     StratificationError,
                     DatasetSpec,
                     BenchReport,
                     BenchRow,
                     ObjectiveContext,
                     default_space,
                     load_space,
                     load_dataset,
                     load_bench_config,
                     make_bench_config,
                     describe_dataset,
                     grid_points,
                     make_tpe_config,
                     tune,
                     randomized_hyperopt,
                     trials_to_records,
                     rate_sweep,
                     select_best_rate,
                     result_row,
                     run_method_comparison,
                     emit_report,
                     to_hyperparams,
                     train,
                     dump_model,
                     TOOL_VERSION,
                     DEFAULT_EPSILON,
                     REPORT_FORMATS,
                     default_rates,
                     RANDOMIZED)


# Initial logging configuration.  This logger will be used for any logs
# generated in this script.
logger = logging.getLogger(__name__)

# Log level from the environment; --log-level overrides it (and is written
# back to the environment so worker processes pick it up).
LOGLEVEL_ENV = "HPO_LOGLEVEL"
LOG_FORMAT = '%(asctime)s %(processName)-10s %(name)s %(levelname)-8s %(message)s'

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


def global_loglevel():
    """
    :return: log level name from the environment, INFO by default
    """
    return environ.get(LOGLEVEL_ENV, "INFO").upper()


def configure_root_logging():
    """
    Initialize the root logger: one stdout handler with the shared format.
    Existing handlers are replaced so a forked listener doesn't print every
    record twice.

    :return: None
    """
    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
    handler = logging.StreamHandler(sys_stdout)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root_logger.addHandler(handler)
    root_logger.setLevel(global_loglevel())


def configure_worker_logging(msg_queue):
    """
    Each worker process is passed a reference to this function and will invoke
    to initialize the logger to send messages via the multiprocessing queue.
    This allows child loggers to send to the main (root) logging process
    without fear of locking issues.

    :param msg_queue: multiprocessing message queue used for log messages
    :return: None
    """
    worker_logger = logging.getLogger()
    for handler in worker_logger.handlers[:]:
        worker_logger.removeHandler(handler)
    worker_logger.addHandler(LoggingQueueHandler(msg_queue))
    worker_logger.setLevel(global_loglevel())


def root_logging_process(msg_queue, configurator):
    """
    This function is spawned into a separate process and acts as the root log
    listener.  Child processes send messages via logging.handler.QueueHandler
    through a multiprocessing message queue, which are then received by this
    logger.

    :param msg_queue: multiprocessing.Queue object to which this logger will
        attach and listen for incoming messages.
    :param configurator: Reference to the root log configuration function to
        be executed before listening for incoming messages.
    :return: None
    """
    # pylint: disable=loop-try-except-usage
    configurator()
    root_listener = logging.getLogger

    # A "None" message ends the loop and with it the listener process.
    while True:
        try:
            log_record = msg_queue.get()
            if log_record is None:
                break
            root_logger = root_listener(log_record.name)
            root_logger.handle(log_record)
        except Exception:  # pylint: disable=broad-except
            print("Problem with root logger", file=sys_stderr)
            print_exc(file=sys_stderr)


class UsageArgumentParser(ArgumentParser):
    """
    ArgumentParser exiting with the usage error code (1) instead of 2, which
    is reserved for data errors.
    """
    def error(self, message):
        self.print_usage(sys_stderr)
        print(f"{self.prog}: error: {message}", file=sys_stderr)
        sys_exit(EXIT_USAGE)


def _split_list(value):
    return [item.strip() for item in value.split(",") if item.strip()] if value else []


def _rates(value):
    return [float(rate) for rate in _split_list(value)]


def add_data_arguments(parser):
    """
    Dataset and schema flags shared by tune, sweep and describe.

    :param parser: argparse (sub)parser
    :return: None
    """
    parser.add_argument("--data", dest="data", required=True, help="CSV dataset path")
    parser.add_argument("--target", dest="target", help="Target column name")
    parser.add_argument("--preset", dest="preset", choices=["banknote", "transfusion"],
                        help="Schema preset replacing --target/--positive")
    parser.add_argument("--categorical", dest="categorical", default="",
                        help="Comma separated categorical feature columns")
    parser.add_argument("--missing", dest="missing", default=None,
                        help="Comma separated missing-value tokens.  Default: '',?,NA")
    parser.add_argument("--positive", dest="positive", default=None,
                        help="Target value of the positive class.  Default: 1")
    parser.add_argument("--label", dest="label", default=None,
                        help="Dataset label used in reports.  Default: file name")


def add_run_arguments(parser):
    """
    Flags shared by tune and sweep.

    :param parser: argparse (sub)parser
    :return: None
    """
    parser.add_argument("--trials", dest="trials", type=int, default=None,
                        help="Trial budget.  Default: 10 (random), 25 (tpe/randomized)")
    parser.add_argument("--folds", dest="folds", type=int, default=3,
                        help="Stratified K-fold count.  Default: 3")
    parser.add_argument("--seed", dest="seed", type=int, default=0, help="Seed.  Default: 0")
    parser.add_argument("--space", dest="space", default=None,
                        help="JSON search space file.  Default: built-in learner space")
    parser.add_argument("--out", dest="out", default=None, help="Report output path")
    parser.add_argument("--format", dest="format", choices=REPORT_FORMATS, default="csv",
                        help="Report format.  Default: csv")


def build_parser():
    """
    :return: the script's argument parser
    """
    parser = UsageArgumentParser(description="Hyperparameter tuning for a boosted tree "
                                             "classifier")
    parser.add_argument("--log-level", dest="log_level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help=f"Log level.  Default: ${LOGLEVEL_ENV} or INFO")
    subparsers = parser.add_subparsers(dest="command", required=True)

    tune_parser = subparsers.add_parser("tune", help="Tune on one dataset with one method")
    add_data_arguments(tune_parser)
    add_run_arguments(tune_parser)
    tune_parser.add_argument("--method", dest="method", required=True,
                             choices=["grid", "random", "tpe", "randomized"])
    tune_parser.add_argument("--rate", dest="rate", type=float, default=0.2,
                             help="Randomized-Hyperopt sampling rate.  Default: 0.2")
    tune_parser.add_argument("--grid-resolution", dest="grid_resolution", type=int, default=2,
                             help="Grid points per continuous dimension.  Default: 2")
    tune_parser.add_argument("--grid-max-points", dest="grid_max_points", type=int,
                             default=500, help="Grid size cap.  Default: 500")
    tune_parser.add_argument("--jobs", dest="jobs", type=int, default=1,
                             help="Concurrent trials for grid/random.  Default: 1")
    tune_parser.add_argument("--trials-out", dest="trials_out", default=None,
                             help="Write per-trial records to this JSON file")
    tune_parser.add_argument("--model-out", dest="model_out", default=None,
                             help="Train on all rows with the best params and write the "
                                  "model JSON here")

    sweep_parser = subparsers.add_parser("sweep", help="Randomized-Hyperopt rate sweep")
    add_data_arguments(sweep_parser)
    add_run_arguments(sweep_parser)
    sweep_parser.add_argument("--rates", dest="rates", type=_rates,
                              default=list(default_rates),
                              help="Comma separated sampling rates.  Default: 0.1,0.2,0.25,0.5")
    sweep_parser.add_argument("--epsilon", dest="epsilon", type=float, default=DEFAULT_EPSILON,
                              help="Rate selection slack.  Default: 0.002")
    sweep_parser.add_argument("--full-data", dest="full_data", default=False,
                              action="store_true",
                              help="Re-evaluate each rate's best params on the full data")

    bench_parser = subparsers.add_parser("bench", help="Four-method comparison")
    bench_parser.add_argument("--config", dest="config", required=True,
                              help="BenchConfig JSON file")
    bench_parser.add_argument("--parallel", dest="parallel", default=None,
                              action="store_true", help="One process per dataset")
    bench_parser.add_argument("--out", dest="out", default=None,
                              help="Report output path (overrides the config)")
    bench_parser.add_argument("--format", dest="format", choices=REPORT_FORMATS, default=None,
                              help="Report format (overrides the config)")
    bench_parser.add_argument("--metadata-out", dest="metadata_out", default=None,
                              help="Write the report metadata to this JSON file")

    describe_parser = subparsers.add_parser("describe", help="Dataset description table")
    add_data_arguments(describe_parser)
    return parser


def dataset_spec(args):
    """
    :param args: parsed arguments
    :raises:
        BenchConfigError: if the schema flags are inconsistent
    :return: DatasetSpec from the data flags
    """
    fields = {"path": args.data,
              "target": args.target,
              "categorical": _split_list(args.categorical),
              "positive_label": args.positive,
              "label": args.label,
              "preset": args.preset}
    if args.missing is not None:
        fields["missing_tokens"] = args.missing.split(",")
    try:
        return DatasetSpec(**fields)
    except ValidationError as err:
        raise BenchConfigError(f"Invalid dataset options: {err}") from err


def write_report(report, report_format, path):
    """
    Emit the report to path, or log its rows when no path is given.

    :return: None
    """
    if path:
        emit_report(report, report_format, path)
        return
    for row in report.rows:
        logger.info("%s %s rate=%s mean_gini=%.4f time=%.2fs", row.dataset, row.method,
                    row.rate, row.mean_gini, row.time_seconds)


def run_tune(args):
    """
    "tune" subcommand.

    :param args: parsed arguments
    :return: exit code
    """
    dataset = load_dataset(dataset_spec(args))
    space = load_space(args.space) if args.space else default_space()
    if args.method == RANDOMIZED:
        config = make_tpe_config() if args.trials is None else make_tpe_config(n_trials=args.trials)
        result = randomized_hyperopt(dataset, args.rate, space=space, config=config,
                                     k=args.folds, seed=args.seed)
    else:
        ctx = ObjectiveContext.build(dataset, k=args.folds, seed=args.seed, param_space=space)
        grid = None
        if args.method == "grid":
            grid = grid_points(space, args.grid_resolution, max_points=args.grid_max_points)
        result = tune(ctx, args.method, budget=args.trials, seed=args.seed, grid=grid,
                      n_jobs=args.jobs)

    logger.info("Best %s params on %s: %s (mean gini %.4f, %s trials, %.2fs)", args.method,
                dataset.name, result.best_params.dict, result.best_mean_gini,
                len(result.trials), result.elapsed_seconds)

    report = BenchReport(rows=[result_row(dataset.name, result)],
                         metadata={"tool_version": TOOL_VERSION, "seed": args.seed,
                                   "K": args.folds, "trials": len(result.trials)})
    write_report(report, args.format, args.out)

    if args.trials_out:
        with open(args.trials_out, "w", encoding="utf-8") as trials_file:
            json_dump(trials_to_records(result), trials_file, indent=2)
        logger.info("Wrote %s trial records to %s", len(result.trials), args.trials_out)

    if args.model_out:
        model = train(dataset, range(dataset.n_rows),
                      to_hyperparams(result.best_params, seed=args.seed))
        dump_model(model, args.model_out)
    return EXIT_OK


def run_sweep(args):
    """
    "sweep" subcommand.

    :param args: parsed arguments
    :return: exit code
    """
    dataset = load_dataset(dataset_spec(args))
    space = load_space(args.space) if args.space else default_space()
    config = make_tpe_config() if args.trials is None else make_tpe_config(n_trials=args.trials)
    sweep = rate_sweep(dataset, args.rates, space=space, config=config, seed=args.seed,
                       k=args.folds, full_data=args.full_data)
    selected = select_best_rate(sweep, args.epsilon)
    logger.info("Selected rate %s for %s (epsilon %s)", selected, dataset.name, args.epsilon)

    rows = [BenchRow(dataset=dataset.name, method=RANDOMIZED, rate=row.rate,
                     mean_gini=row.mean_gini, time_seconds=row.time_seconds,
                     full_data_gini=row.full_data_gini) for row in sweep]
    report = BenchReport(rows=rows, metadata={"tool_version": TOOL_VERSION, "seed": args.seed,
                                              "K": args.folds, "selected_rate": selected,
                                              "epsilon": args.epsilon})
    write_report(report, args.format, args.out)
    return EXIT_OK


def run_bench(args):
    """
    "bench" subcommand.

    :param args: parsed arguments
    :return: exit code (2 when every dataset failed)
    """
    config = load_bench_config(args.config)
    updates = {field: value for field, value in (("parallel", args.parallel),
                                                 ("output", args.out),
                                                 ("format", args.format))
               if value is not None}
    if updates:
        config = make_bench_config(**{**config.dict(), **updates})
    if not config.datasets:
        raise BenchConfigError(f"{args.config}: no datasets configured")

    if config.parallel:
        queue = MpQueue(-1)
        log_listener = MpProcess(target=root_logging_process,
                                 args=(queue, configure_root_logging))
        log_listener.start()
        try:
            report = run_method_comparison(config.datasets, config, message_queue=queue,
                                           log_configurer=configure_worker_logging)
        finally:
            queue.put_nowait(None)
            log_listener.join()
    else:
        report = run_method_comparison(config.datasets, config)

    write_report(report, config.format, config.output)
    if args.metadata_out:
        with open(args.metadata_out, "w", encoding="utf-8") as metadata_file:
            metadata_file.write(report.metadata_json)
    if report.metadata["errors"] and not report.rows:
        logger.error("Every dataset failed: %s", report.metadata["errors"])
        return EXIT_DATA
    return EXIT_OK


def run_describe(args):
    """
    "describe" subcommand: print the dataset description table.

    :param args: parsed arguments
    :return: exit code
    """
    summary = describe_dataset(load_dataset(dataset_spec(args)))
    print("| dataset | attributes | features | observations | positive | negative "
          "| positive_rate | missing |")
    print("|---|---|---|---|---|---|---|---|")
    print(f"| {summary.label} | {summary.n_attributes} | {summary.n_features} "
          f"| {summary.n_observations} | {summary.n_positive} | {summary.n_negative} "
          f"| {summary.positive_rate:.4f} | {summary.n_missing} |")
    return EXIT_OK


command_mapping = {
    "tune": run_tune,
    "sweep": run_sweep,
    "bench": run_bench,
    "describe": run_describe,
}


def main(argv=None):
    """
    Parse arguments, run the subcommand and map errors to exit codes:
    0 success, 1 usage/configuration error, 2 data error, 3 runtime error.

    :param argv: argument list (defaults to sys.argv)
    :return: exit code
    """
    start_time = perf_counter()
    script_args = build_parser().parse_args(argv)
    if script_args.log_level:
        environ[LOGLEVEL_ENV] = script_args.log_level
    configure_root_logging()

    try:
        exit_code = command_mapping[script_args.command](script_args)
    except (BenchConfigError, SpaceDefinitionError, InvalidArgumentError) as err:
        logger.error("Usage error: %s", err)
        exit_code = EXIT_USAGE
    except (DataLoadError, StratificationError) as err:
        logger.error("Data error: %s", err)
        exit_code = EXIT_DATA
    except HpoError as err:
        logger.error("Runtime error: %s", err)
        exit_code = EXIT_RUNTIME
    except Exception as err:  # pylint: disable=broad-except
        logger.error("Caught unhandled exception: %s", err)
        exit_code = EXIT_RUNTIME

    logger.debug("--- SCRIPT RUN TIME: %.2fs ---", perf_counter() - start_time)
    return exit_code


if __name__ == "__main__":
    sys_exit(main())
