# pylint: disable=use-tuple-over-list
"""
Define public imports for the benchmark runner.
"""
from .bench_models import (DatasetSpec,
                           BenchBudgets,
                           BenchConfig,
                           SweepRow,
                           BenchRow,
                           BenchReport)

from .bench_functions import (make_bench_config,
                              load_bench_config,
                              load_dataset,
                              config_space,
                              rate_sweep,
                              select_best_rate,
                              default_grid,
                              compare_methods,
                              result_row,
                              run_method_comparison,
                              emit_report,
                              read_report_csv)

from .bench_vars import (TOOL_VERSION,
                         DEFAULT_EPSILON,
                         REPORT_FORMATS,
                         default_rates,
                         known_methods)

__all__ = ["DatasetSpec",
           "BenchBudgets",
           "BenchConfig",
           "SweepRow",
           "BenchRow",
           "BenchReport",
           "make_bench_config",
           "load_bench_config",
           "load_dataset",
           "config_space",
           "rate_sweep",
           "select_best_rate",
           "default_grid",
           "compare_methods",
           "result_row",
           "run_method_comparison",
           "emit_report",
           "read_report_csv",
           "TOOL_VERSION",
           "DEFAULT_EPSILON",
           "REPORT_FORMATS",
           "default_rates",
           "known_methods"]
