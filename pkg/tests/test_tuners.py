from statistics import median
import numpy as np
import pytest
from pydantic import ValidationError
from helpers import (FunctionObjective,
                     ObjectiveContext,
                     ParamAssignment,
                     SearchSpace,
                     Trial,
                     TuneResult,
                     Uniform,
                     LogUniform,
                     QUniform,
                     QLogUniform,
                     Normal,
                     QNormal,
                     LogNormal,
                     QLogNormal,
                     Choice,
                     DatasetSpec,
                     load_dataset,
                     make_tpe_config,
                     grid_search,
                     random_search,
                     tpe_suggest,
                     smbo,
                     randomized_hyperopt,
                     trials_to_records,
                     tune,
                     grid_points,
                     sample,
                     stratified_sample,
                     train,
                     make_hyperparams,
                     InvalidArgumentError)
from conftest import make_blobs

UNIT = SearchSpace({"x": Uniform(lo=0, hi=1)})


def _quadratic(params):
    return (params["x"] - 0.7) ** 2


def _trial(params, loss, index):
    return Trial(params=ParamAssignment(params), fold_ginis=(-loss,), wall_seconds=0.0,
                 index=index)


def test_grid_search_evaluates_every_point_in_order():
    space = SearchSpace({"a": QUniform(lo=0, hi=1, q=1), "b": Choice(options=("p", "q", "r"))})
    grid = grid_points(space, 1)
    result = grid_search(FunctionObjective(space, lambda params: params["a"]), grid)
    assert len(result.trials) == 6
    assert [trial.params for trial in result.trials] == grid
    assert [trial.index for trial in result.trials] == list(range(6))
    assert result.best_params == grid[0]


def test_grid_search_single_point():
    grid = [ParamAssignment({"x": 0.3})]
    result = grid_search(FunctionObjective(UNIT, _quadratic), grid)
    assert result.best_params == grid[0]
    assert result.best_mean_gini == pytest.approx(-0.16)


def test_grid_search_ties_go_to_earliest_point():
    grid = grid_points(UNIT, 5)
    result = grid_search(FunctionObjective(UNIT, lambda params: 1.0), grid)
    assert result.best_index == 0


def test_grid_search_rejects_empty_grid():
    with pytest.raises(InvalidArgumentError):
        grid_search(FunctionObjective(UNIT, _quadratic), [])


def test_random_search_single_trial_is_first_draw():
    result = random_search(FunctionObjective(UNIT, _quadratic), n_trials=1, seed=42)
    assert result.trials[0].params == sample(UNIT, np.random.default_rng(42))


def test_random_search_is_reproducible():
    objective = FunctionObjective(UNIT, _quadratic)
    first = random_search(objective, n_trials=10, seed=3)
    second = random_search(objective, n_trials=10, seed=3)
    assert [trial.params for trial in first.trials] == [trial.params for trial in second.trials]
    assert first.best_mean_gini == max(trial.mean_gini for trial in first.trials)


def test_random_search_default_budget():
    assert len(random_search(FunctionObjective(UNIT, _quadratic)).trials) == 10


def test_random_search_rejects_zero_budget():
    with pytest.raises(InvalidArgumentError):
        random_search(FunctionObjective(UNIT, _quadratic), n_trials=0)


def test_threaded_random_search_matches_serial(small_dataset, small_space):
    ctx = ObjectiveContext.build(small_dataset, k=3, seed=0, param_space=small_space)
    serial = random_search(ctx, n_trials=4, seed=1)
    threaded = random_search(ctx, n_trials=4, seed=1, n_jobs=2)
    assert [trial.params for trial in serial.trials] == [trial.params for trial in threaded.trials]
    assert [trial.fold_ginis for trial in serial.trials] == \
        [trial.fold_ginis for trial in threaded.trials]


def test_smbo_within_warmup_equals_random_search():
    objective = FunctionObjective(UNIT, _quadratic)
    config = make_tpe_config(n_trials=6, n_startup=10)
    assert config.n_startup == 6
    tpe = smbo(objective, config, seed=5)
    rand = random_search(objective, n_trials=6, seed=5)
    assert [trial.params for trial in tpe.trials] == [trial.params for trial in rand.trials]


def test_smbo_runs_its_budget():
    result = smbo(FunctionObjective(UNIT, _quadratic), make_tpe_config(n_trials=15), seed=0)
    assert [trial.index for trial in result.trials] == list(range(15))
    assert result.best_mean_gini == max(trial.mean_gini for trial in result.trials)
    assert result.method == "tpe"


def test_tpe_prefers_region_of_good_trials():
    good = [0.18, 0.2, 0.22, 0.19]
    bad = [0.75, 0.78, 0.8, 0.82, 0.85, 0.79, 0.81, 0.77, 0.83, 0.76, 0.84, 0.8]
    history = [_trial({"x": x}, 0.0, index) for index, x in enumerate(good)]
    history += [_trial({"x": x}, 1.0, index + len(good)) for index, x in enumerate(bad)]
    config = make_tpe_config()
    for seed in range(5):
        suggestion = tpe_suggest(history, UNIT, config, np.random.default_rng(seed))
        assert abs(suggestion["x"] - 0.2) < abs(suggestion["x"] - 0.8)


def test_tpe_prefers_good_category():
    space = SearchSpace({"c": Choice(options=("a", "b", "c"))})
    history = [_trial({"c": "a"}, 0.0, 0), _trial({"c": "a"}, 0.0, 1)]
    history += [_trial({"c": label}, 1.0, index + 2)
                for index, label in enumerate(["b", "c", "b", "c", "b", "c"])]
    suggestion = tpe_suggest(history, space, make_tpe_config(), np.random.default_rng(0))
    assert suggestion["c"] == "a"


def test_tpe_single_trial_falls_back_to_prior():
    history = [_trial({"x": 0.5}, 0.0, 0)]
    suggestion = tpe_suggest(history, UNIT, make_tpe_config(), np.random.default_rng(5))
    assert suggestion == sample(UNIT, np.random.default_rng(5))


def test_tpe_suggestions_stay_in_support():
    space = SearchSpace({"u": Uniform(lo=-1, hi=1),
                         "lu": LogUniform(lo=1e-3, hi=1),
                         "qu": QUniform(lo=2, hi=10, q=2),
                         "qlu": QLogUniform(lo=1, hi=64, q=4),
                         "n": Normal(mu=0, sigma=2),
                         "qn": QNormal(mu=5, sigma=3, q=1),
                         "ln": LogNormal(mu=0, sigma=1),
                         "qln": QLogNormal(mu=0, sigma=1, q=0.5),
                         "c": Choice(options=("x", "y"))})
    rng = np.random.default_rng(11)
    history = [_trial(sample(space, rng), float(rng.uniform()), index) for index in range(15)]
    config = make_tpe_config()
    for seed in range(10):
        suggestion = tpe_suggest(history, space, config, np.random.default_rng(seed))
        assert space.contains(suggestion)


@pytest.mark.slow
def test_tpe_beats_random_on_quadratic():
    objective = FunctionObjective(UNIT, _quadratic)
    config = make_tpe_config(n_trials=50)
    tpe_best, random_best, hits = [], [], 0
    for seed in range(20):
        tpe = smbo(objective, config, seed=seed)
        rand = random_search(objective, n_trials=50, seed=seed)
        hits += abs(tpe.best_params["x"] - 0.7) <= 0.05
        tpe_best.append(-tpe.best_mean_gini)
        random_best.append(-rand.best_mean_gini)
    assert hits >= 15
    assert median(tpe_best) <= median(random_best)


@pytest.mark.parametrize("fields", [{"gamma_quantile": 0}, {"gamma_quantile": 1},
                                    {"n_trials": 0}, {"n_candidates": 0},
                                    {"kde_bandwidth_floor": 0}, {"bogus": 1}])
def test_tpe_config_validation(fields):
    with pytest.raises(InvalidArgumentError):
        make_tpe_config(**fields)


def test_tune_result_requires_trials():
    with pytest.raises(ValidationError):
        TuneResult(method="grid", trials=(), elapsed_seconds=1.0)


def test_trials_to_records():
    result = random_search(FunctionObjective(UNIT, _quadratic), n_trials=3, seed=0)
    records = trials_to_records(result)
    assert [record["index"] for record in records] == [0, 1, 2]
    assert set(records[0]) == {"index", "params", "fold_ginis", "mean_gini", "loss",
                               "wall_seconds"}


def test_tune_dispatch():
    objective = FunctionObjective(UNIT, _quadratic)
    assert tune(objective, "random", budget=4).method == "random"
    assert len(tune(objective, "tpe", budget=4).trials) == 4
    assert len(tune(objective, "grid", grid=grid_points(UNIT, 3)).trials) == 3
    with pytest.raises(InvalidArgumentError):
        tune(objective, "anneal")


@pytest.mark.parametrize("method", ["random", "tpe"])
def test_tune_rejects_zero_budget(method):
    with pytest.raises(InvalidArgumentError):
        tune(FunctionObjective(UNIT, _quadratic), method, budget=0)


def test_tune_random_default_budget():
    assert len(tune(FunctionObjective(UNIT, _quadratic), "random").trials) == 10


def test_randomized_at_full_rate_equals_smbo(small_dataset, small_space):
    config = make_tpe_config(n_trials=6, n_startup=3)
    randomized = randomized_hyperopt(small_dataset, 1.0, space=small_space, config=config,
                                     seed=2, reevaluate=False)
    ctx = ObjectiveContext.build(small_dataset, k=3, seed=2, param_space=small_space)
    full = smbo(ctx, config, seed=2)
    assert [trial.params for trial in randomized.trials] == [trial.params for trial in full.trials]
    assert [trial.mean_gini for trial in randomized.trials] == \
        [trial.mean_gini for trial in full.trials]
    assert randomized.full_data_mean_gini is None


def test_randomized_stays_on_its_sample(small_dataset, small_space):
    rate, seed = 0.25, 3
    result = randomized_hyperopt(small_dataset, rate, space=small_space,
                                 config=make_tpe_config(n_trials=4, n_startup=2), seed=seed)
    sample_rows = stratified_sample(small_dataset, rate, seed)
    assert np.array_equal(result.fold_plan.rows, sample_rows)
    for train_rows, test_rows in result.fold_plan:
        assert np.isin(train_rows, sample_rows).all() and np.isin(test_rows, sample_rows).all()
        assert train_rows.size <= np.ceil(rate * small_dataset.n_rows)
    assert result.sample_rate == rate
    assert result.full_data_fold_plan.rows.size == small_dataset.n_rows
    assert result.full_data_mean_gini is not None
    assert result.full_data_seconds >= 0


def test_randomized_is_reproducible(small_dataset, small_space):
    config = make_tpe_config(n_trials=5, n_startup=2)
    first = randomized_hyperopt(small_dataset, 0.5, space=small_space, config=config, seed=8,
                                reevaluate=False)
    second = randomized_hyperopt(small_dataset, 0.5, space=small_space, config=config, seed=8,
                                 reevaluate=False)
    assert [trial.params for trial in first.trials] == [trial.params for trial in second.trials]
    assert first.best_mean_gini == second.best_mean_gini


def test_randomized_rejects_bad_rate(small_dataset):
    with pytest.raises(InvalidArgumentError):
        randomized_hyperopt(small_dataset, 0.0)


@pytest.mark.slow
def test_randomized_is_faster_on_large_data():
    dataset = make_blobs(10_000, 10_000, n_features=4, shift=1.5, seed=20)
    space = SearchSpace({"n_rounds": QUniform(lo=10, hi=30, q=10),
                         "max_depth": QUniform(lo=2, hi=4, q=1),
                         "eta": LogUniform(lo=0.05, hi=0.3)})
    train(dataset, np.arange(200), make_hyperparams(n_rounds=1))
    config = make_tpe_config(n_trials=25)
    faster, sample_trial_times, full_trial_times = 0, [], []
    for seed in range(5):
        randomized = randomized_hyperopt(dataset, 0.1, space=space, config=config, seed=seed,
                                         reevaluate=False)
        full = smbo(ObjectiveContext.build(dataset, k=3, seed=seed, param_space=space),
                    config, seed=seed)
        faster += randomized.elapsed_seconds < full.elapsed_seconds
        sample_trial_times.append(np.mean([trial.wall_seconds for trial in randomized.trials]))
        full_trial_times.append(np.mean([trial.wall_seconds for trial in full.trials]))
    assert faster >= 4
    assert median(sample_trial_times) < median(full_trial_times)


@pytest.mark.slow
def test_randomized_accuracy_on_banknote_shaped_data(banknote_like):
    result = randomized_hyperopt(banknote_like, 0.2, seed=0, reevaluate=False)
    assert result.best_mean_gini >= 0.95


@pytest.mark.slow
def test_randomized_accuracy_on_banknote(banknote_csv):
    dataset = load_dataset(DatasetSpec(path=str(banknote_csv), preset="banknote"))
    result = randomized_hyperopt(dataset, 0.2, seed=0, reevaluate=False)
    assert result.best_mean_gini >= 0.98


@pytest.mark.slow
def test_randomized_accuracy_on_transfusion(transfusion_csv):
    dataset = load_dataset(DatasetSpec(path=str(transfusion_csv), preset="transfusion"))
    result = randomized_hyperopt(dataset, 0.5, seed=0, reevaluate=False)
    assert result.best_mean_gini >= 0.25
