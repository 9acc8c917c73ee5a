"""End-to-end DE runs on analytic objectives."""

import numpy as np
import pytest

from devqe.bench import sphere
from devqe.de import (
    Bounds,
    DEConfig,
    ObjectiveError,
    TerminationCriteria,
    de_minimize,
)


def test_quadratic_reference_run():
    # f(x) = x^2 on [-1, 1], Np = 30, 200 generations
    config = DEConfig(
        np_size=30,
        seed=0,
        termination=TerminationCriteria(max_generations=200),
    )
    result = de_minimize(lambda x: float(x[0] ** 2), Bounds.box(-1, 1, 1), config)
    assert abs(result.best_vector[0]) < 1e-3
    assert result.generations == 200
    assert result.evaluations == 30 * 201


def test_constant_objective():
    config = DEConfig(
        np_size=10, seed=1, termination=TerminationCriteria(max_generations=5)
    )
    result = de_minimize(lambda x: 4.25, Bounds.box(0, 1, 3), config)
    assert result.best_fitness == 4.25


def test_non_finite_maps_to_inf():
    def objective(x):
        return np.nan if x[0] > 0 else float(x[0] ** 2)

    config = DEConfig(
        np_size=12, seed=2, termination=TerminationCriteria(max_generations=40)
    )
    result = de_minimize(objective, Bounds.box(-1, 1, 1), config)
    assert np.isfinite(result.best_fitness)
    assert result.best_vector[0] <= 0


def test_objective_exception_aborts_with_partial_trace():
    calls = {"n": 0}

    def objective(x):
        calls["n"] += 1
        if calls["n"] > 25:
            raise RuntimeError("boom")
        return float(np.sum(x**2))

    config = DEConfig(
        np_size=10, seed=3, termination=TerminationCriteria(max_generations=50)
    )
    with pytest.raises(ObjectiveError) as excinfo:
        de_minimize(objective, Bounds.box(-1, 1, 2), config)
    partial = excinfo.value.partial
    assert partial.stop_reason == "aborted"
    assert partial.evaluations == 26
    assert len(partial.trace.events) >= 1


def test_best_so_far_monotone_and_counts_exact():
    calls = {"n": 0}

    def objective(x):
        calls["n"] += 1
        return float(np.sum(np.asarray(x) ** 2))

    config = DEConfig(
        np_size=16,
        seed=4,
        strategy="best1",
        termination=TerminationCriteria(max_generations=30),
    )
    result = de_minimize(objective, Bounds.box(-3, 3, 3), config)
    assert result.evaluations == calls["n"]
    best_series = [ev.e_sa for ev in result.trace.events]
    assert all(b <= a + 1e-15 for a, b in zip(best_series, best_series[1:]))
    cum = [ev.cum_evals for ev in result.trace.events]
    assert cum == sorted(cum)


def test_identical_seed_config_bitwise_identical():
    config = DEConfig(
        np_size=14,
        seed=123,
        strategy="current_to_pbest1",
        crossover="exponential",
        termination=TerminationCriteria(max_generations=25),
    )
    r1 = de_minimize(sphere, Bounds.box(-5, 5, 4), config)
    r2 = de_minimize(sphere, Bounds.box(-5, 5, 4), config)
    assert r1.best_vector.tobytes() == r2.best_vector.tobytes()
    assert r1.best_fitness == r2.best_fitness
    assert r1.evaluations == r2.evaluations
    assert [e.e_sa for e in r1.trace.events] == [e.e_sa for e in r2.trace.events]


@pytest.mark.parametrize("strategy", ["rand1", "rand2", "best1", "best2",
                                      "current_to_rand1", "current_to_best1",
                                      "current_to_pbest1", "rand_to_best1"])
@pytest.mark.parametrize("crossover", ["binomial", "exponential"])
def test_every_variant_improves_sphere(strategy, crossover):
    config = DEConfig(
        np_size=20,
        seed=7,
        strategy=strategy,
        crossover=crossover,
        termination=TerminationCriteria(max_generations=60),
    )
    result = de_minimize(sphere, Bounds.box(-5, 5, 3), config)
    start = result.trace.events[0].e_sa
    assert result.best_fitness < start
    assert result.best_fitness < 1.0


def test_members_respect_bounds_every_generation():
    seen = []

    def objective(x):
        seen.append(np.array(x))
        return float(np.sum(x**2))

    config = DEConfig(
        np_size=10,
        seed=8,
        boundary="toroidal",
        termination=TerminationCriteria(max_generations=20),
    )
    bounds = Bounds.box(-0.5, 0.5, 2)
    de_minimize(objective, bounds, config)
    for x in seen:
        assert bounds.contains(x)


def test_stop_reason_max_evals_exact_budget():
    config = DEConfig(
        np_size=20, seed=9, termination=TerminationCriteria(max_evals=200)
    )
    result = de_minimize(sphere, Bounds.box(-5, 5, 5), config)
    assert result.stop_reason == "max_evals"
    assert result.evaluations == 200
