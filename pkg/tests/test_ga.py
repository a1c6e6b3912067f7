import json
from collections import Counter
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dcsiting.ga import (
    GAConfig,
    crossover,
    feeder_neighbours,
    init_population,
    mutate,
    run_ga,
    select,
)
from dcsiting.objective import CandidateSolution, WeightVector

CANDS = tuple(range(2, 34))
BOUNDS = (0.0, 3609.0)
GRID = json.loads((Path(__file__).parent / "data" / "grid_optima.json").read_text())
A = WeightVector(0.8, 0.1, 0.1)


def test_config_validation():
    for bad in (
        dict(population_size=1),
        dict(elite_count=40),
        dict(mutation_rate=1.5),
        dict(tournament_size=1),
        dict(iterations=0),
    ):
        with pytest.raises(ValueError):
            GAConfig(**bad)


def test_init_population_deterministic():
    cfg = GAConfig(seed=11)
    assert init_population(cfg, CANDS, BOUNDS) == init_population(cfg, CANDS, BOUNDS)


def test_init_population_domain():
    pop = init_population(GAConfig(seed=3), CANDS, BOUNDS)
    assert len(pop) == 40
    assert all(ind.bus in CANDS and 0 <= ind.p_dg <= 3609 for ind in pop)


def test_init_population_degenerate_interval():
    pop = init_population(GAConfig(seed=3), CANDS, (500.0, 500.0))
    assert all(ind.p_dg == 500.0 for ind in pop)


def test_init_population_empty_candidates():
    with pytest.raises(ValueError):
        init_population(GAConfig(), (), BOUNDS)


def test_select_returns_global_best_when_drawn():
    pop = [CandidateSolution(b, 0.0) for b in range(2, 6)]
    fit = [3.0, 1.0, 2.0, 4.0]
    cfg = GAConfig(tournament_size=4, population_size=4, elite_count=0)
    assert select(pop, fit, cfg, np.random.default_rng(0)) == pop[1]


def test_select_two_members():
    pop = [CandidateSolution(2, 0.0), CandidateSolution(3, 0.0)]
    cfg = GAConfig(tournament_size=2, population_size=2, elite_count=0)
    rng = np.random.default_rng(0)
    assert all(select(pop, [5.0, 1.0], cfg, rng) == pop[1] for _ in range(50))


def test_select_uniform_on_ties():
    pop = [CandidateSolution(b, 0.0) for b in range(2, 7)]
    rng = np.random.default_rng(1)
    counts = Counter(select(pop, [1.0] * 5, GAConfig(), rng).bus for _ in range(5000))
    assert set(counts) == set(range(2, 7))
    assert max(counts.values()) - min(counts.values()) < 200


def test_crossover_identical_parents():
    p = CandidateSolution(9, 1234.5)
    rng = np.random.default_rng(0)
    for _ in range(100):
        assert crossover(p, p, GAConfig(crossover_rate=1.0), rng) == (p, p)


def test_crossover_no_op_rate_zero():
    a, b = CandidateSolution(3, 10.0), CandidateSolution(4, 20.0)
    assert crossover(a, b, GAConfig(crossover_rate=0.0), np.random.default_rng(0)) == (a, b)


def test_crossover_convex_and_bus_inherited():
    a, b = CandidateSolution(5, 1000.0), CandidateSolution(12, 2000.0)
    rng = np.random.default_rng(2)
    for _ in range(500):
        for c in crossover(a, b, GAConfig(crossover_rate=1.0), rng):
            assert 1000.0 <= c.p_dg <= 2000.0
            assert c.bus in (5, 12)


def test_mutate_rate_zero_identity():
    ind = CandidateSolution(7, 2229.0)
    rng = np.random.default_rng(0)
    cfg = GAConfig(mutation_rate=0.0)
    assert all(mutate(ind, cfg, rng, CANDS, BOUNDS) is ind for _ in range(100))


def test_mutate_rate_one_stays_feasible():
    rng = np.random.default_rng(0)
    cfg = GAConfig(mutation_rate=1.0)
    ind = CandidateSolution(2, 3600.0)
    for _ in range(2000):
        ind = mutate(ind, cfg, rng, CANDS, BOUNDS)
        assert 0.0 <= ind.p_dg <= 3609.0
        assert ind.bus in CANDS


def test_mutate_step_scale():
    rng = np.random.default_rng(0)
    cfg = GAConfig(mutation_rate=1.0)
    for _ in range(500):
        out = mutate(CandidateSolution(7, 1800.0), cfg, rng, CANDS, BOUNDS)
        assert abs(out.p_dg - 1800.0) <= 0.1 * 3609.0 + 1e-9


def test_feeder_neighbours(problem):
    nb = feeder_neighbours(problem)
    assert nb[2] == (3, 19)  # bus 1 is the slack, not a candidate
    assert nb[6] == (5, 7, 26)
    assert nb[18] == (17,)


def test_mutate_neighbour_only():
    nb = {7: (6, 8)}
    rng = np.random.default_rng(0)
    cfg = GAConfig(mutation_rate=1.0, neighbour_rate=1.0)
    buses = {mutate(CandidateSolution(7, 100.0), cfg, rng, CANDS, BOUNDS, nb).bus for _ in range(200)}
    assert buses == {6, 8}


def test_run_ga_deterministic(problem):
    cfg = GAConfig(seed=5, iterations=8)
    assert run_ga(cfg, problem, A) == run_ga(cfg, problem, A)


def test_run_ga_history(problem):
    run = run_ga(GAConfig(seed=1, iterations=12), problem, A)
    assert len(run.history) == 12
    assert all(b <= a for a, b in zip(run.history, run.history[1:]))
    assert run.history[-1] == run.best_breakdown.f
    assert run.best_breakdown == problem.evaluate(run.best, A)
    assert run.evaluations <= 40 * 12


def test_run_ga_feasibility_closure(problem):
    seen = []
    run_ga(GAConfig(seed=4, iterations=10), problem, A, lambda g, pop, fit: seen.append(pop))
    assert len(seen) == 10
    for pop in seen:
        assert len(pop) == 40
        assert all(ind.bus in CANDS and 0 <= ind.p_dg <= 3609 for ind in pop)


def test_frozen_grid_matches_recomputation(problem):
    import sys

    sys.path.insert(0, str(Path(__file__).parents[1] / "scripts"))
    from grid_oracle import grid_optima

    fresh = grid_optima(problem)
    for label, frozen in GRID["optima"].items():
        assert fresh[label]["bus"] == frozen["bus"]
        assert fresh[label]["p_dg"] == frozen["p_dg"]
        assert fresh[label]["f"] == pytest.approx(frozen["f"], rel=1e-12)


@pytest.mark.parametrize("label", ["A", "B", "C"])
def test_run_ga_beats_grid_seed0(problem, label):
    opt = GRID["optima"][label]
    run = run_ga(GAConfig(seed=0), problem, WeightVector(*opt["weights"]))
    assert run.best_breakdown.f <= opt["f"]
    assert run.best_breakdown.penalty == 0


@settings(max_examples=10, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    pop=st.integers(2, 8),
    iters=st.integers(1, 4),
    rates=st.tuples(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1)),
)
def test_ga_invariants_random_configs(problem, seed, pop, iters, rates):
    cfg = GAConfig(
        population_size=pop,
        iterations=iters,
        crossover_rate=rates[0],
        mutation_rate=rates[1],
        neighbour_rate=rates[2],
        elite_count=min(1, pop - 1),
        tournament_size=2,
        seed=seed,
    )
    gens = []
    run = run_ga(cfg, problem, A, lambda g, p, f: gens.append(p))
    assert len(run.history) == iters
    assert all(b <= a for a, b in zip(run.history, run.history[1:]))
    for p in gens:
        assert all(ind.bus in CANDS and 0 <= ind.p_dg <= 3609 for ind in p)
