"""Mixed integer/real genetic algorithm for DG siting and sizing.

Genome: an integer bus gene and a real DG-size gene. Tournament selection,
uniform crossover on the bus gene, blend crossover on the size gene, elitism.
Mutation moves the bus either to a feeder neighbour or to a uniformly drawn
candidate, and nudges the size by a bounded step.

The neighbour move matters: each bus has its own best size, so a bus jumped to
at random usually arrives with a poor size and is discarded, while adjacent
buses have similar best sizes and can be walked between.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .objective import CandidateSolution, ObjectiveBreakdown, Problem, WeightVector


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 40
    iterations: int = 30
    crossover_rate: float = 0.8
    mutation_rate: float = 0.3
    elite_count: int = 2
    tournament_size: int = 3
    seed: int = 0
    mutation_scale: float = 0.1  # fraction of the size range
    neighbour_rate: float = 0.5  # share of bus mutations that step to an adjacent bus

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0 <= self.elite_count < self.population_size:
            raise ValueError("elite_count must be in [0, population_size)")
        rates = (self.crossover_rate, self.mutation_rate, self.neighbour_rate)
        if not all(0 <= r <= 1 for r in rates):
            raise ValueError("rates must lie in [0, 1]")
        if self.tournament_size < 2:
            raise ValueError("tournament_size must be >= 2")


@dataclass(frozen=True)
class GARun:
    best: CandidateSolution
    best_breakdown: ObjectiveBreakdown
    history: tuple[float, ...]  # best f after each generation
    evaluations: int
    seed: int


def init_population(cfg: GAConfig, candidates: Sequence[int], bounds, rng=None):
    if not candidates:
        raise ValueError("candidate bus set is empty")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    lo, hi = bounds
    pop = []
    for _ in range(cfg.population_size):
        bus = int(candidates[rng.integers(len(candidates))])
        p = lo + rng.random() * (hi - lo)
        pop.append(CandidateSolution(bus, min(max(p, lo), hi)))
    return pop


def select(population, fitness, cfg: GAConfig, rng) -> CandidateSolution:
    """Tournament: lowest f among ``tournament_size`` uniformly drawn members."""
    n = len(population)
    k = min(cfg.tournament_size, n)
    contenders = rng.choice(n, size=k, replace=False)
    winner = min(contenders, key=lambda i: fitness[i])
    return population[winner]


def crossover(p1: CandidateSolution, p2: CandidateSolution, cfg: GAConfig, rng):
    if rng.random() >= cfg.crossover_rate:
        return p1, p2
    swap = rng.random() < 0.5
    alpha = rng.random()
    a, b = p1.p_dg, p2.p_dg
    lo, hi = min(a, b), max(a, b)
    # written as offsets so equal parents give bit-identical children
    x1 = min(max(b + alpha * (a - b), lo), hi)
    x2 = min(max(a + alpha * (b - a), lo), hi)
    b1, b2 = (p2.bus, p1.bus) if swap else (p1.bus, p2.bus)
    return CandidateSolution(b1, x1), CandidateSolution(b2, x2)


def feeder_neighbours(problem: Problem) -> dict[int, tuple[int, ...]]:
    """Candidate buses directly connected to each candidate bus."""
    cands = set(problem.candidates)
    adj = {b: set() for b in cands}
    for br in problem.net.branches:
        if br.from_bus in cands and br.to_bus in cands:
            adj[br.from_bus].add(br.to_bus)
            adj[br.to_bus].add(br.from_bus)
    return {b: tuple(sorted(v)) for b, v in adj.items()}


def mutate(
    ind: CandidateSolution, cfg: GAConfig, rng, candidates, bounds, neighbours=None
) -> CandidateSolution:
    lo, hi = bounds
    bus, p = ind.bus, ind.p_dg
    if rng.random() < cfg.mutation_rate:
        near = neighbours.get(bus, ()) if neighbours else ()
        if near and rng.random() < cfg.neighbour_rate:
            bus = int(near[rng.integers(len(near))])
        else:
            bus = int(candidates[rng.integers(len(candidates))])
    if rng.random() < cfg.mutation_rate:
        step = rng.uniform(-cfg.mutation_scale, cfg.mutation_scale) * (hi - lo)
        p = min(max(p + step, lo), hi)
    if bus == ind.bus and p == ind.p_dg:
        return ind
    return CandidateSolution(bus, p)


def run_ga(
    cfg: GAConfig,
    problem: Problem,
    weights: WeightVector,
    on_generation: Callable | None = None,
) -> GARun:
    """Minimise the objective for one weight vector.

    ``on_generation(gen, population, fitness)`` is called after each
    generation is scored.
    """
    rng = np.random.default_rng(cfg.seed)
    candidates = problem.candidates
    bounds = problem.bounds
    neighbours = feeder_neighbours(problem)
    cache: dict[tuple[int, float], ObjectiveBreakdown] = {}

    def score(ind):
        key = (ind.bus, ind.p_dg)
        if key not in cache:
            cache[key] = problem.evaluate(ind, weights)
        return cache[key]

    pop = init_population(cfg, candidates, bounds, rng)
    best, best_bd = None, None
    history = []
    for gen in range(cfg.iterations):
        fitness = [score(ind).f for ind in pop]
        ranked = sorted(range(len(pop)), key=fitness.__getitem__)
        if best is None or fitness[ranked[0]] < best_bd.f:
            best, best_bd = pop[ranked[0]], score(pop[ranked[0]])
        history.append(best_bd.f)
        if on_generation is not None:
            on_generation(gen, list(pop), list(fitness))
        if gen == cfg.iterations - 1:
            break

        nxt = [pop[i] for i in ranked[: cfg.elite_count]]
        while len(nxt) < cfg.population_size:
            c1, c2 = crossover(select(pop, fitness, cfg, rng), select(pop, fitness, cfg, rng), cfg, rng)
            nxt.append(mutate(c1, cfg, rng, candidates, bounds, neighbours))
            if len(nxt) < cfg.population_size:
                nxt.append(mutate(c2, cfg, rng, candidates, bounds, neighbours))
        pop = nxt

    return GARun(best, best_bd, tuple(history), len(cache), cfg.seed)
