"""Multi-scenario GA with adaptive weights and mode-based bus convergence."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .ga import GAConfig, GARun, run_ga
from .objective import BALANCED, CandidateSolution, ObjectiveBreakdown, Problem, WeightVector

BASE_LABELS = ("A", "B", "C")
PERTURBATION = 0.05


@dataclass(frozen=True)
class ScenarioResult:
    label: str
    weights: WeightVector
    bus: int
    p_dg: float  # kW
    cost: float  # USD
    p_loss: float  # kW
    vdi: float
    min_v: float  # p.u.
    f: float
    seed: int
    history: tuple[float, ...] = ()


@dataclass(frozen=True)
class FinalDesign:
    bus: int
    p_dg: float
    contributing: tuple[ScenarioResult, ...]
    breakdown: ObjectiveBreakdown  # scored under balanced weights
    converged: bool
    scenarios_run: int


def base_scenarios() -> tuple[WeightVector, WeightVector, WeightVector]:
    """Loss-priority, voltage-priority and techno-economic weight vectors."""
    return (
        WeightVector(0.80, 0.10, 0.10),
        WeightVector(0.10, 0.80, 0.10),
        WeightVector(0.40, 0.20, 0.40),
    )


def adaptive_weights(rng, magnitude: float = PERTURBATION) -> WeightVector:
    raw = np.full(3, 1.0 / 3.0) + rng.uniform(-magnitude, magnitude, size=3)
    return WeightVector.normalized(np.clip(raw, 0.0, None))


def scenario_seed(master_seed: int, index: int) -> int:
    """GA seed for scenario ``index`` (1-based); stable so runs can be replayed alone."""
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1)[0])


def _weights_rng(master_seed: int, index: int):
    return np.random.default_rng(np.random.SeedSequence([master_seed, index, 1]))


def scenario_label(index: int) -> str:
    return BASE_LABELS[index - 1] if index <= len(BASE_LABELS) else f"Adaptive-{index}"


def modal_bus(
    results: Sequence[ScenarioResult],
    score: Callable[[ScenarioResult], float] | None = None,
) -> tuple[int, int]:
    """Most frequent bus and its count.

    Equal counts are settled by the lowest mean ``score`` over each tied bus's
    results, then by bus id.
    """
    if not results:
        raise ValueError("no scenario results")
    counts = Counter(r.bus for r in results)
    top = max(counts.values())
    tied = sorted(b for b, c in counts.items() if c == top)
    if len(tied) > 1 and score is not None:

        def mean_score(bus):
            vals = [score(r) for r in results if r.bus == bus]
            return sum(vals) / len(vals)

        tied.sort(key=lambda b: (mean_score(b), b))
    return tied[0], top


def check_convergence(results, score=None) -> int | None:
    bus, count = modal_bus(results, score)
    return bus if count >= 2 else None


def _to_result(problem, label, weights, run: GARun) -> ScenarioResult:
    bd = problem.evaluate(run.best, weights)
    return ScenarioResult(
        label=label,
        weights=weights,
        bus=run.best.bus,
        p_dg=run.best.p_dg,
        cost=bd.cost,
        p_loss=bd.metrics.p_loss,
        vdi=bd.metrics.vdi,
        min_v=bd.metrics.min_v,
        f=bd.f,
        seed=run.seed,
        history=run.history,
    )


def run_multi_scenario(
    problem: Problem,
    ga_config: GAConfig = GAConfig(),
    s_max: int = 10,
    master_seed: int = 0,
    perturbation: float = PERTURBATION,
    optimizer: Callable[[GAConfig, Problem, WeightVector], GARun] = run_ga,
) -> tuple[FinalDesign, list[ScenarioResult]]:
    """Run scenarios A, B, C, then balanced adaptive ones, until some bus has
    been chosen twice or ``s_max`` scenarios have run.

    The final size is the plain mean of the sizes chosen at the winning bus.
    """
    if s_max < 3:
        raise ValueError("s_max must be >= 3")
    base = base_scenarios()

    def balanced_f(r):
        return problem.evaluate(CandidateSolution(r.bus, r.p_dg), BALANCED).f

    results: list[ScenarioResult] = []
    winner = None
    for s in range(1, s_max + 1):
        if s <= len(base):
            w = base[s - 1]
        else:
            w = adaptive_weights(_weights_rng(master_seed, s), perturbation)
        cfg = replace(ga_config, seed=scenario_seed(master_seed, s))
        results.append(_to_result(problem, scenario_label(s), w, optimizer(cfg, problem, w)))
        winner = check_convergence(results, balanced_f)
        if winner is not None:
            break

    converged = winner is not None
    if not converged:
        winner, _ = modal_bus(results, balanced_f)
    contributing = tuple(r for r in results if r.bus == winner)
    p_dg = float(np.mean([r.p_dg for r in contributing]))
    breakdown = problem.evaluate(CandidateSolution(winner, p_dg), BALANCED)
    final = FinalDesign(winner, p_dg, contributing, breakdown, converged, len(results))
    return final, results
