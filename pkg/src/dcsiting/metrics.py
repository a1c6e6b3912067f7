"""Technical indices and the voltage-limit penalty."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .powerflow import PowerFlowSolution

PENALTY_BASE = 1e6  # flat charge for any violation or non-convergence
PENALTY_SLOPE = 1e6  # per p.u. of summed limit violation


@dataclass(frozen=True)
class VoltageLimits:
    v_min: float = 0.90
    v_max: float = 1.05

    def __post_init__(self):
        if not 0 < self.v_min < self.v_max:
            raise ValueError("voltage limits must satisfy 0 < v_min < v_max")


@dataclass(frozen=True)
class MetricSet:
    p_loss: float  # kW
    vdi: float  # p.u.^2
    min_v: float  # p.u.
    penalty: float


def vdi(sol: PowerFlowSolution) -> float:
    """Sum of squared deviations from 1 p.u. over every bus (slack included)."""
    return float(np.sum((1.0 - sol.magnitudes) ** 2))


def voltage_penalty(sol: PowerFlowSolution, limits: VoltageLimits) -> float:
    mags = sol.magnitudes
    violation = np.maximum(0.0, np.maximum(limits.v_min - mags, mags - limits.v_max)).sum()
    if sol.converged and violation == 0:
        return 0.0
    return PENALTY_BASE + PENALTY_SLOPE * float(violation)


def collect_metrics(sol: PowerFlowSolution, limits: VoltageLimits) -> MetricSet:
    return MetricSet(
        p_loss=sol.total_loss,
        vdi=vdi(sol),
        min_v=float(sol.magnitudes.min()),
        penalty=voltage_penalty(sol, limits),
    )
