"""Weighted, normalised siting objective.

``f = w1 * P_loss / P_loss0 + w2 * VDI / VDI0 + w3 * C / C_max + penalty``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import economics
from .economics import EconomicData, investment_cost
from .metrics import MetricSet, VoltageLimits, collect_metrics, vdi
from .network import NetworkModel, apply_dg
from .powerflow import DEFAULT_SETTINGS, SolverSettings, solve

P_DG_MAX = 3609.0  # kW, 60 % of the 33-bus feeder's apparent load


@dataclass(frozen=True)
class WeightVector:
    w1: float
    w2: float
    w3: float

    def __post_init__(self):
        vals = self.as_tuple()
        if any(not math.isfinite(v) or v < 0 for v in vals):
            raise ValueError(f"weights must be finite and non-negative: {vals}")
        if abs(sum(vals) - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1: {vals}")

    @classmethod
    def normalized(cls, values) -> "WeightVector":
        vals = [float(v) for v in values]
        if len(vals) != 3:
            raise ValueError(f"expected 3 weights, got {len(vals)}")
        if any(not math.isfinite(v) or v < 0 for v in vals):
            raise ValueError(f"weights must be finite and non-negative: {vals}")
        total = sum(vals)
        if total <= 0:
            raise ValueError("weights must not all be zero")
        w1, w2 = vals[0] / total, vals[1] / total
        # last component absorbs rounding so the sum is 1 to the ulp
        return cls(w1, w2, max(0.0, 1.0 - w1 - w2))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.w1, self.w2, self.w3)


BALANCED = WeightVector.normalized((1, 1, 1))


@dataclass(frozen=True)
class CandidateSolution:
    bus: int
    p_dg: float  # kW


@dataclass(frozen=True)
class Baselines:
    p_loss_0: float  # kW
    vdi_0: float
    c_max: float  # USD

    def __post_init__(self):
        if not (self.p_loss_0 > 0 and self.vdi_0 > 0 and self.c_max > 0):
            raise ValueError(
                "baselines must be strictly positive "
                f"(p_loss_0={self.p_loss_0}, vdi_0={self.vdi_0}, c_max={self.c_max})"
            )


@dataclass(frozen=True)
class ObjectiveBreakdown:
    f: float
    loss_term: float
    vdi_term: float
    cost_term: float
    penalty: float
    metrics: MetricSet
    cost: float  # USD
    weights: WeightVector


def compute_baselines(
    net: NetworkModel,
    econ: EconomicData,
    p_dg_max: float = P_DG_MAX,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> Baselines:
    sol = solve(net, settings)
    return Baselines(sol.total_loss, vdi(sol), economics.c_max(econ, p_dg_max))


def evaluate(
    cand: CandidateSolution,
    w: WeightVector,
    base: Baselines,
    net: NetworkModel,
    econ: EconomicData,
    limits: VoltageLimits,
    settings: SolverSettings = DEFAULT_SETTINGS,
    bounds: tuple[float, float] | None = None,
) -> ObjectiveBreakdown:
    """Score one candidate. Voltage violations and non-convergence show up in
    ``penalty``; only structural problems (unknown bus, out-of-bounds size) raise."""
    if bounds is not None and not bounds[0] <= cand.p_dg <= bounds[1]:
        raise ValueError(f"p_dg={cand.p_dg} outside bounds {bounds}")
    cost = investment_cost(econ, cand.bus, cand.p_dg)
    sol = solve(apply_dg(net, cand.bus, cand.p_dg), settings)
    m = collect_metrics(sol, limits)
    loss_term = m.p_loss / base.p_loss_0
    vdi_term = m.vdi / base.vdi_0
    cost_term = cost / base.c_max
    f = w.w1 * loss_term + w.w2 * vdi_term + w.w3 * cost_term + m.penalty
    return ObjectiveBreakdown(f, loss_term, vdi_term, cost_term, m.penalty, m, cost, w)


@dataclass(frozen=True)
class Problem:
    """Everything needed to score candidates on one feeder."""

    net: NetworkModel
    econ: EconomicData
    limits: VoltageLimits = field(default_factory=VoltageLimits)
    p_dg_min: float = 0.0
    p_dg_max: float = P_DG_MAX
    settings: SolverSettings = DEFAULT_SETTINGS
    baselines: Baselines | None = None

    def __post_init__(self):
        if not 0 <= self.p_dg_min <= self.p_dg_max:
            raise ValueError("need 0 <= p_dg_min <= p_dg_max")
        missing = [b for b in self.candidates if b not in self.econ.land_cost]
        if missing:
            raise ValueError(f"no land cost for candidate buses {missing}")
        if self.baselines is None:
            object.__setattr__(
                self,
                "baselines",
                compute_baselines(self.net, self.econ, self.p_dg_max, self.settings),
            )

    @property
    def candidates(self) -> tuple[int, ...]:
        return self.net.candidate_buses

    @property
    def bounds(self) -> tuple[float, float]:
        return (self.p_dg_min, self.p_dg_max)

    def evaluate(self, cand: CandidateSolution, w: WeightVector) -> ObjectiveBreakdown:
        if cand.bus not in self.candidates:
            raise ValueError(f"bus {cand.bus} is not a candidate")
        return evaluate(
            cand, w, self.baselines, self.net, self.econ, self.limits, self.settings, self.bounds
        )
