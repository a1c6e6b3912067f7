"""Run configuration: one flat YAML key-value file, overridden by CLI flags."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

import yaml

from .economics import UNIT_DG_COST, EconomicData, default_land_costs, load_economics
from .ga import GAConfig
from .metrics import VoltageLimits
from .network import NetworkModel, builtin_ieee33, load_network
from .objective import P_DG_MAX, Problem
from .powerflow import SolverSettings


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    builtin: str | None = "ieee33"
    buses: str | None = None
    branches: str | None = None
    economics: str | None = None
    land_seed: int = 0
    base_kv: float = 12.66
    base_mva: float = 10.0
    slack_bus: int = 1
    v_min: float = 0.90
    v_max: float = 1.05
    p_dg_min: float = 0.0
    p_dg_max: float = P_DG_MAX
    unit_dg_cost: float = UNIT_DG_COST
    tolerance: float = 1e-6
    max_iterations: int = 100
    population_size: int = 40
    iterations: int = 30
    crossover_rate: float = 0.8
    mutation_rate: float = 0.3
    neighbour_rate: float = 0.5
    elite_count: int = 2
    tournament_size: int = 3
    s_max: int = 10
    perturbation: float = 0.05
    seed: int = 0
    out: str = "out"

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        if "buses" in kw or "branches" in kw:
            kw.setdefault("builtin", None)
        return _coerce(replace(self, **kw))

    # --- builders -------------------------------------------------------

    def network(self) -> NetworkModel:
        if self.buses or self.branches:
            if not (self.buses and self.branches):
                raise ConfigError("both buses and branches files are required")
            return load_network(self.buses, self.branches, self.base_kv, self.base_mva, self.slack_bus)
        if self.builtin == "ieee33":
            return builtin_ieee33()
        raise ConfigError(f"unknown builtin network {self.builtin!r}")

    def economic_data(self) -> EconomicData:
        if self.economics:
            return load_economics(self.economics, self.unit_dg_cost)
        econ = default_land_costs(self.land_seed)
        return replace(econ, unit_dg_cost=self.unit_dg_cost)

    def limits(self) -> VoltageLimits:
        return VoltageLimits(self.v_min, self.v_max)

    def solver_settings(self) -> SolverSettings:
        return SolverSettings(self.tolerance, self.max_iterations)

    def ga_config(self) -> GAConfig:
        return GAConfig(
            population_size=self.population_size,
            iterations=self.iterations,
            crossover_rate=self.crossover_rate,
            mutation_rate=self.mutation_rate,
            neighbour_rate=self.neighbour_rate,
            elite_count=self.elite_count,
            tournament_size=self.tournament_size,
            seed=self.seed,
        )

    def problem(self) -> Problem:
        return Problem(
            self.network(),
            self.economic_data(),
            self.limits(),
            self.p_dg_min,
            self.p_dg_max,
            self.solver_settings(),
        )


_FIELDS = {f.name: f for f in fields(RunConfig)}
_PATH_KEYS = ("buses", "branches", "economics")


def _coerce(cfg: RunConfig) -> RunConfig:
    kinds = {"int": int, "float": float}
    out = {}
    for name, f in _FIELDS.items():
        val = getattr(cfg, name)
        kind = kinds.get(str(f.type))
        if kind is not None and val is not None:
            try:
                if kind is int and isinstance(val, float) and not val.is_integer():
                    raise ValueError
                val = kind(val)
            except (TypeError, ValueError):
                raise ConfigError(f"{name}: expected {f.type}, got {val!r}") from None
        out[name] = val
    if out["seed"] < 0 or out["land_seed"] < 0:
        raise ConfigError("seeds must be non-negative")
    return RunConfig(**out)


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"{path}: no such config file")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a key: value mapping")
    unknown = sorted(set(data) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"{path}: unknown keys {unknown}")
    for key in _PATH_KEYS:
        if data.get(key):
            p = Path(data[key])
            data[key] = str(p if p.is_absolute() else path.parent / p)
    return RunConfig().with_overrides(**data)
