"""Backward/forward sweep load flow for radial feeders."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .network import NetworkModel, orient_branches


@dataclass(frozen=True)
class SolverSettings:
    tolerance: float = 1e-6  # p.u., max voltage change between sweeps
    max_iterations: int = 100

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


DEFAULT_SETTINGS = SolverSettings()


@dataclass(frozen=True)
class PowerFlowSolution:
    bus_ids: tuple[int, ...]
    voltages: np.ndarray  # complex p.u., ordered as bus_ids
    branch_ends: tuple[tuple[int, int], ...]  # (from, to) as in net.branches
    branch_currents: np.ndarray  # complex p.u., positive in the from->to direction
    branch_losses: np.ndarray  # kW
    total_loss: float  # kW
    slack_power: complex  # kW + j kVAr drawn from the substation
    converged: bool
    iterations: int
    max_mismatch: float

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.voltages)

    def voltage(self, bus_id: int) -> complex:
        return complex(self.voltages[self.bus_ids.index(bus_id)])


@lru_cache(maxsize=64)
def _topology(branches, slack_bus, bus_ids):
    """Index arrays for the sweep, cached per feeder topology."""
    index = {b: i for i, b in enumerate(bus_ids)}
    order = orient_branches(bus_ids, branches, slack_bus)
    parents = [index[p] for p, _, _ in order.branches]
    children = [index[c] for _, c, _ in order.branches]
    branch_idx = [k for _, _, k in order.branches]
    # +1 when the stored branch direction matches the oriented direction
    sign = [1.0 if branches[k].from_bus == p else -1.0 for p, _, k in order.branches]
    return parents, children, branch_idx, sign, index[slack_bus]


def solve(net: NetworkModel, settings: SolverSettings = DEFAULT_SETTINGS) -> PowerFlowSolution:
    """Solve the feeder with constant-power loads from a flat start.

    Each iteration computes load currents from the present voltages, sums them
    leaves-to-root into branch currents, then walks root-to-leaves updating
    ``V_child = V_parent - Z * I``. Stops when the largest voltage change falls
    below ``settings.tolerance``; otherwise returns with ``converged=False``.
    """
    bus_ids = net.bus_ids
    parents, children, branch_idx, sign, root = _topology(net.branches, net.slack_bus, bus_ids)
    n = len(bus_ids)
    s_base_kw = net.base_MVA * 1000.0
    z_base = net.z_base
    s_load = [complex(b.net_p, b.q_load) / s_base_kw for b in net.buses]
    z = [complex(net.branches[k].r, net.branches[k].x) / z_base for k in branch_idx]
    nb = len(branch_idx)

    v = [1.0 + 0j] * n
    i_br = [0j] * nb
    mismatch = float("inf")
    converged = False
    it = 0
    for it in range(1, settings.max_iterations + 1):
        node = [(s / vi).conjugate() for s, vi in zip(s_load, v)]
        for k in range(nb - 1, -1, -1):
            i_br[k] = node[children[k]]
            node[parents[k]] += i_br[k]
        v_new = list(v)
        for k in range(nb):
            v_new[children[k]] = v_new[parents[k]] - z[k] * i_br[k]
        mismatch = max(abs(a - b) for a, b in zip(v_new, v))
        v = v_new
        if mismatch < settings.tolerance:
            converged = True
            break

    # branch currents consistent with the final voltages
    node = [(s / vi).conjugate() for s, vi in zip(s_load, v)]
    for k in range(nb - 1, -1, -1):
        i_br[k] = node[children[k]]
        node[parents[k]] += i_br[k]
    root_current = node[root]

    currents = np.zeros(nb, dtype=complex)
    losses = np.zeros(nb)
    for k in range(nb):
        currents[branch_idx[k]] = sign[k] * i_br[k]
        losses[branch_idx[k]] = z[k].real * abs(i_br[k]) ** 2 * s_base_kw
    slack_power = v[root] * root_current.conjugate() * s_base_kw

    return PowerFlowSolution(
        bus_ids=bus_ids,
        voltages=np.array(v, dtype=complex),
        branch_ends=tuple((b.from_bus, b.to_bus) for b in net.branches),
        branch_currents=currents,
        branch_losses=losses,
        total_loss=float(losses.sum()),
        slack_power=complex(slack_power),
        converged=converged,
        iterations=it,
        max_mismatch=float(mismatch),
    )


def min_voltage(sol: PowerFlowSolution) -> tuple[int, float]:
    """Bus with the lowest voltage magnitude; ties go to the lowest bus id."""
    mags = sol.magnitudes
    lowest = mags.min()
    bus = min(b for b, m in zip(sol.bus_ids, mags) if m == lowest)
    return bus, float(lowest)
