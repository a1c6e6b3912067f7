"""Report and plot-data writers.

kW values carry 2 decimals, p.u. values and VDI 4, USD whole numbers.
The only run-dependent field is ``generated_at`` in JSON files.
"""

from __future__ import annotations

import cmath
import csv
import json
import math
from datetime import datetime, timezone
from pathlib import Path

from .objective import ObjectiveBreakdown, Problem
from .metrics import vdi
from .powerflow import PowerFlowSolution, min_voltage, solve
from .scenario import FinalDesign, ScenarioResult

TIMESTAMP_KEY = "generated_at"

SCENARIO_COLUMNS = [
    "label", "w1", "w2", "w3", "bus", "dg_kw", "investment_usd",
    "loss_kw", "vdi", "min_v", "converged",
]


def kw(x):
    return round(float(x), 2)


def pu(x):
    return round(float(x), 4)


def usd(x):
    return int(round(float(x)))


def write_json(path, payload: dict) -> None:
    body = {TIMESTAMP_KEY: datetime.now(timezone.utc).isoformat(timespec="seconds")}
    body.update(payload)
    Path(path).write_text(json.dumps(body, indent=2) + "\n", encoding="utf-8")


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def loadflow_payload(sol: PowerFlowSolution, net_load_kw: float) -> dict:
    bus, vmin = min_voltage(sol)
    return {
        "converged": sol.converged,
        "iterations": sol.iterations,
        "max_mismatch_pu": sol.max_mismatch,
        "totals": {
            "loss_kw": kw(sol.total_loss),
            "vdi": pu(vdi(sol)),
            "min_v_pu": pu(vmin),
            "min_v_bus": bus,
            "slack_p_kw": kw(sol.slack_power.real),
            "slack_q_kvar": kw(sol.slack_power.imag),
            "net_load_kw": kw(net_load_kw),
        },
        "buses": [
            {"bus": b, "v_pu": pu(abs(v)), "angle_deg": round(math.degrees(cmath.phase(v)), 4)}
            for b, v in zip(sol.bus_ids, sol.voltages)
        ],
        "branches": [
            {"from": f, "to": t, "current_pu": round(abs(i), 6), "loss_kw": kw(loss)}
            for (f, t), i, loss in zip(sol.branch_ends, sol.branch_currents, sol.branch_losses)
        ],
    }


def write_voltage_profile(path, sol: PowerFlowSolution) -> None:
    write_csv(path, ["bus", "v_pu"], [[b, pu(m)] for b, m in zip(sol.bus_ids, sol.magnitudes)])


def write_convergence(path, history) -> None:
    write_csv(path, ["generation", "best_f"], [[g, round(f, 8)] for g, f in enumerate(history)])


def breakdown_payload(bd: ObjectiveBreakdown) -> dict:
    return {
        "weights": list(bd.weights.as_tuple()),
        "f": round(bd.f, 8),
        "loss_term": round(bd.loss_term, 8),
        "vdi_term": round(bd.vdi_term, 8),
        "cost_term": round(bd.cost_term, 8),
        "penalty": bd.penalty,
        "loss_kw": kw(bd.metrics.p_loss),
        "vdi": pu(bd.metrics.vdi),
        "min_v": pu(bd.metrics.min_v),
        "investment_usd": usd(bd.cost),
    }


def result_payload(r: ScenarioResult) -> dict:
    return {
        "label": r.label,
        "weights": list(r.weights.as_tuple()),
        "seed": r.seed,
        "bus": r.bus,
        "dg_kw": kw(r.p_dg),
        "dg_kw_exact": r.p_dg,
        "investment_usd": usd(r.cost),
        "loss_kw": kw(r.p_loss),
        "vdi": pu(r.vdi),
        "min_v": pu(r.min_v),
        "f": round(r.f, 8),
    }


def _row(label, weights, bus, p_dg, cost, loss, v, min_v, converged):
    w = ["", "", ""] if weights is None else [round(x, 6) for x in weights.as_tuple()]
    return [label, *w, "" if bus is None else bus, kw(p_dg), usd(cost), kw(loss), pu(v), pu(min_v), converged]


def scenario_rows(problem: Problem, final: FinalDesign, results) -> list[list]:
    base = problem.baselines
    rows = [_row("Base", None, None, 0.0, 0.0, base.p_loss_0, base.vdi_0, base_min_v(problem), final.converged)]
    for r in results:
        rows.append(_row(r.label, r.weights, r.bus, r.p_dg, r.cost, r.p_loss, r.vdi, r.min_v, final.converged))
    m = final.breakdown.metrics
    rows.append(_row("Final", None, final.bus, final.p_dg, final.breakdown.cost, m.p_loss, m.vdi, m.min_v, final.converged))
    return rows


def base_min_v(problem: Problem) -> float:
    return float(solve(problem.net, problem.settings).magnitudes.min())


def final_payload(final: FinalDesign, problem: Problem) -> dict:
    base = problem.baselines
    m = final.breakdown.metrics
    return {
        "converged": final.converged,
        "scenarios_run": final.scenarios_run,
        "bus": final.bus,
        "dg_kw": kw(final.p_dg),
        "dg_kw_exact": final.p_dg,
        "contributing": [r.label for r in final.contributing],
        "breakdown": breakdown_payload(final.breakdown),
        "base_case": {
            "loss_kw": kw(base.p_loss_0),
            "vdi": pu(base.vdi_0),
            "min_v": pu(base_min_v(problem)),
        },
        "loss_reduction_pct": round(100.0 * (1.0 - m.p_loss / base.p_loss_0), 2),
    }
