"""Exhaustive coarse-grid optimum of the objective on the 33-bus case.

Scores every (bus, p_dg) on buses 2..33 x {0, 100, ..., 3600} kW for the three
base weight vectors and writes the minimisers to tests/data/grid_optima.json.
The GA is expected to match or beat these values.

    python scripts/grid_oracle.py [--land-seed 0] [--out tests/data/grid_optima.json]
"""

import argparse
import json
from pathlib import Path

from dcsiting.economics import default_land_costs
from dcsiting.network import builtin_ieee33
from dcsiting.objective import CandidateSolution, Problem
from dcsiting.scenario import BASE_LABELS, base_scenarios

GRID_STEP = 100.0
GRID_MAX = 3600.0


def grid_points(problem):
    n = int(GRID_MAX / GRID_STEP) + 1
    return [CandidateSolution(b, k * GRID_STEP) for b in problem.candidates for k in range(n)]


def grid_optima(problem):
    points = grid_points(problem)
    out = {}
    for label, w in zip(BASE_LABELS, base_scenarios()):
        best = None
        for cand in points:
            f = problem.evaluate(cand, w).f
            if best is None or f < best[0]:
                best = (f, cand)
        out[label] = {"weights": list(w.as_tuple()), "bus": best[1].bus, "p_dg": best[1].p_dg, "f": best[0]}
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--land-seed", type=int, default=0)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests/data/grid_optima.json"))
    args = ap.parse_args()

    problem = Problem(builtin_ieee33(), default_land_costs(args.land_seed))
    optima = grid_optima(problem)
    payload = {
        "land_seed": args.land_seed,
        "grid": {"buses": list(problem.candidates), "step_kw": GRID_STEP, "max_kw": GRID_MAX},
        "points": len(grid_points(problem)),
        "optima": optima,
    }
    Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    for label, o in optima.items():
        print(f"{label}: bus {o['bus']}  p_dg {o['p_dg']:.0f} kW  f {o['f']:.10f}")


if __name__ == "__main__":
    main()
