"""How often does one GA run match or beat the coarse-grid optimum?

Runs the GA for a block of seeds under each base weight vector and reports the
hit rate against tests/data/grid_optima.json. Operator settings can be varied
from the command line to compare configurations.

    python scripts/seed_sweep.py --seeds 0:20 --mutation-rate 0.1 --neighbour-rate 0
"""

import argparse
import json
import time
from pathlib import Path

from dcsiting.economics import default_land_costs
from dcsiting.ga import GAConfig, run_ga
from dcsiting.network import builtin_ieee33
from dcsiting.objective import Problem, WeightVector

GRID_FILE = Path(__file__).resolve().parents[1] / "tests" / "data" / "grid_optima.json"


def main():
    d = GAConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", default="0:20", help="start:stop")
    ap.add_argument("--mutation-rate", type=float, default=d.mutation_rate)
    ap.add_argument("--neighbour-rate", type=float, default=d.neighbour_rate)
    ap.add_argument("--tournament-size", type=int, default=d.tournament_size)
    ap.add_argument("--elite-count", type=int, default=d.elite_count)
    args = ap.parse_args()

    start, stop = (int(x) for x in args.seeds.split(":"))
    grid = json.loads(GRID_FILE.read_text())
    problem = Problem(builtin_ieee33(), default_land_costs(grid["land_seed"]))
    t0 = time.perf_counter()
    for label, opt in grid["optima"].items():
        w = WeightVector(*opt["weights"])
        hits, picks = 0, {}
        for seed in range(start, stop):
            cfg = GAConfig(seed=seed, mutation_rate=args.mutation_rate,
                           neighbour_rate=args.neighbour_rate,
                           tournament_size=args.tournament_size, elite_count=args.elite_count)
            run = run_ga(cfg, problem, w)
            hits += run.best_breakdown.f <= opt["f"]
            picks[run.best.bus] = picks.get(run.best.bus, 0) + 1
        print(f"{label}: {hits}/{stop - start} at or below grid f {opt['f']:.6f} "
              f"(grid bus {opt['bus']}); buses picked {dict(sorted(picks.items()))}")
    print(f"elapsed {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
