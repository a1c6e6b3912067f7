"""Command-line entry point: ``dcsiting {loadflow,optimize,scenario}``.

Exit codes: 0 ok, 1 configuration/input error, 2 load flow did not converge,
3 scenario loop exhausted without a repeated bus.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import report
from .config import ConfigError, RunConfig, load_config
from .economics import EconomicsError
from .ga import run_ga
from .network import NetworkError, apply_dg
from .objective import CandidateSolution, WeightVector
from .powerflow import solve
from .scenario import ScenarioResult, run_multi_scenario

log = logging.getLogger("dcsiting")

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_EXHAUSTED = 0, 1, 2, 3


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML key: value run configuration")
    p.add_argument("--builtin", choices=["ieee33"], help="use an embedded feeder")
    p.add_argument("--buses", help="buses.csv (bus,p_kw,q_kvar)")
    p.add_argument("--branches", help="branches.csv (from,to,r_ohm,x_ohm)")
    p.add_argument("--economics", help="economics.csv (bus,land_cost_usd)")
    p.add_argument("--seed", type=int, help="master RNG seed")
    p.add_argument("--out", help="output directory")
    p.add_argument("-v", "--verbose", action="store_true")


def _ga_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--population-size", type=int, dest="population_size")
    p.add_argument("--iterations", type=int)
    p.add_argument("--p-dg-max", type=float, dest="p_dg_max")


class _Parser(argparse.ArgumentParser):
    # usage errors share the config-error code; 2 is reserved for non-convergence
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dcsiting", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    lf = sub.add_parser("loadflow", help="solve the feeder, optionally with a DG injection")
    _common(lf)
    lf.add_argument("--dg-bus", type=int)
    lf.add_argument("--dg-kw", type=float)

    opt = sub.add_parser("optimize", help="one GA run under a given weight vector")
    _common(opt)
    _ga_flags(opt)
    opt.add_argument("--weights", required=True, help="w1,w2,w3 (normalised to sum 1)")

    sc = sub.add_parser("scenario", help="multi-scenario GA with adaptive convergence")
    _common(sc)
    _ga_flags(sc)
    sc.add_argument("--s-max", type=int, dest="s_max")
    return parser


def _resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {
        k: getattr(args, k, None)
        for k in ("builtin", "buses", "branches", "economics", "seed", "out",
                  "population_size", "iterations", "p_dg_max", "s_max")
    }
    return cfg.with_overrides(**overrides)


def _parse_weights(text: str) -> WeightVector:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"--weights: not a number list: {text!r}") from None
    if len(vals) != 3:
        raise ConfigError(f"--weights: expected 3 values, got {len(vals)}")
    try:
        return WeightVector.normalized(vals)
    except ValueError as exc:
        raise ConfigError(f"--weights: {exc}") from None


def cmd_loadflow(cfg: RunConfig, dg_bus=None, dg_kw=None) -> int:
    net = cfg.network()
    if (dg_bus is None) != (dg_kw is None):
        raise ConfigError("--dg-bus and --dg-kw must be given together")
    if dg_bus is not None:
        net = apply_dg(net, dg_bus, dg_kw)
    sol = solve(net, cfg.solver_settings())
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = report.loadflow_payload(sol, sum(b.net_p for b in net.buses))
    payload["dg"] = None if dg_bus is None else {"bus": dg_bus, "dg_kw": dg_kw}
    report.write_json(out / "loadflow.json", payload)
    report.write_voltage_profile(out / "voltage_profile.csv", sol)
    t = payload["totals"]
    print(f"loss {t['loss_kw']:.2f} kW  VDI {t['vdi']:.4f}  "
          f"min V {t['min_v_pu']:.4f} p.u. (bus {t['min_v_bus']})  "
          f"converged={sol.converged} in {sol.iterations} iterations")
    return EXIT_OK if sol.converged else EXIT_NONCONVERGED


def cmd_optimize(cfg: RunConfig, weights: WeightVector) -> int:
    problem = cfg.problem()
    run = run_ga(cfg.ga_config(), problem, weights)
    bd = run.best_breakdown
    m = bd.metrics
    result = ScenarioResult("optimize", weights, run.best.bus, run.best.p_dg, bd.cost,
                            m.p_loss, m.vdi, m.min_v, bd.f, run.seed, run.history)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    report.write_json(out / "scenario_result.json", {
        "result": report.result_payload(result),
        "breakdown": report.breakdown_payload(bd),
        "evaluations": run.evaluations,
    })
    report.write_convergence(out / "ga_convergence.csv", run.history)
    sol = solve(apply_dg(problem.net, run.best.bus, run.best.p_dg), problem.settings)
    report.write_voltage_profile(out / "voltage_profile.csv", sol)
    print(f"bus {run.best.bus}  DG {run.best.p_dg:.2f} kW  loss {m.p_loss:.2f} kW  "
          f"VDI {m.vdi:.4f}  min V {m.min_v:.4f}  cost {bd.cost:,.0f} USD  f {bd.f:.6f}")
    return EXIT_OK


def cmd_scenario(cfg: RunConfig) -> int:
    problem = cfg.problem()
    final, results = run_multi_scenario(
        problem, cfg.ga_config(), s_max=cfg.s_max, master_seed=cfg.seed,
        perturbation=cfg.perturbation,
    )
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = report.scenario_rows(problem, final, results)
    report.write_csv(out / "scenarios.csv", report.SCENARIO_COLUMNS, rows)
    report.write_json(out / "scenarios.json", {
        "master_seed": cfg.seed,
        "converged": final.converged,
        "columns": report.SCENARIO_COLUMNS,
        "rows": rows,
        "scenarios": [report.result_payload(r) for r in results],
    })
    report.write_json(out / "final_design.json", report.final_payload(final, problem))
    for r in results:
        report.write_convergence(out / f"ga_convergence_{r.label}.csv", r.history)
        sol = solve(apply_dg(problem.net, r.bus, r.p_dg), problem.settings)
        report.write_voltage_profile(out / f"voltage_profile_{r.label}.csv", sol)
    report.write_voltage_profile(out / "voltage_profile_Base.csv", solve(problem.net, problem.settings))
    sol = solve(apply_dg(problem.net, final.bus, final.p_dg), problem.settings)
    report.write_voltage_profile(out / "voltage_profile_Final.csv", sol)

    for row in rows:
        print(",".join(str(c) for c in row))
    status = "converged" if final.converged else "NOT converged"
    print(f"{status} after {final.scenarios_run} scenarios: bus {final.bus}, DG {final.p_dg:.2f} kW")
    return EXIT_OK if final.converged else EXIT_EXHAUSTED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _resolve_config(args)
        if args.command == "loadflow":
            return cmd_loadflow(cfg, args.dg_bus, args.dg_kw)
        if args.command == "optimize":
            return cmd_optimize(cfg, _parse_weights(args.weights))
        return cmd_scenario(cfg)
    except (ConfigError, NetworkError, EconomicsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
