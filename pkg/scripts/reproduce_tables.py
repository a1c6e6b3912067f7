"""Re-evaluate the published fixed designs on the 33-bus feeder.

Prints loss, VDI, minimum voltage and investment for the base case and for each
reported (bus, DG kW) pair next to the reference figures.

    python scripts/reproduce_tables.py [--land-seed 0]
"""

import argparse

from dcsiting.economics import default_land_costs, investment_cost
from dcsiting.metrics import VoltageLimits, collect_metrics
from dcsiting.network import apply_dg, builtin_ieee33
from dcsiting.powerflow import solve

# label, bus, kW, reference loss kW, VDI, min V, investment USD
REFERENCE = [
    ("Base", None, 0.0, 202.67, 0.1171, None, None),
    ("A", 7, 2229.0, 105.66, 0.0348, 0.9489, 2_686_542),
    ("B", 11, 2229.0, 139.74, 0.0166, 0.9489, 2_685_417),
    ("C", 15, 755.9, 137.82, 0.0566, 0.9284, 922_568),
    ("Final", 14, 1097.7, 129.37, 0.0409, 0.9333, 1_333_600),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--land-seed", type=int, default=0)
    args = ap.parse_args()

    net = builtin_ieee33()
    econ = default_land_costs(args.land_seed)
    limits = VoltageLimits()
    base_loss = None
    print(f"{'row':6} {'bus':>4} {'kW':>8} {'loss':>16} {'VDI':>16} {'min V':>16} {'USD':>20}")
    for label, bus, p, loss, v, vmin, usd in REFERENCE:
        case = net if bus is None else apply_dg(net, bus, p)
        m = collect_metrics(solve(case), limits)
        base_loss = base_loss or m.p_loss
        cost = "" if bus is None else f"{investment_cost(econ, bus, p):,.0f}"
        ref_v = "" if vmin is None else f"{vmin:.4f}"
        ref_usd = "" if usd is None else f"{usd:,}"
        print(f"{label:6} {bus or '':>4} {p:8.1f} "
              f"{m.p_loss:7.2f} ({loss:6.2f}) {m.vdi:7.4f} ({v:6.4f}) "
              f"{m.min_v:7.4f} ({ref_v:>6}) {cost:>9} ({ref_usd:>9})")
        if label == "Final":
            print(f"\nloss reduction vs base: {100 * (1 - m.p_loss / base_loss):.2f} %")
    print("Final investment at the unrounded mean 1097.65 kW: "
          f"{investment_cost(econ, 14, 1097.65):,.0f} USD")


if __name__ == "__main__":
    main()
