"""Radial feeder model, CSV ingestion and DG injection."""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path


class NetworkError(ValueError):
    """Raised when a feeder description is malformed or not radial."""


@dataclass(frozen=True)
class Bus:
    id: int
    p_load: float  # kW
    q_load: float  # kVAr
    p_gen: float = 0.0  # DG injection, kW (unity power factor)

    @property
    def net_p(self) -> float:
        return self.p_load - self.p_gen


@dataclass(frozen=True)
class Branch:
    from_bus: int
    to_bus: int
    r: float  # ohm
    x: float  # ohm


@dataclass(frozen=True)
class NetworkModel:
    buses: tuple[Bus, ...]
    branches: tuple[Branch, ...]
    base_kV: float
    base_MVA: float
    slack_bus: int = 1

    def __post_init__(self):
        object.__setattr__(self, "buses", tuple(self.buses))
        object.__setattr__(self, "branches", tuple(self.branches))
        validate(self)

    @property
    def z_base(self) -> float:
        return self.base_kV**2 / self.base_MVA

    @property
    def bus_ids(self) -> tuple[int, ...]:
        return tuple(b.id for b in self.buses)

    @property
    def candidate_buses(self) -> tuple[int, ...]:
        return tuple(sorted(b.id for b in self.buses if b.id != self.slack_bus))

    def bus(self, bus_id: int) -> Bus:
        for b in self.buses:
            if b.id == bus_id:
                return b
        raise NetworkError(f"unknown bus {bus_id}")

    @property
    def total_load(self) -> tuple[float, float]:
        return (sum(b.p_load for b in self.buses), sum(b.q_load for b in self.buses))


@dataclass(frozen=True)
class RadialOrder:
    """Branches oriented away from the root, listed breadth-first."""

    root: int
    branches: tuple[tuple[int, int, int], ...]  # (parent, child, index into net.branches)
    parent: dict

    def __len__(self):
        return len(self.branches)


def validate(net: NetworkModel) -> None:
    if not net.base_kV > 0 or not net.base_MVA > 0:
        raise NetworkError("base_kV and base_MVA must be positive")
    ids = [b.id for b in net.buses]
    if len(set(ids)) != len(ids):
        raise NetworkError("duplicate bus ids")
    known = set(ids)
    if net.slack_bus not in known:
        raise NetworkError(f"slack bus {net.slack_bus} not in bus list")
    for b in net.buses:
        if b.p_load < 0 or b.q_load < 0:
            raise NetworkError(f"bus {b.id}: negative load")
        if b.p_gen < 0:
            raise NetworkError(f"bus {b.id}: negative DG injection")
        if b.id == net.slack_bus and (b.p_load or b.q_load or b.p_gen):
            raise NetworkError("slack bus must carry no load or injection")
    seen = set()
    for br in net.branches:
        if br.from_bus not in known or br.to_bus not in known:
            raise NetworkError(f"branch {br.from_bus}-{br.to_bus} references an unknown bus")
        if br.from_bus == br.to_bus:
            raise NetworkError(f"branch {br.from_bus}-{br.to_bus} is a self loop")
        key = frozenset((br.from_bus, br.to_bus))
        if key in seen:
            raise NetworkError(f"duplicate branch {br.from_bus}-{br.to_bus}")
        seen.add(key)
        if br.r < 0 or br.x < 0 or (br.r == 0 and br.x == 0):
            raise NetworkError(f"branch {br.from_bus}-{br.to_bus}: invalid impedance")
    if len(net.branches) != len(net.buses) - 1:
        raise NetworkError(
            f"not radial: {len(net.branches)} branches for {len(net.buses)} buses"
        )
    orient_radial(net)


def orient_radial(net: NetworkModel) -> RadialOrder:
    return orient_branches(net.bus_ids, net.branches, net.slack_bus)


def orient_branches(bus_ids, branches, slack_bus) -> RadialOrder:
    adj: dict[int, list[tuple[int, int]]] = {b: [] for b in bus_ids}
    for k, br in enumerate(branches):
        adj[br.from_bus].append((br.to_bus, k))
        adj[br.to_bus].append((br.from_bus, k))

    parent = {slack_bus: None}
    order = []
    queue = deque([slack_bus])
    while queue:
        u = queue.popleft()
        for v, k in adj[u]:
            if v == parent[u]:
                continue
            if v in parent:
                raise NetworkError("branch graph contains a loop")
            parent[v] = u
            order.append((u, v, k))
            queue.append(v)
    if len(parent) != len(adj):
        missing = sorted(set(adj) - set(parent))
        raise NetworkError(f"buses not connected to slack: {missing}")
    return RadialOrder(slack_bus, tuple(order), parent)


def apply_dg(net: NetworkModel, bus: int, p_dg: float) -> NetworkModel:
    """Return a copy of ``net`` with ``p_dg`` kW of active injection added at ``bus``.

    The net load at the bus may become negative (reverse flow).
    """
    if bus == net.slack_bus:
        raise NetworkError("cannot place DG at the slack bus")
    if p_dg < 0:
        raise NetworkError("DG size must be non-negative")
    target = net.bus(bus)
    buses = tuple(replace(b, p_gen=b.p_gen + p_dg) if b is target else b for b in net.buses)
    return replace(net, buses=buses)


# --- CSV I/O -------------------------------------------------------------

BUS_HEADER = ["bus", "p_kw", "q_kvar"]
BRANCH_HEADER = ["from", "to", "r_ohm", "x_ohm"]


def _read_rows(path, header):
    path = Path(path)
    if not path.is_file():
        raise NetworkError(f"{path}: no such file")
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        rows = [r for r in reader if r and any(c.strip() for c in r)]
    if not rows or [c.strip() for c in rows[0]] != header:
        raise NetworkError(f"{path}: expected header {','.join(header)}")
    return rows[1:]


def _parse(path, lineno, row, kinds):
    if len(row) != len(kinds):
        raise NetworkError(f"{path}:{lineno}: expected {len(kinds)} fields, got {len(row)}")
    try:
        return [kind(c.strip()) for kind, c in zip(kinds, row)]
    except ValueError:
        raise NetworkError(f"{path}:{lineno}: malformed row {row!r}") from None


def load_network(buses_path, branches_path, base_kV=12.66, base_MVA=10.0, slack_bus=1):
    buses = [
        Bus(*_parse(buses_path, i + 2, row, (int, float, float)))
        for i, row in enumerate(_read_rows(buses_path, BUS_HEADER))
    ]
    branches = [
        Branch(*_parse(branches_path, i + 2, row, (int, int, float, float)))
        for i, row in enumerate(_read_rows(branches_path, BRANCH_HEADER))
    ]
    return NetworkModel(tuple(buses), tuple(branches), base_kV, base_MVA, slack_bus)


def write_network(net: NetworkModel, buses_path, branches_path) -> None:
    if any(b.p_gen for b in net.buses):
        raise NetworkError("cannot serialise a network with DG applied")
    with open(buses_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(BUS_HEADER)
        for b in net.buses:
            w.writerow([b.id, repr(b.p_load), repr(b.q_load)])
    with open(branches_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(BRANCH_HEADER)
        for br in net.branches:
            w.writerow([br.from_bus, br.to_bus, repr(br.r), repr(br.x)])


# --- IEEE 33-bus feeder (Baran & Wu, 1989) -------------------------------

_IEEE33_LOADS = [  # bus, kW, kVAr
    (1, 0, 0), (2, 100, 60), (3, 90, 40), (4, 120, 80), (5, 60, 30),
    (6, 60, 20), (7, 200, 100), (8, 200, 100), (9, 60, 20), (10, 60, 20),
    (11, 45, 30), (12, 60, 35), (13, 60, 35), (14, 120, 80), (15, 60, 10),
    (16, 60, 20), (17, 60, 20), (18, 90, 40), (19, 90, 40), (20, 90, 40),
    (21, 90, 40), (22, 90, 40), (23, 90, 50), (24, 420, 200), (25, 420, 200),
    (26, 60, 25), (27, 60, 25), (28, 60, 20), (29, 120, 70), (30, 200, 600),
    (31, 150, 70), (32, 210, 100), (33, 60, 40),
]

_IEEE33_LINES = [  # from, to, R ohm, X ohm
    (1, 2, 0.0922, 0.0470), (2, 3, 0.4930, 0.2511), (3, 4, 0.3660, 0.1864),
    (4, 5, 0.3811, 0.1941), (5, 6, 0.8190, 0.7070), (6, 7, 0.1872, 0.6188),
    (7, 8, 0.7114, 0.2351), (8, 9, 1.0300, 0.7400), (9, 10, 1.0440, 0.7400),
    (10, 11, 0.1966, 0.0650), (11, 12, 0.3744, 0.1238), (12, 13, 1.4680, 1.1550),
    (13, 14, 0.5416, 0.7129), (14, 15, 0.5910, 0.5260), (15, 16, 0.7463, 0.5450),
    (16, 17, 1.2890, 1.7210), (17, 18, 0.7320, 0.5740), (2, 19, 0.1640, 0.1565),
    (19, 20, 1.5042, 1.3554), (20, 21, 0.4095, 0.4784), (21, 22, 0.7089, 0.9373),
    (3, 23, 0.4512, 0.3083), (23, 24, 0.8980, 0.7091), (24, 25, 0.8960, 0.7011),
    (6, 26, 0.2030, 0.1034), (26, 27, 0.2842, 0.1447), (27, 28, 1.0590, 0.9337),
    (28, 29, 0.8042, 0.7006), (29, 30, 0.5075, 0.2585), (30, 31, 0.9744, 0.9630),
    (31, 32, 0.3105, 0.3619), (32, 33, 0.3410, 0.5302),
]


def builtin_ieee33() -> NetworkModel:
    """The 33-bus, 12.66 kV test feeder; bus 1 is the substation."""
    buses = tuple(Bus(i, float(p), float(q)) for i, p, q in _IEEE33_LOADS)
    branches = tuple(Branch(f, t, r, x) for f, t, r, x in _IEEE33_LINES)
    return NetworkModel(buses, branches, base_kV=12.66, base_MVA=10.0, slack_bus=1)
