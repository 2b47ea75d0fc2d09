"""Discrete-time simulation of boolean gate networks with per-gate delays.

A gate with delay n computes its output at time t from its inputs at time
t - n.  Up to time n the output keeps its initial value.  External inputs
are held constant.  Since the next row depends only on the last
``max delay`` rows, the run is periodic from the first repeated window of
that length on, which is how traces are classified.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Mapping

from .errors import HorizonTooSmall, InvalidNetlist

GATES = {
    "AND": lambda xs: all(xs),
    "OR": lambda xs: any(xs),
    "NOT": lambda xs: not xs[0],
    "BUF": lambda xs: xs[0],
}


@dataclass(frozen=True)
class Gate:
    kind: str
    inputs: tuple
    out: str
    delay: int = 1


@dataclass
class Netlist:
    points: tuple
    gates: tuple
    inputs: tuple
    initial: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = tuple(self.points)
        self.gates = tuple(self.gates)
        self.inputs = tuple(self.inputs)
        pts = set(self.points)
        if len(pts) != len(self.points):
            raise InvalidNetlist("duplicate point name")
        drivers: dict[str, str] = {p: "input" for p in self.inputs}
        for p in self.inputs:
            if p not in pts:
                raise InvalidNetlist(f"input {p!r} is not a point")
        for g in self.gates:
            if g.kind not in GATES:
                raise InvalidNetlist(f"unknown gate kind {g.kind!r}")
            if g.kind in ("NOT", "BUF") and len(g.inputs) != 1:
                raise InvalidNetlist(f"{g.kind} gate driving {g.out} needs exactly one input")
            if not g.inputs:
                raise InvalidNetlist(f"gate driving {g.out} has no inputs")
            if not isinstance(g.delay, int) or g.delay < 1:
                raise InvalidNetlist(f"gate driving {g.out}: delay must be a positive integer")
            for p in (*g.inputs, g.out):
                if p not in pts:
                    raise InvalidNetlist(f"gate refers to unknown point {p!r}")
            if g.out in drivers:
                raise InvalidNetlist(f"point {g.out!r} has more than one driver")
            drivers[g.out] = g.kind
        undriven = [p for p in self.points if p not in drivers]
        if undriven:
            raise InvalidNetlist(f"points without a driver: {undriven}")
        for p, v in self.initial.items():
            if p not in pts:
                raise InvalidNetlist(f"initial value for unknown point {p!r}")
            if not isinstance(v, bool):
                raise InvalidNetlist(f"initial value of {p!r} must be a boolean")

    @property
    def max_delay(self) -> int:
        return max((g.delay for g in self.gates), default=1)

    def to_dict(self) -> dict:
        return {
            "points": list(self.points),
            "gates": [{"kind": g.kind, "in": list(g.inputs), "out": g.out, "delay": g.delay} for g in self.gates],
            "inputs": list(self.inputs),
            "initial": {p: self.initial.get(p, False) for p in self.points},
        }


def netlist_from_dict(data: Mapping[str, Any]) -> Netlist:
    try:
        gates = tuple(Gate(str(g["kind"]).upper(), tuple(g["in"]), g["out"], g.get("delay", 1))
                      for g in data["gates"])
        return Netlist(tuple(data["points"]), gates, tuple(data.get("inputs", [])),
                       dict(data.get("initial", {})))
    except (KeyError, TypeError) as exc:
        raise InvalidNetlist(f"netlist JSON missing field: {exc}") from None


def netlist_from_json(text: str) -> Netlist:
    try:
        return netlist_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InvalidNetlist(f"invalid JSON: {exc}") from None


@dataclass(frozen=True)
class Stable:
    state: tuple
    first_time: int


@dataclass(frozen=True)
class Oscillating:
    period: int
    onset_time: int


@dataclass(frozen=True)
class Undetermined:
    horizon: int


@dataclass
class Trace:
    points: tuple
    rows: list            # rows[t-1] is the state at time t
    classification: Stable | Oscillating | Undetermined

    def value(self, t: int, point: str) -> bool:
        return self.rows[t - 1][self.points.index(point)]

    def classification_dict(self) -> dict:
        c = self.classification
        if isinstance(c, Stable):
            return {"kind": "stable", "first_time": c.first_time,
                    "state": dict(zip(self.points, c.state))}
        if isinstance(c, Oscillating):
            return {"kind": "oscillating", "period": c.period, "onset_time": c.onset_time}
        return {"kind": "undetermined", "horizon": c.horizon}

    def to_dict(self) -> dict:
        return {"points": list(self.points),
                "rows": [{"t": t, **dict(zip(self.points, r))} for t, r in enumerate(self.rows, 1)],
                "classification": self.classification_dict()}

    def table(self) -> str:
        width = [max(len(p), 1) for p in self.points]
        lines = ["t   " + "  ".join(p.rjust(w) for p, w in zip(self.points, width))]
        for t, r in enumerate(self.rows, 1):
            cells = "  ".join(("T" if v else "F").rjust(w) for v, w in zip(r, width))
            lines.append(f"{t}:".ljust(4) + cells)
        return "\n".join(lines) + "\n"


def _step(netlist: Netlist, ix: dict, rows: list, t: int, init: tuple) -> tuple:
    row = list(init)
    for g in netlist.gates:
        if t > g.delay:
            src = rows[t - g.delay - 1]
            row[ix[g.out]] = GATES[g.kind]([src[ix[p]] for p in g.inputs])
    return tuple(row)


def simulate(netlist: Netlist, steps: int, initial: Mapping[str, bool] | None = None) -> list:
    init_map = dict(netlist.initial)
    init_map.update(initial or {})
    init = tuple(bool(init_map.get(p, False)) for p in netlist.points)
    ix = {p: i for i, p in enumerate(netlist.points)}
    rows = [init]
    for t in range(2, steps + 1):
        rows.append(_step(netlist, ix, rows, t, init))
    return rows


def _classify(rows: list, window: int) -> Stable | Oscillating | None:
    seen: dict[tuple, int] = {}
    for t in range(1, len(rows) - window + 2):
        w = tuple(rows[t - 1:t - 1 + window])
        if w in seen:
            t0 = seen[w]
            period = t - t0
            if period == 1:
                return Stable(rows[t0 - 1], t0)
            return Oscillating(period, t0)
        seen[w] = t
    return None


def default_detection_limit(netlist: Netlist) -> int:
    # the state is the last max_delay rows, so that is what must repeat
    return 2 ** (len(netlist.points) * netlist.max_delay) + netlist.max_delay


def run(netlist: Netlist, horizon: int, initial: Mapping[str, bool] | None = None,
        detection_limit: int | None = None) -> Trace:
    """Rows 1..horizon plus a classification.

    The classification may look past the horizon, up to ``detection_limit``
    steps, to find the first repeated window.
    """
    if horizon < 1:
        raise InvalidNetlist("horizon must be positive")
    limit = default_detection_limit(netlist) if detection_limit is None else detection_limit
    window = netlist.max_delay
    # grow the run until a window repeats or the limit is hit
    ceiling = max(limit, horizon)
    steps = min(max(horizon, 2 * window + 8), ceiling)
    while True:
        rows = simulate(netlist, steps, initial)
        cls = _classify(rows, window)
        if cls is not None or steps >= ceiling:
            break
        steps = min(2 * steps, ceiling)
    if cls is None:
        cls = Undetermined(steps)
    return Trace(netlist.points, rows[:horizon], cls)


def diagram_consequence(netlist: Netlist, alpha: Mapping[str, bool], beta: Mapping[str, bool],
                        horizon: int | None = None) -> bool:
    """For every completion of the inputs left open by ``alpha``, the run ends
    up with the points of ``beta`` constantly at beta's values."""
    for p in alpha:
        if p not in netlist.inputs:
            raise InvalidNetlist(f"{p!r} is not an input")
    for p in beta:
        if p not in netlist.points:
            raise InvalidNetlist(f"{p!r} is not a point")
    free = [p for p in netlist.inputs if p not in alpha]
    limit = default_detection_limit(netlist) if horizon is None else horizon
    ix = {p: i for i, p in enumerate(netlist.points)}
    for values in product([False, True], repeat=len(free)):
        init = dict(alpha)
        init.update(zip(free, values))
        tr = run(netlist, 1, init, limit)
        c = tr.classification
        if isinstance(c, Undetermined):
            raise HorizonTooSmall(f"no recurrence within {limit} steps for inputs {init}")
        onset = c.first_time if isinstance(c, Stable) else c.onset_time
        period = 1 if isinstance(c, Stable) else c.period
        rows = simulate(netlist, onset + period + netlist.max_delay, init)
        cycle = rows[onset - 1:onset - 1 + period]
        if any(r[ix[p]] != v for r in cycle for p, v in beta.items()):
            return False
    return True
