"""Feedforward networks of [0,1]-valued units with pointwise activations.

A network is a DAG of units; source units carry no activation and emit their
stimulus value, every other unit computes y = phi(bias + sum_j w_j * y_j).
The incoming edges of a unit keep the order of the edge list, and the bias is
added last; that fixed accumulation order is what lets coherence checks and
the entailment search reproduce a unit's local field bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .activations import Activation, activation_from_dict
from .degrees import DegreeError, GradedScale, check_degree


class NetworkError(ValueError):
    pass


@dataclass(frozen=True)
class Unit:
    uid: str
    activation: Activation | None = None
    bias: float = 0.0
    name: str | None = None

    @property
    def concept(self) -> str:
        return self.name if self.name is not None else self.uid


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    weight: float


@dataclass
class Network:
    units: list[Unit]
    edges: list[Edge]
    inputs: list[str]
    _incoming: dict[str, list[tuple[str, float]]] = field(init=False, repr=False)
    _topo: list[str] = field(init=False, repr=False)
    _by_id: dict[str, Unit] = field(init=False, repr=False)

    def __post_init__(self):
        self._by_id = {u.uid: u for u in self.units}
        if len(self._by_id) != len(self.units):
            raise NetworkError("duplicate unit ids")
        for src in self.inputs:
            if src not in self._by_id:
                raise NetworkError(f"input {src!r} is not a declared unit")
        incoming: dict[str, list[tuple[str, float]]] = {u.uid: [] for u in self.units}
        for e in self.edges:
            if e.src not in self._by_id or e.dst not in self._by_id:
                raise NetworkError(f"edge {e.src!r} -> {e.dst!r} references unknown units")
            incoming[e.dst].append((e.src, e.weight))
        input_set = set(self.inputs)
        for u in self.units:
            if u.uid in input_set:
                if incoming[u.uid]:
                    raise NetworkError(f"source unit {u.uid!r} has incoming edges")
                if u.activation is not None:
                    raise NetworkError(f"source unit {u.uid!r} must not carry an activation")
            else:
                if not incoming[u.uid]:
                    raise NetworkError(f"unit {u.uid!r} has no incoming edges and is not "
                                       f"declared as an input")
                if u.activation is None:
                    raise NetworkError(f"computation unit {u.uid!r} needs an activation")
        self._incoming = incoming
        self._topo = self._topological_order()

    def _topological_order(self) -> list[str]:
        remaining = {u.uid: len(self._incoming[u.uid]) for u in self.units}
        order = [u.uid for u in self.units if remaining[u.uid] == 0]
        queue = list(order)
        out_edges: dict[str, list[str]] = {u.uid: [] for u in self.units}
        for e in self.edges:
            out_edges[e.src].append(e.dst)
        while queue:
            nxt: list[str] = []
            for src in queue:
                for dst in out_edges[src]:
                    remaining[dst] -= 1
                    if remaining[dst] == 0:
                        nxt.append(dst)
            order.extend(nxt)
            queue = nxt
        if len(order) != len(self.units):
            raise NetworkError("the unit graph has a cycle; recurrent networks "
                               "are not supported")
        return order

    def unit(self, uid: str) -> Unit:
        return self._by_id[uid]

    def incoming(self, uid: str) -> list[tuple[str, float]]:
        return self._incoming[uid]

    @property
    def computation_units(self) -> list[Unit]:
        input_set = set(self.inputs)
        return [u for u in self.units if u.uid not in input_set]

    @property
    def input_concepts(self) -> list[str]:
        return [self.unit(uid).concept for uid in self.inputs]


Stimulus = Sequence[float]


def forward(net: Network, stimulus: Stimulus) -> dict[str, float]:
    """Activation of every unit for one input pattern (fuzzy inference)."""
    if len(stimulus) != len(net.inputs):
        raise NetworkError(f"stimulus has {len(stimulus)} values for "
                           f"{len(net.inputs)} input units")
    y: dict[str, float] = {}
    for uid, v in zip(net.inputs, stimulus):
        y[uid] = check_degree(v)
    for uid in net._topo:
        if uid in y:
            continue
        u = 0.0
        for src, w in net.incoming(uid):
            u += w * y[src]
        u += net.unit(uid).bias
        out = net.unit(uid).activation(u)
        if not (0.0 <= out <= 1.0):
            raise DegreeError(f"activation of unit {uid!r} left [0, 1]: {out}")
        y[uid] = out
    return y


def forward_quantized(net: Network, stimulus: Stimulus, scale: GradedScale) -> dict[str, float]:
    """Like forward, but each activation is composed with the quantizer phi_n.

    The stimulus must already lie on the scale; outputs are canonical i/n.
    """
    if len(stimulus) != len(net.inputs):
        raise NetworkError(f"stimulus has {len(stimulus)} values for "
                           f"{len(net.inputs)} input units")
    y: dict[str, float] = {}
    for uid, v in zip(net.inputs, stimulus):
        y[uid] = float(scale.canonical(check_degree(v)))
    for uid in net._topo:
        if uid in y:
            continue
        u = 0.0
        for src, w in net.incoming(uid):
            u += w * y[src]
        u += net.unit(uid).bias
        y[uid] = scale.quantize(net.unit(uid).activation(u))
    return y


# persistence -----------------------------------------------------------------

def to_json_dict(net: Network) -> dict:
    units = []
    for u in net.units:
        rec: dict = {"id": u.uid,
                     "activation": u.activation.to_dict() if u.activation else None,
                     "bias": u.bias}
        if u.name is not None:
            rec["name"] = u.name
        units.append(rec)
    return {"units": units,
            "edges": [{"from": e.src, "to": e.dst, "weight": e.weight} for e in net.edges],
            "inputs": list(net.inputs)}


def from_json_dict(d: Mapping) -> Network:
    units = []
    for rec in d["units"]:
        act = activation_from_dict(rec["activation"]) if rec.get("activation") else None
        units.append(Unit(uid=str(rec["id"]), activation=act,
                          bias=float(rec.get("bias", 0.0)), name=rec.get("name")))
    edges = [Edge(str(e["from"]), str(e["to"]), float(e["weight"])) for e in d["edges"]]
    return Network(units=units, edges=edges, inputs=[str(i) for i in d["inputs"]])


def save_json(net: Network, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_json_dict(net), indent=1), encoding="utf-8")


def load_json(path: str | Path) -> Network:
    return from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def stimuli_to_csv(names: Sequence[str], rows: Sequence[Stimulus]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(names)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def stimuli_from_csv(text: str, net: Network | None = None) -> tuple[list[str], list[list[float]]]:
    """Parse a stimulus CSV; with a network, columns are matched to its inputs."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise ValueError("empty stimulus CSV")
    header = [h.strip() for h in rows[0]]
    data = [[float(v) for v in r] for r in rows[1:]]
    for i, row in enumerate(data):
        if len(row) != len(header):
            raise ValueError(f"stimulus row {i} has {len(row)} values for "
                             f"{len(header)} columns")
    if net is None:
        return header, data
    expected = net.input_concepts
    if set(header) != set(expected):
        missing = sorted(set(expected) - set(header))
        extra = sorted(set(header) - set(expected))
        raise NetworkError(f"stimulus columns do not match network inputs"
                           f"{'; missing ' + ', '.join(missing) if missing else ''}"
                           f"{'; unexpected ' + ', '.join(extra) if extra else ''}")
    if header != expected:
        perm = [header.index(name) for name in expected]
        data = [[row[j] for j in perm] for row in data]
    return expected, data


def load_stimuli(path: str | Path, net: Network | None = None) -> tuple[list[str], list[list[float]]]:
    return stimuli_from_csv(Path(path).read_text(encoding="utf-8"), net)


def save_stimuli(path: str | Path, names: Sequence[str], rows: Sequence[Stimulus]) -> None:
    Path(path).write_text(stimuli_to_csv(names, rows), encoding="utf-8")
