"""Translations between networks, interpretations and weighted knowledge bases.

``build_model`` turns a network plus a stimulus set into a role-free
interpretation whose concept degrees are the unit activations, so the induced
preference over stimuli is exactly "higher activation = more typical".

``extract_kb`` reads the network as a weighted knowledge base: every unit k
with incoming edges contributes a block of weighted typicality inclusions
T(C_k) <: C_j @ w_kj, one per incoming edge in edge order, plus a final
T(C_k) <: top @ bias entry.  Since top always evaluates to 1, the bias enters
the weight sum as the constant it is in the unit's local field.
"""

from __future__ import annotations

import re
import warnings
from typing import Sequence

import numpy as np

from .activations import ActivationMap
from .concepts import Name, Top
from .degrees import GOEDEL_INVOLUTIVE, CombinationFamily, GradedScale
from .interpretation import Interpretation, UnknownNameError
from .network import Network, Stimulus, forward, forward_quantized
from .syntax import KbDocument
from .weighted_kb import WeightedKb

_TOKEN_OK = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def build_model(net: Network, stimuli: Sequence[Stimulus],
                scale: GradedScale | None = None,
                family: CombinationFamily = GOEDEL_INVOLUTIVE,
                concepts: Sequence[str] | None = None,
                ids: Sequence[str] | None = None,
                eps: float = 1e-9) -> Interpretation:
    """Interpretation of the network over a stimulus set.

    With a scale, stimuli are first snapped to the scale and inference runs
    with the quantized activations, so every stored degree lies on C_n.
    Only named units get concept columns; ``concepts`` restricts them further.
    """
    if not stimuli:
        raise ValueError("stimulus set must be non-empty")
    named = [u for u in net.units if u.name is not None]
    if not named:
        raise ValueError("no named units; name the units you want as concepts")
    if concepts is not None:
        available = {u.name for u in named}
        missing = [c for c in concepts if c not in available]
        if missing:
            raise UnknownNameError(
                f"concept(s) {', '.join(missing)} not named in the network; "
                f"available: {', '.join(sorted(available))}")
        named = [u for u in named if u.name in set(concepts)]
    if ids is None:
        ids = [f"s{i}" for i in range(len(stimuli))]
    elif len(ids) != len(stimuli):
        raise ValueError("ids and stimuli must have equal length")

    columns = {u.name: np.empty(len(stimuli)) for u in named}
    for i, stim in enumerate(stimuli):
        if scale is not None:
            snapped = [scale.quantize(v) for v in stim]
            acts = forward_quantized(net, snapped, scale)
        else:
            acts = forward(net, stim)
        for u in named:
            columns[u.name][i] = acts[u.uid]
    return Interpretation(domain=tuple(ids), concepts=columns, family=family,
                          scale=scale, eps=eps)


def extract_kb(net: Network, force_names: bool = False) -> tuple[WeightedKb, ActivationMap]:
    """Weighted knowledge base of the network, plus its activation map.

    Distinguished concepts are the units with incoming edges.  All units must
    be named (or ``force_names`` auto-names unit k as ``u<k>``).
    """
    def concept_of(uid: str) -> str:
        u = net.unit(uid)
        if u.name is not None:
            return u.name
        if force_names:
            return f"u{uid}"
        raise ValueError(f"unit {uid!r} has no concept name; name every unit "
                         f"or pass force_names=True")

    names = {}
    for u in net.units:
        c = concept_of(u.uid)
        if not _TOKEN_OK.match(c):
            raise ValueError(f"unit name {c!r} is not a valid concept token")
        if c in names.values():
            raise ValueError(f"duplicate concept name {c!r} in network")
        names[u.uid] = c

    doc = KbDocument()
    phi: ActivationMap = {}
    for u in net.units:
        inc = net.incoming(u.uid)
        if not inc:
            continue
        entries = [(Name(names[src]), w) for src, w in inc]
        entries.append((Top(), u.bias))
        doc.weighted_blocks[names[u.uid]] = entries
        phi[names[u.uid]] = u.activation
    if not doc.weighted_blocks:
        warnings.warn("network has no computation units; extracted knowledge "
                      "base is empty", stacklevel=2)
    return WeightedKb.from_document(doc), phi


def quantize_model(I: Interpretation, scale: GradedScale) -> Interpretation:
    """Quantize every stored degree onto C_n; individuals are preserved."""
    return Interpretation(
        domain=I.domain,
        concepts={k: scale.quantize_array(v) for k, v in I.concepts.items()},
        roles={k: scale.quantize_array(v) for k, v in I.roles.items()},
        individuals=dict(I.individuals),
        family=I.family, scale=scale, eps=I.eps)
