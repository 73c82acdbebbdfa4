"""Activation functions with range [0,1] and declared monotonicity classes.

Every activation is evaluated through the same scalar code path (math module,
no vectorized transcendentals), so a degree computed during network inference
is bit-identical to the same degree recomputed by a coherence check or by the
entailment search.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Mapping

from .degrees import GradedScale

INCREASING = "increasing"
NON_DECREASING = "non-decreasing"
NONE = "none"


@dataclass(frozen=True)
class Activation:
    kind: str = "abstract"
    monotonicity: str = NONE

    def __call__(self, u: float) -> float:  # pragma: no cover
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class Logistic(Activation):
    kind: str = "logistic"
    monotonicity: str = INCREASING
    k: float = 1.0
    x0: float = 0.0

    def __post_init__(self):
        if self.k <= 0:
            object.__setattr__(self, "monotonicity", NONE)

    def __call__(self, u: float) -> float:
        z = self.k * (u - self.x0)
        if z >= 0.0:
            return 1.0 / (1.0 + math.exp(-z))
        e = math.exp(z)
        return e / (1.0 + e)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "k": self.k, "x0": self.x0}


@dataclass(frozen=True)
class ClampedRelu(Activation):
    kind: str = "clamped-relu"
    monotonicity: str = NON_DECREASING

    def __call__(self, u: float) -> float:
        return min(max(u, 0.0), 1.0)


@dataclass(frozen=True)
class ShiftedTanh(Activation):
    kind: str = "shifted-tanh"
    monotonicity: str = INCREASING

    def __call__(self, u: float) -> float:
        return (math.tanh(u) + 1.0) / 2.0


@dataclass(frozen=True)
class BinaryStep(Activation):
    """y = 1 for u strictly above the threshold, else 0 (so step(t) = 0)."""

    kind: str = "binary-step"
    monotonicity: str = NON_DECREASING
    t: float = 0.0

    def __call__(self, u: float) -> float:
        return 1.0 if u > self.t else 0.0

    def to_dict(self) -> dict:
        return {"kind": self.kind, "t": self.t}


@dataclass(frozen=True)
class IdentityClamp(Activation):
    kind: str = "identity-clamped"
    monotonicity: str = NON_DECREASING

    def __call__(self, u: float) -> float:
        return min(max(u, 0.0), 1.0)


_KINDS = {
    "logistic": Logistic,
    "clamped-relu": ClampedRelu,
    "shifted-tanh": ShiftedTanh,
    "binary-step": BinaryStep,
    "identity-clamped": IdentityClamp,
}


class UnsupportedActivationError(ValueError):
    pass


def activation_from_dict(d: Mapping) -> Activation:
    kind = d.get("kind")
    if kind == "softmax":
        raise UnsupportedActivationError(
            "softmax is not a pointwise activation y_k = phi(u_k); "
            "only per-unit activations are supported")
    if kind not in _KINDS:
        raise UnsupportedActivationError(
            f"unknown activation kind {kind!r}; supported: {sorted(_KINDS)}")
    cls = _KINDS[kind]
    params = {k: v for k, v in d.items() if k != "kind"}
    return cls(**params)


def quantized(act: Activation, scale: GradedScale, u: float) -> float:
    """phi_n(u) = [phi(u)]^n, the scale-quantized activation."""
    return scale.quantize(act(u))


def verify_monotonicity(act: Activation, samples: int = 1000, lo: float = -20.0,
                        hi: float = 20.0, seed: int = 0) -> bool:
    """Spot-check the declared monotonicity class on sampled point pairs.

    An increasing activation is required to be strictly increasing wherever
    its float image is not saturated at 0 or 1 (a steep logistic reaches
    exactly 1.0 in double precision), and non-decreasing everywhere.
    """
    rng = random.Random(seed)
    pts = sorted(rng.uniform(lo, hi) for _ in range(samples))
    ys = [act(p) for p in pts]
    if any(not (0.0 <= y <= 1.0) for y in ys):
        return False
    if act.monotonicity == NONE:
        return True
    if any(y2 < y1 for y1, y2 in zip(ys, ys[1:])):
        return False
    if act.monotonicity == INCREASING:
        # strictness is only decidable away from the float-saturated tails,
        # where adjacent inputs can map to the same double
        interior = [(y1, y2) for y1, y2 in zip(ys, ys[1:])
                    if 1e-9 < y1 < 1 - 1e-9 and 1e-9 < y2 < 1 - 1e-9]
        if not interior:
            return False
        strict = sum(1 for y1, y2 in interior if y2 > y1)
        return strict >= 0.9 * len(interior)
    return True


ActivationMap = dict[str, Activation]


def activation_map_to_dict(phi: ActivationMap) -> dict:
    return {"concepts": {name: act.to_dict() for name, act in phi.items()}}


def activation_map_from_dict(d: Mapping) -> ActivationMap:
    if "concepts" in d:
        entries = d["concepts"]
        default = activation_from_dict(d["default"]) if "default" in d else None
    else:
        entries, default = d, None
    phi = {name: activation_from_dict(spec) for name, spec in entries.items()}
    if default is not None:
        phi["*"] = default
    return phi


def activation_for(phi: ActivationMap, concept: str) -> Activation:
    if concept in phi:
        return phi[concept]
    if "*" in phi:
        return phi["*"]
    raise KeyError(f"no activation declared for distinguished concept {concept!r}")
