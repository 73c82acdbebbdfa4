"""Weighted conditional knowledge bases and their compatibility checks.

The element weight of x for a distinguished concept C sums the block weights
scaled by the body degrees, and is -inf when x is not a C-member at all.
Three progressively stronger compatibility notions between an interpretation
and a knowledge base are checked here:

* faithful:   x <_C y  implies  W_C(x) > W_C(y)
* coherent:   x <_C y  iff      W_C(x) > W_C(y)
* phi-coherent: C(x) = phi_C(sum_h w_h * D_h(x)) for every element, including
  those with C(x) = 0 (the weight's -inf branch does not apply here).

Weight sums accumulate left to right in block order so that a sum recomputed
anywhere in the toolkit is bit-identical to the one the network produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .activations import ActivationMap, activation_for
from .concepts import ConceptExpr, Name, has_typ
from .degrees import GradedScale
from .interpretation import (AxiomCheck, Interpretation, UnknownNameError, check_axiom,
                             eval_vector)
from .syntax import KbDocument

NEG_INF = float("-inf")


@dataclass(frozen=True)
class WeightedKb:
    document: KbDocument
    distinguished: tuple[str, ...]

    @classmethod
    def from_document(cls, doc: KbDocument) -> "WeightedKb":
        for name, entries in doc.weighted_blocks.items():
            if not entries:
                raise ValueError(f"weighted block {name!r} is empty")
            for body, weight in entries:
                if not math.isfinite(weight):
                    raise ValueError(f"weight {weight!r} in block {name!r} is not finite")
                if has_typ(body):
                    raise ValueError(
                        f"typicality may appear only on the left-hand side of a "
                        f"weighted inclusion (block {name!r})")
        return cls(document=doc, distinguished=tuple(doc.weighted_blocks))

    def block(self, concept: str) -> list[tuple[ConceptExpr, float]]:
        if concept not in self.document.weighted_blocks:
            raise KeyError(f"{concept!r} is not a distinguished concept")
        return self.document.weighted_blocks[concept]


def weight_sum_vector(kb: WeightedKb, I: Interpretation, concept: str) -> np.ndarray:
    """sum_h w_h * D_h(x) for every x, in block order (no -inf branch)."""
    s = np.zeros(len(I.domain))
    for body, weight in kb.block(concept):
        s = s + weight * eval_vector(I, body)
    return s


def weight_vector(kb: WeightedKb, I: Interpretation, concept: str) -> np.ndarray:
    """W_C over the domain: the weighted sum where C > 0, -inf elsewhere."""
    if concept not in I.concepts:
        raise UnknownNameError(f"unknown concept name {concept!r}")
    s = weight_sum_vector(kb, I, concept)
    return np.where(I.concepts[concept] > 0.0, s, NEG_INF)


def element_weight(kb: WeightedKb, I: Interpretation, concept: str, element: str) -> float:
    return float(weight_vector(kb, I, concept)[I.index(element)])


@dataclass
class WeightViolation:
    concept: str
    x: str
    y: str
    wx: float
    wy: float
    kind: str  # 'order-without-weight' | 'weight-without-order'

    def to_dict(self) -> dict:
        return {"concept": self.concept, "x": self.x, "y": self.y,
                "wx": self.wx, "wy": self.wy, "kind": self.kind}


@dataclass
class CompatibilityReport:
    holds: bool
    violations: list[WeightViolation] = field(default_factory=list)
    axiom_failures: list[tuple[object, AxiomCheck]] = field(default_factory=list)

    def to_dict(self) -> dict:
        from .syntax import axiom_to_text
        return {"holds": self.holds,
                "violations": [v.to_dict() for v in self.violations],
                "axiomFailures": [{"axiom": axiom_to_text(ax), **res.to_dict()}
                                  for ax, res in self.axiom_failures]}


def _strict_failures(kb: WeightedKb, I: Interpretation):
    return [(ax, res) for ax in kb.document.all_axioms()
            if not (res := check_axiom(I, ax)).holds]


def _pair_check(kb: WeightedKb, I: Interpretation, biconditional: bool) -> list[WeightViolation]:
    eps = I.tie_eps
    out: list[WeightViolation] = []
    for concept in kb.distinguished:
        deg = eval_vector(I, Name(concept))
        w = weight_vector(kb, I, concept)
        prefer = deg[:, None] > deg[None, :] + eps
        heavier = w[:, None] > w[None, :]
        for i, j in np.argwhere(prefer & ~heavier):
            out.append(WeightViolation(concept, I.domain[i], I.domain[j],
                                       float(w[i]), float(w[j]),
                                       "order-without-weight"))
        if biconditional:
            for i, j in np.argwhere(heavier & ~prefer):
                out.append(WeightViolation(concept, I.domain[i], I.domain[j],
                                           float(w[i]), float(w[j]),
                                           "weight-without-order"))
    return out


def check_faithful(kb: WeightedKb, I: Interpretation) -> CompatibilityReport:
    failures = _strict_failures(kb, I)
    violations = _pair_check(kb, I, biconditional=False)
    return CompatibilityReport(holds=not failures and not violations,
                               violations=violations, axiom_failures=failures)


def check_coherent(kb: WeightedKb, I: Interpretation) -> CompatibilityReport:
    failures = _strict_failures(kb, I)
    violations = _pair_check(kb, I, biconditional=True)
    return CompatibilityReport(holds=not failures and not violations,
                               violations=violations, axiom_failures=failures)


@dataclass
class PhiCoherenceReport:
    holds: bool
    tol: float
    max_residual: float
    residuals: list[tuple[str, str, float]] = field(default_factory=list)
    axiom_failures: list[tuple[object, AxiomCheck]] = field(default_factory=list)

    def to_dict(self) -> dict:
        from .syntax import axiom_to_text
        return {"holds": self.holds, "tol": self.tol, "maxResidual": self.max_residual,
                "residuals": [{"concept": c, "element": x, "residual": r}
                              for c, x, r in self.residuals],
                "axiomFailures": [{"axiom": axiom_to_text(ax), **res.to_dict()}
                                  for ax, res in self.axiom_failures]}


def phi_residuals(kb: WeightedKb, I: Interpretation, phi: ActivationMap
                  ) -> list[tuple[str, str, float]]:
    """|C(x) - phi_C(weight sum at x)| per (distinguished concept, element).

    The activation is applied through the shared scalar path; with a graded
    interpretation it is composed with the scale quantization.
    """
    out: list[tuple[str, str, float]] = []
    for concept in kb.distinguished:
        act = activation_for(phi, concept)
        stored = I.concepts.get(concept)
        if stored is None:
            raise UnknownNameError(f"unknown concept name {concept!r}")
        sums = weight_sum_vector(kb, I, concept)
        for i, el in enumerate(I.domain):
            y = act(float(sums[i]))
            if I.scale is not None:
                y = I.scale.quantize(y)
            out.append((concept, el, abs(float(stored[i]) - y)))
    return out


def check_phi_coherent(kb: WeightedKb, I: Interpretation, phi: ActivationMap,
                       tol: float = 1e-9) -> PhiCoherenceReport:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if I.scale is not None:
        tol = 0.0  # phi_n lands exactly on the scale; the check is exact
    failures = _strict_failures(kb, I)
    residuals = phi_residuals(kb, I, phi)
    max_res = max((r for _, _, r in residuals), default=0.0)
    return PhiCoherenceReport(holds=not failures and max_res <= tol, tol=tol,
                              max_residual=max_res, residuals=residuals,
                              axiom_failures=failures)


def coherence_residual_profile(kb: WeightedKb, I: Interpretation, phi: ActivationMap,
                               scales: Sequence[int]) -> list[tuple[int, float]]:
    """Max phi_n-coherence residual of the quantized interpretation, per n.

    A convergence diagnostic: for a phi-coherent fuzzy interpretation the
    column shrinks to 0 as n grows; for a non-coherent one it stays bounded
    away from 0 once n is large enough.
    """
    from .bridge import quantize_model

    out = []
    for n in scales:
        In = quantize_model(I, GradedScale(n))
        residuals = phi_residuals(kb, In, phi)
        out.append((n, max((r for _, _, r in residuals), default=0.0)))
    return out
