"""Canonical graded entailment for role-free weighted knowledge bases.

The canonical model of a knowledge base over the scale C_n is identified with
the set of all coherent valuations: assignments of scale values to every
concept name such that each distinguished concept equals its quantized
activation of the weighted body sum, and all strict axioms hold pointwise.
Entailment of an axiom is then satisfaction on the finite interpretation
whose domain is exactly that valuation set.

Two search modes:

* acyclic-grid: when the block dependency graph is acyclic (always the case
  for knowledge bases extracted from feedforward networks), only the free
  (non-distinguished) concepts range over the scale grid; distinguished
  values are computed by quantized forward propagation.
* general-search: every concept name ranges over the grid and coherence is
  checked as an exact equality filter.

Valuations are enumerated in lexicographic order of the sorted concept
names, so reported counterexamples are deterministic; splitting the grid
across workers never changes any verdict.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .activations import ActivationMap, activation_for
from .concepts import (And, Axiom, Bot, ConceptAssertion, ConceptExpr, Inclusion, Name,
                       Not, Or, Top, Typ, axiom_has_roles, compare, concept_names, has_typ)
from .degrees import GOEDEL_INVOLUTIVE, CombinationFamily, GradedScale
from .interpretation import Interpretation, check_axiom
from .weighted_kb import WeightedKb


class EntailmentUnsupportedError(ValueError):
    """The knowledge base or query falls outside the role-free fragment."""


class BudgetExceededError(RuntimeError):
    def __init__(self, search_space: int, budget: int):
        self.search_space, self.budget = search_space, budget
        super().__init__(f"search space of {search_space} valuations exceeds "
                         f"the budget of {budget}")


def _eval_on_valuation(c: ConceptExpr, val: dict[str, float],
                       family: CombinationFamily, scale: GradedScale) -> float:
    if isinstance(c, Name):
        return val[c.name]
    if isinstance(c, Top):
        return 1.0
    if isinstance(c, Bot):
        return 0.0
    if isinstance(c, Not):
        return float(family.neg(_eval_on_valuation(c.sub, val, family, scale), scale))
    if isinstance(c, And):
        return float(family.tnorm(_eval_on_valuation(c.left, val, family, scale),
                                  _eval_on_valuation(c.right, val, family, scale), scale))
    if isinstance(c, Or):
        return float(family.snorm(_eval_on_valuation(c.left, val, family, scale),
                                  _eval_on_valuation(c.right, val, family, scale), scale))
    raise EntailmentUnsupportedError(f"concept {c!r} is outside the boolean fragment")


@dataclass
class _Problem:
    kb: WeightedKb
    phi: ActivationMap
    scale: GradedScale
    family: CombinationFamily
    mode: str                      # 'acyclic-grid' | 'general-search'
    names: list[str]               # all concept names, sorted
    free: list[str]                # grid variables, sorted
    order: list[str]               # distinguished concepts in dependency order
    strict: list[Inclusion]
    search_space: int


def _analyze(kb: WeightedKb, phi: ActivationMap, scale: GradedScale,
             family: CombinationFamily, mode: str,
             extra_names: Sequence[str] = ()) -> _Problem:
    doc = kb.document
    if doc.assertions:
        raise EntailmentUnsupportedError(
            "assertions are not supported by the entailment search")
    names: set[str] = set(extra_names) | set(kb.distinguished)
    for entries in doc.weighted_blocks.values():
        for body, _ in entries:
            if not _boolean(body):
                raise EntailmentUnsupportedError(
                    "weighted inclusion bodies must be role-free boolean concepts")
            names |= concept_names(body)
    for ax in doc.strict_axioms:
        if axiom_has_roles(ax):
            raise EntailmentUnsupportedError("strict axioms with roles are not supported")
        if has_typ(ax.lhs) or has_typ(ax.rhs):
            raise EntailmentUnsupportedError(
                "strict axioms with typicality are not supported by the search")
        if ax.cmp not in (">=", ">"):
            raise EntailmentUnsupportedError(
                "only lower-bounded (>= / >) strict axioms are supported")
        names |= concept_names(ax.lhs) | concept_names(ax.rhs)
    for ci in kb.distinguished:
        activation_for(phi, ci)  # raises if missing

    all_names = sorted(names)
    distinguished = set(kb.distinguished)
    deps = {ci: set().union(*(concept_names(b) for b, _ in doc.weighted_blocks[ci]))
            for ci in kb.distinguished}

    # topological order of distinguished concepts, if the block graph is acyclic
    order: list[str] = []
    pending = dict(deps)
    while pending:
        done = set(order)
        ready = [ci for ci in pending if not ((pending[ci] & distinguished) - done)]
        if not ready:
            break
        for ci in sorted(ready):
            order.append(ci)
            del pending[ci]
    acyclic = not pending

    if mode == "auto":
        mode = "acyclic-grid" if acyclic else "general-search"
    if mode == "acyclic-grid" and not acyclic:
        raise EntailmentUnsupportedError(
            "block dependencies are cyclic; use general-search mode")
    if mode not in ("acyclic-grid", "general-search"):
        raise ValueError(f"unknown search mode {mode!r}")

    if mode == "acyclic-grid":
        free = sorted(set(all_names) - distinguished)
    else:
        free = list(all_names)
        order = sorted(kb.distinguished)
    space = (scale.n + 1) ** len(free)
    return _Problem(kb, phi, scale, family, mode, all_names, free, order,
                    list(doc.strict_axioms), space)


def _boolean(c: ConceptExpr) -> bool:
    return all(isinstance(node, (Name, Top, Bot, Not, And, Or)) for node in c.walk())


def _valuation_at(problem: _Problem, index: int) -> dict[str, float] | None:
    """Decode grid point ``index`` and complete/accept it, or None if filtered."""
    n = problem.scale.n
    val: dict[str, float] = {}
    rem = index
    for name in reversed(problem.free):
        rem, num = divmod(rem, n + 1)
        val[name] = num / n
    if problem.mode == "acyclic-grid":
        for ci in problem.order:
            act = activation_for(problem.phi, ci)
            s = 0.0
            for body, w in problem.kb.block(ci):
                s += w * _eval_on_valuation(body, val, problem.family, problem.scale)
            val[ci] = problem.scale.quantize(act(s))
    else:
        for ci in problem.order:
            act = activation_for(problem.phi, ci)
            s = 0.0
            for body, w in problem.kb.block(ci):
                s += w * _eval_on_valuation(body, val, problem.family, problem.scale)
            if val[ci] != problem.scale.quantize(act(s)):
                return None
    for ax in problem.strict:
        lv = _eval_on_valuation(ax.lhs, val, problem.family, problem.scale)
        rv = _eval_on_valuation(ax.rhs, val, problem.family, problem.scale)
        if not compare(float(problem.family.implies(lv, rv, problem.scale)),
                       ax.cmp, ax.threshold):
            return None
    return val


def enumerate_coherent(kb: WeightedKb, phi: ActivationMap, scale: GradedScale,
                       family: CombinationFamily = GOEDEL_INVOLUTIVE,
                       mode: str = "auto", budget: int = 10 ** 8,
                       extra_names: Sequence[str] = ()) -> Iterator[dict[str, float]]:
    """Stream the element valuations of the canonical coherent model."""
    problem = _analyze(kb, phi, scale, family, mode, extra_names)
    if problem.search_space > budget:
        raise BudgetExceededError(problem.search_space, budget)
    for index in range(problem.search_space):
        val = _valuation_at(problem, index)
        if val is not None:
            yield val


@dataclass
class EntailmentResult:
    entailed: bool
    vacuous: bool
    max_value: float | None
    counterexample: dict[str, float] | None
    counterexamples: list[dict[str, float]]
    explored: int
    kept: int
    pruned: int
    elapsed_ms: float
    unsat: bool = False
    value: float | None = None

    def to_json_dict(self) -> dict:
        return {"entailed": self.entailed, "vacuous": self.vacuous,
                "maxValue": self.max_value, "counterexample": self.counterexample,
                "explored": self.explored, "elapsedMs": round(self.elapsed_ms, 3),
                "kept": self.kept, "pruned": self.pruned, "unsat": self.unsat,
                "value": self.value}


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total)) if total else 1
    step, extra = divmod(total, parts)
    out, lo = [], 0
    for p in range(parts):
        hi = lo + step + (1 if p < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def _collect_range(problem: _Problem, lo: int, hi: int) -> list[tuple[int, dict[str, float]]]:
    out = []
    for index in range(lo, hi):
        val = _valuation_at(problem, index)
        if val is not None:
            out.append((index, val))
    return out


def entails(kb: WeightedKb, phi: ActivationMap, axiom: Axiom, scale: GradedScale,
            family: CombinationFamily = GOEDEL_INVOLUTIVE, mode: str = "auto",
            budget: int = 10 ** 8, jobs: int = 1, prune: bool = False) -> EntailmentResult:
    """Decide whether every canonical coherent model satisfies the axiom.

    For T(C) <: D >= a the verdict is: every maximizer of C among the
    C-positive valuations satisfies the pointwise implication bound;
    ``vacuous`` flags the degenerate case where no valuation is C-positive.
    The reported counterexample is the lexicographically least violating
    valuation, independent of the worker count.
    """
    t0 = time.perf_counter()
    if not isinstance(axiom, (Inclusion, ConceptAssertion)):
        raise EntailmentUnsupportedError("queries must be inclusions")
    if isinstance(axiom, ConceptAssertion):
        raise EntailmentUnsupportedError("assertion queries are not supported")
    if axiom_has_roles(axiom):
        raise EntailmentUnsupportedError("queries must be role-free")

    query_names = concept_names(axiom.lhs) | concept_names(axiom.rhs)
    problem = _analyze(kb, phi, scale, family, mode, extra_names=sorted(query_names))
    if problem.search_space > budget:
        raise BudgetExceededError(problem.search_space, budget)

    if prune:
        res = _entails_pruned(problem, axiom, jobs)
        res.elapsed_ms = (time.perf_counter() - t0) * 1000
        return res

    ranges = _chunks(problem.search_space, jobs)
    if len(ranges) == 1:
        found = _collect_range(problem, *ranges[0])
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            parts = pool.map(lambda r: _collect_range(problem, *r), ranges)
            found = [item for part in parts for item in part]
    explored = problem.search_space
    if not found:
        return EntailmentResult(entailed=True, vacuous=True, max_value=None,
                                counterexample=None, counterexamples=[],
                                explored=explored, kept=0, pruned=0,
                                elapsed_ms=(time.perf_counter() - t0) * 1000,
                                unsat=True)

    canon = Interpretation(
        domain=tuple(f"v{i}" for i, _ in found),
        concepts={name: np.array([val[name] for _, val in found])
                  for name in problem.names},
        family=family, scale=scale)
    res = check_axiom(canon, axiom)
    index_of = {f"v{i}": pos for pos, (i, _) in enumerate(found)}
    ce_positions = sorted(index_of[v.element] for v in res.counterexamples)
    counterexamples = [found[p][1] for p in ce_positions]

    vacuous = False
    max_value = None
    if isinstance(axiom, Inclusion) and isinstance(axiom.lhs, Typ):
        from .interpretation import eval_vector
        body = eval_vector(canon, axiom.lhs.sub)
        max_value = float(body.max())
        vacuous = not (body > 0.0).any()
    return EntailmentResult(entailed=res.holds, vacuous=vacuous, max_value=max_value,
                            counterexample=counterexamples[0] if counterexamples else None,
                            counterexamples=counterexamples, explored=explored,
                            kept=len(found), pruned=0,
                            elapsed_ms=(time.perf_counter() - t0) * 1000,
                            value=res.value)


def _entails_pruned(problem: _Problem, axiom: Inclusion, jobs: int) -> EntailmentResult:
    """Maximizer-only search for T(C) <: D with a typicality-free rhs.

    Only the maximizers of C can be typical, and non-typical valuations
    satisfy the pointwise implication trivially, so everything but the
    running maximizer set can be dropped as soon as a better C-value shows
    up.  Not available when the right-hand side itself mentions typicality
    (its value would depend on the dropped valuations).
    """
    if not (isinstance(axiom, Inclusion) and isinstance(axiom.lhs, Typ)
            and not has_typ(axiom.rhs) and axiom.cmp in (">=", ">")):
        raise EntailmentUnsupportedError(
            "pruned search only supports T(C) <: D >= a (or >) with a "
            "typicality-free right-hand side")
    body = axiom.lhs.sub

    def scan(lo: int, hi: int):
        best = 0.0
        keep: list[tuple[int, dict[str, float]]] = []
        kept = pruned = 0
        for index in range(lo, hi):
            val = _valuation_at(problem, index)
            if val is None:
                continue
            kept += 1
            c = _eval_on_valuation(body, val, problem.family, problem.scale)
            if c <= 0.0 or c < best:
                pruned += 1
                continue
            if c > best:
                pruned += len(keep)
                keep, best = [], c
            keep.append((index, val))
        return best, keep, kept, pruned

    ranges = _chunks(problem.search_space, jobs)
    if len(ranges) == 1:
        results = [scan(*ranges[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            results = list(pool.map(lambda r: scan(*r), ranges))
    best = max(r[0] for r in results)
    kept = sum(r[2] for r in results)
    pruned = sum(r[3] for r in results)
    maximizers: list[tuple[int, dict[str, float]]] = []
    for b, keep, _, _ in results:
        if b == best:
            maximizers.extend(keep)
        else:
            pruned += len(keep)
    maximizers.sort(key=lambda iv: iv[0])

    if kept == 0:
        return EntailmentResult(entailed=True, vacuous=True, max_value=None,
                                counterexample=None, counterexamples=[], explored=problem.search_space,
                                kept=0, pruned=pruned, elapsed_ms=0.0, unsat=True)
    if best <= 0.0:
        return EntailmentResult(entailed=True, vacuous=True, max_value=0.0,
                                counterexample=None, counterexamples=[],
                                explored=problem.search_space, kept=kept,
                                pruned=pruned, elapsed_ms=0.0)
    bad = []
    for index, val in maximizers:
        d = _eval_on_valuation(axiom.rhs, val, problem.family, problem.scale)
        pw = float(problem.family.implies(best, d, problem.scale))
        if not compare(pw, axiom.cmp, axiom.threshold):
            bad.append(val)
    return EntailmentResult(entailed=not bad, vacuous=False, max_value=best,
                            counterexample=bad[0] if bad else None,
                            counterexamples=bad, explored=problem.search_space,
                            kept=kept, pruned=pruned, elapsed_ms=0.0)


def full_grid(scale: GradedScale, width: int) -> list[tuple[float, ...]]:
    """Every point of C_n^width in lexicographic order (canonical floats)."""
    vals = scale.values()
    return list(itertools.product(vals, repeat=width))


@dataclass
class CrossCheckReport:
    agrees: bool
    full_domain: bool
    note: str
    entailment: EntailmentResult
    model_check_holds: bool
    entail_counterexamples: list[tuple[float, ...]] = field(default_factory=list)
    model_counterexamples: list[tuple[float, ...]] = field(default_factory=list)


def cross_check(net, stimuli: Sequence[Sequence[float]], axiom: Inclusion,
                scale: GradedScale, family: CombinationFamily = GOEDEL_INVOLUTIVE,
                budget: int = 10 ** 8, jobs: int = 1) -> CrossCheckReport:
    """Entailment vs. model checking over a stimulus grid for one network.

    Over the full input grid the two procedures see the same canonical
    element set, so verdict and counterexample set must agree bit for bit;
    over a proper subset, model checking may miss counterexamples and only
    an informational comparison is made.
    """
    from .bridge import build_model, extract_kb

    kb, phi = extract_kb(net)
    ent = entails(kb, phi, axiom, scale, family=family, budget=budget, jobs=jobs)

    I = build_model(net, stimuli, scale=scale, family=family)
    mc = check_axiom(I, axiom)

    input_names = sorted(net.input_concepts)
    perm = [net.input_concepts.index(nm) for nm in input_names]
    rows = {}
    for sid, stim in zip(I.domain, stimuli):
        snapped = tuple(scale.quantize(float(stim[j])) for j in perm)
        rows[sid] = snapped
    seen = set(rows.values())
    full = len(seen) == len(stimuli) == (scale.n + 1) ** len(input_names)

    ent_ces = sorted(tuple(val[nm] for nm in input_names) for val in ent.counterexamples)
    mc_ces = sorted(rows[v.element] for v in mc.counterexamples)

    if full:
        agrees = (ent.entailed == mc.holds) and (ent_ces == mc_ces)
        note = "full-grid comparison: verdicts and counterexample sets must match"
    else:
        agrees = True
        note = ("stimulus set is a proper subset of the input grid; "
                "model checking may miss counterexamples")
    return CrossCheckReport(agrees=agrees, full_domain=full, note=note,
                            entailment=ent, model_check_holds=mc.holds,
                            entail_counterexamples=ent_ces,
                            model_counterexamples=mc_ces)
