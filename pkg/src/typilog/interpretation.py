"""Finite many-valued interpretations and the model checker that runs on them.

An interpretation stores one degree vector per concept name (indexed by the
domain) and one degree matrix per role name.  Concept evaluation is
compositional and vectorized over the whole domain; the typicality concept
T(C) assigns C's degree to the maximizers of C among the elements with
positive membership, and 0 elsewhere.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .concepts import (And, Axiom, Bot, ConceptAssertion, ConceptExpr, Exists, Forall,
                       Inclusion, Name, Not, Or, RoleAssertion, Top, Typ, compare)
from .degrees import (GOEDEL_INVOLUTIVE, CombinationFamily, DegreeError, GradedScale)


class UnknownNameError(KeyError):
    pass


LESS, GREATER, EQUAL = "less", "greater", "equal"


@dataclass(frozen=True)
class Interpretation:
    """Immutable finite fuzzy/graded interpretation.

    In graded mode every stored degree is a canonical i/n float, so degree
    comparisons, ties and thresholds are exact; in fuzzy mode typicality ties
    and preferences are compared up to ``eps``.
    """

    domain: tuple[str, ...]
    concepts: dict[str, np.ndarray]
    roles: dict[str, np.ndarray] = field(default_factory=dict)
    individuals: dict[str, int] = field(default_factory=dict)
    family: CombinationFamily = GOEDEL_INVOLUTIVE
    scale: GradedScale | None = None
    eps: float = 1e-9

    def __post_init__(self):
        if not self.domain:
            raise ValueError("domain must be non-empty")
        d = len(self.domain)
        if len(set(self.domain)) != d:
            raise ValueError("duplicate element ids in domain")
        for name, vec in self.concepts.items():
            arr = self._prepare(np.asarray(vec, dtype=np.float64), (d,), f"concept {name!r}")
            self.concepts[name] = arr
        for name, mat in self.roles.items():
            arr = self._prepare(np.asarray(mat, dtype=np.float64), (d, d), f"role {name!r}")
            self.roles[name] = arr
        for name, ix in self.individuals.items():
            if not (0 <= ix < d):
                raise ValueError(f"individual {name!r} maps outside the domain")

    def _prepare(self, arr: np.ndarray, shape: tuple, what: str) -> np.ndarray:
        if arr.shape != shape:
            raise ValueError(f"{what}: expected shape {shape}, got {arr.shape}")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0 or np.isnan(arr).any()):
            raise DegreeError(f"{what}: degrees outside [0, 1]")
        if self.scale is not None:
            nums = np.round(arr * self.scale.n)
            if not np.allclose(nums / self.scale.n, arr, rtol=0.0, atol=1e-9):
                raise DegreeError(f"{what}: degrees not on the 1/{self.scale.n} scale")
            arr = nums / self.scale.n
        arr.flags.writeable = False
        return arr

    @property
    def tie_eps(self) -> float:
        return 0.0 if self.scale is not None else self.eps

    def index(self, element: str) -> int:
        try:
            return self.domain.index(element)
        except ValueError:
            raise UnknownNameError(f"unknown domain element {element!r}") from None

    def individual_index(self, name: str) -> int:
        if name not in self.individuals:
            raise UnknownNameError(f"unknown individual {name!r}")
        return self.individuals[name]


def eval_vector(I: Interpretation, c: ConceptExpr) -> np.ndarray:
    """Degree of every domain element in concept c (length-|domain| vector)."""
    d = len(I.domain)
    if isinstance(c, Top):
        return np.ones(d)
    if isinstance(c, Bot):
        return np.zeros(d)
    if isinstance(c, Name):
        if c.name not in I.concepts:
            raise UnknownNameError(f"unknown concept name {c.name!r}")
        return I.concepts[c.name]
    if isinstance(c, Not):
        return np.asarray(I.family.neg(eval_vector(I, c.sub), I.scale), dtype=np.float64)
    if isinstance(c, And):
        return np.asarray(
            I.family.tnorm(eval_vector(I, c.left), eval_vector(I, c.right), I.scale))
    if isinstance(c, Or):
        return np.asarray(
            I.family.snorm(eval_vector(I, c.left), eval_vector(I, c.right), I.scale))
    if isinstance(c, (Exists, Forall)):
        if c.role not in I.roles:
            raise UnknownNameError(f"unknown role name {c.role!r}")
        R = I.roles[c.role]
        v = eval_vector(I, c.sub)
        if isinstance(c, Exists):
            # sup_y r(x,y) (x) C(y), attained on the finite domain
            return np.asarray(I.family.tnorm(R, v[None, :], I.scale)).max(axis=1)
        return np.asarray(I.family.implies(R, v[None, :], I.scale)).min(axis=1)
    if isinstance(c, Typ):
        v = eval_vector(I, c.sub)
        positive = v > 0.0
        if not positive.any():
            return np.zeros(d)
        m = v.max()
        typical = positive & (v >= m - I.tie_eps)
        return np.where(typical, v, 0.0)
    raise TypeError(f"unknown concept node {c!r}")


def eval_concept(I: Interpretation, c: ConceptExpr, element: str) -> float:
    return float(eval_vector(I, c)[I.index(element)])


def typical_set(I: Interpretation, c: ConceptExpr) -> list[str]:
    """The elements with maximal positive membership in c (empty iff c is 0)."""
    v = eval_vector(I, c)
    positive = v > 0.0
    if not positive.any():
        return []
    m = v.max()
    mask = positive & (v >= m - I.tie_eps)
    return [self_id for self_id, keep in zip(I.domain, mask) if keep]


def preference(I: Interpretation, c: ConceptExpr, x: str, y: str) -> str:
    """x <_C y iff C(x) > C(y): 'less' means x is strictly more typical."""
    v = eval_vector(I, c)
    dx, dy = v[I.index(x)], v[I.index(y)]
    if dx > dy + I.tie_eps:
        return LESS
    if dy > dx + I.tie_eps:
        return GREATER
    return EQUAL


@dataclass
class Violation:
    element: str
    lhs: float
    rhs: float
    pointwise: float

    def to_dict(self) -> dict:
        return {"element": self.element, "lhs": self.lhs, "rhs": self.rhs,
                "pointwise": self.pointwise}


@dataclass
class AxiomCheck:
    holds: bool
    value: float
    counterexamples: list[Violation] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"holds": self.holds, "value": self.value,
                "counterexamples": [v.to_dict() for v in self.counterexamples]}


def check_axiom(I: Interpretation, ax: Axiom) -> AxiomCheck:
    """Decide whether the interpretation satisfies a graded axiom.

    For inclusions the axiom value is the pointwise-implication minimum over
    the domain.  With a >= / > threshold the counterexample list holds every
    element violating the pointwise bound (sorted by violation size, then
    element id); with <= / < it holds one witness establishing the bound.
    """
    if isinstance(ax, Inclusion):
        lv = eval_vector(I, ax.lhs)
        rv = eval_vector(I, ax.rhs)
        pw = np.asarray(I.family.implies(lv, rv, I.scale), dtype=np.float64)
        value = float(pw.min())
        holds = compare(value, ax.cmp, ax.threshold)
        ces: list[Violation] = []
        if ax.cmp in (">=", ">"):
            bad = ~(pw >= ax.threshold) if ax.cmp == ">=" else ~(pw > ax.threshold)
            order = sorted(np.nonzero(bad)[0],
                           key=lambda i: (-(ax.threshold - pw[i]), I.domain[i]))
            ces = [Violation(I.domain[i], float(lv[i]), float(rv[i]), float(pw[i]))
                   for i in order]
        elif holds:  # <= / <: one witness attaining the bound
            i = int(np.argmin(pw))
            ces = [Violation(I.domain[i], float(lv[i]), float(rv[i]), float(pw[i]))]
        return AxiomCheck(holds, value, ces)
    if isinstance(ax, ConceptAssertion):
        ix = I.individual_index(ax.individual)
        value = float(eval_vector(I, ax.concept)[ix])
        holds = compare(value, ax.cmp, ax.threshold)
        ces = [] if holds else [Violation(I.domain[ix], value, ax.threshold, value)]
        return AxiomCheck(holds, value, ces)
    if isinstance(ax, RoleAssertion):
        if ax.role not in I.roles:
            raise UnknownNameError(f"unknown role name {ax.role!r}")
        value = float(I.roles[ax.role][I.individual_index(ax.subject),
                                       I.individual_index(ax.target)])
        holds = compare(value, ax.cmp, ax.threshold)
        ces = [] if holds else [Violation(ax.subject, value, ax.threshold, value)]
        return AxiomCheck(holds, value, ces)
    raise TypeError(f"unknown axiom {ax!r}")


def satisfies_all(I: Interpretation, axioms: Iterable[Axiom]) -> list[tuple[Axiom, AxiomCheck]]:
    return [(ax, res) for ax in axioms if not (res := check_axiom(I, ax)).holds]


def threshold_sweep(I: Interpretation, inclusions: Sequence[tuple[ConceptExpr, ConceptExpr]],
                    numerators: Sequence[int], scale: GradedScale) -> list[dict]:
    """Counterexample counts for T-style inclusions over a threshold sweep.

    One row per (lhs, rhs) pair: the count of counterexamples to
    ``lhs <: rhs >= k/n`` for each k, plus the typical-set size of the lhs.
    """
    from .syntax import concept_to_text

    rows = []
    for lhs, rhs in inclusions:
        counts = {}
        for k in numerators:
            res = check_axiom(I, Inclusion(lhs, rhs, ">=", k / scale.n))
            counts[k] = len(res.counterexamples)
        target = lhs.sub if isinstance(lhs, Typ) else lhs
        rows.append({
            "lhs": concept_to_text(lhs),
            "rhs": concept_to_text(rhs),
            "counts": counts,
            "typical": len(typical_set(I, target)),
        })
    return rows


# persistence -----------------------------------------------------------------

def to_json_dict(I: Interpretation) -> dict:
    out: dict = {
        "domain": list(I.domain),
        "concepts": {k: v.tolist() for k, v in I.concepts.items()},
        "roles": {k: v.tolist() for k, v in I.roles.items()},
        "individuals": dict(I.individuals),
    }
    if I.scale is not None:
        out["scale"] = I.scale.n
    return out


def from_json_dict(d: Mapping, family: CombinationFamily = GOEDEL_INVOLUTIVE,
                   eps: float = 1e-9) -> Interpretation:
    scale = GradedScale(int(d["scale"])) if "scale" in d and d["scale"] else None
    return Interpretation(
        domain=tuple(str(e) for e in d["domain"]),
        concepts={k: np.asarray(v, dtype=np.float64) for k, v in d.get("concepts", {}).items()},
        roles={k: np.asarray(v, dtype=np.float64) for k, v in d.get("roles", {}).items()},
        individuals={k: int(v) for k, v in d.get("individuals", {}).items()},
        family=family, scale=scale, eps=eps)


def save_json(I: Interpretation, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_json_dict(I), indent=1), encoding="utf-8")


def load_json(path: str | Path, family: CombinationFamily = GOEDEL_INVOLUTIVE,
              eps: float = 1e-9) -> Interpretation:
    return from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")),
                          family=family, eps=eps)


def to_csv(I: Interpretation) -> str:
    """Role-free matrix form: one row per element, one column per concept."""
    if I.roles:
        raise ValueError("CSV form only covers role-free interpretations")
    buf = io.StringIO()
    writer = csv.writer(buf)
    names = list(I.concepts)
    writer.writerow(["element", *names])
    for i, el in enumerate(I.domain):
        writer.writerow([el, *(repr(float(I.concepts[n][i])) for n in names)])
    return buf.getvalue()


def from_csv(text: str, family: CombinationFamily = GOEDEL_INVOLUTIVE,
             scale: GradedScale | None = None, eps: float = 1e-9) -> Interpretation:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError("empty CSV")
    header = rows[0]
    if header and header[0] == "element":
        names = header[1:]
        ids = [r[0] for r in rows[1:]]
        data = [[float(v) for v in r[1:]] for r in rows[1:]]
    else:
        names = header
        ids = [f"s{i}" for i in range(len(rows) - 1)]
        data = [[float(v) for v in r] for r in rows[1:]]
    cols = np.asarray(data, dtype=np.float64)
    return Interpretation(
        domain=tuple(ids),
        concepts={n: cols[:, j].copy() for j, n in enumerate(names)},
        family=family, scale=scale, eps=eps)
