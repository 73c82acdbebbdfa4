"""Randomized trials for the preferential-consequence postulates and the
model-compatibility hierarchy, plus the library of pinned counterexample
fixtures.

Suites are seed-deterministic: the i-th trial derives its own RNG from
(seed, i), so runs are reproducible bit for bit and any failing trial can be
serialized and replayed on its own.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .activations import BinaryStep, Logistic
from .bridge import build_model, extract_kb
from .concepts import And, Bot, ConceptExpr, Inclusion, Name, Not, Or, Top, Typ
from .degrees import GOEDEL, GOEDEL_INVOLUTIVE, CombinationFamily, GradedScale
from .interpretation import (Interpretation, check_axiom, eval_vector, to_json_dict,
                             typical_set)
from .network import Edge, Network, Unit
from .syntax import concept_to_text
from .weighted_kb import check_coherent, check_faithful, check_phi_coherent

KLM_POSTULATES = ("REFL", "LLE", "RW", "AND", "OR", "CM")
FT_PROPERTIES = ("ft1", "ft2", "ft3", "ft4", "ft5")


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    iterations: int = 1000
    domain_min: int = 2
    domain_max: int = 8
    concept_count: int = 4
    grid: int | None = 10          # degrees drawn from C_grid; None = raw floats
    family: CombinationFamily = GOEDEL
    depth: int = 3
    eps: float = 1e-9


def _trial_rng(cfg: GeneratorConfig, index: int) -> random.Random:
    return random.Random((cfg.seed << 20) ^ index)


def random_interpretation(rng: random.Random, cfg: GeneratorConfig,
                          names: Sequence[str]) -> Interpretation:
    d = rng.randint(cfg.domain_min, cfg.domain_max)
    domain = tuple(f"e{i}" for i in range(d))
    concepts = {}
    for name in names:
        if cfg.grid is not None:
            concepts[name] = np.array([rng.randint(0, cfg.grid) / cfg.grid
                                       for _ in range(d)])
        else:
            concepts[name] = np.array([rng.random() for _ in range(d)])
    return Interpretation(domain=domain, concepts=concepts, family=cfg.family,
                          eps=cfg.eps)


def random_role_interpretation(rng: random.Random, cfg: GeneratorConfig,
                               names: Sequence[str], roles: Sequence[str],
                               max_domain: int = 6) -> Interpretation:
    d = rng.randint(cfg.domain_min, min(cfg.domain_max, max_domain))
    base = random_interpretation(rng, GeneratorConfig(
        seed=cfg.seed, domain_min=d, domain_max=d, grid=cfg.grid,
        family=cfg.family, eps=cfg.eps), names)
    role_tables = {}
    for role in roles:
        if cfg.grid is not None:
            mat = np.array([[rng.randint(0, cfg.grid) / cfg.grid for _ in range(d)]
                            for _ in range(d)])
        else:
            mat = np.array([[rng.random() for _ in range(d)] for _ in range(d)])
        role_tables[role] = mat
    return Interpretation(domain=base.domain, concepts=dict(base.concepts),
                          roles=role_tables, family=cfg.family, eps=cfg.eps)


def random_concept(rng: random.Random, names: Sequence[str], depth: int = 3,
                   roles: Sequence[str] = ()) -> ConceptExpr:
    """A random role-free (or shallow role) concept, typicality-free."""
    if depth <= 0 or rng.random() < 0.35:
        r = rng.random()
        if r < 0.85:
            return Name(rng.choice(list(names)))
        return Top() if r < 0.93 else Bot()
    choices = ["not", "and", "or"]
    if roles:
        choices += ["some", "all"]
    op = rng.choice(choices)
    if op == "not":
        return Not(random_concept(rng, names, depth - 1, roles))
    if op in ("and", "or"):
        left = random_concept(rng, names, depth - 1, roles)
        right = random_concept(rng, names, depth - 1, roles)
        return And(left, right) if op == "and" else Or(left, right)
    from .concepts import Exists, Forall
    body = random_concept(rng, names, depth - 1, roles)
    role = rng.choice(list(roles))
    return Exists(role, body) if op == "some" else Forall(role, body)


def equal_extension_variant(rng: random.Random, c: ConceptExpr) -> ConceptExpr:
    """A syntactically different concept valid-equivalent to c in every
    interpretation (idempotence of the lattice operations, neutral elements)."""
    pick = rng.randrange(4)
    if pick == 0:
        return And(c, c)
    if pick == 1:
        return Or(c, c)
    if pick == 2:
        return And(c, Top())
    return Or(c, Bot())


# KLM postulates ---------------------------------------------------------------

def _holds(I: Interpretation, lhs: ConceptExpr, rhs: ConceptExpr, k: float) -> bool:
    return check_axiom(I, Inclusion(lhs, rhs, ">=", k)).holds


@dataclass
class TrialOutcome:
    satisfied: bool
    vacuous: bool = False
    detail: str = ""


def check_klm(I: Interpretation, concepts: dict[str, ConceptExpr],
              k: float = 1.0, rng: random.Random | None = None
              ) -> dict[str, TrialOutcome]:
    """One trial of the six preferential-consequence postulates at threshold k.

    The logical-equivalence premise of LLE is instantiated with a variant of A
    that is valid-equivalent to it; the valid-inclusion premise of RW with
    D := C or E, which every max-disjunction interpretation satisfies.
    """
    rng = rng or random.Random(0)
    A, B, C, D, E = (concepts[x] for x in "ABCDE")
    out: dict[str, TrialOutcome] = {}

    out["REFL"] = TrialOutcome(_holds(I, Typ(A), A, k))

    b_variant = equal_extension_variant(rng, A)
    if _holds(I, Typ(A), C, k):
        out["LLE"] = TrialOutcome(_holds(I, Typ(b_variant), C, k))
    else:
        out["LLE"] = TrialOutcome(True, vacuous=True)

    if _holds(I, Typ(A), C, k):
        out["RW"] = TrialOutcome(_holds(I, Typ(A), Or(C, E), k))
    else:
        out["RW"] = TrialOutcome(True, vacuous=True)

    if _holds(I, Typ(A), C, k) and _holds(I, Typ(A), D, k):
        out["AND"] = TrialOutcome(_holds(I, Typ(A), And(C, D), k))
    else:
        out["AND"] = TrialOutcome(True, vacuous=True)

    if _holds(I, Typ(A), C, k) and _holds(I, Typ(B), C, k):
        out["OR"] = TrialOutcome(_holds(I, Typ(Or(A, B)), C, k))
    else:
        out["OR"] = TrialOutcome(True, vacuous=True)

    if _holds(I, Typ(A), D, k) and _holds(I, Typ(A), C, k):
        out["CM"] = TrialOutcome(_holds(I, Typ(And(A, D)), C, k))
    else:
        out["CM"] = TrialOutcome(True, vacuous=True)
    return out


def check_ft(I: Interpretation, concepts: dict[str, ConceptExpr]) -> dict[str, TrialOutcome]:
    """One trial of the five typicality-operator properties (threshold 1)."""
    A, B, D = concepts["A"], concepts["B"], concepts["D"]
    out: dict[str, TrialOutcome] = {}
    out["ft1"] = TrialOutcome(_holds(I, Typ(A), A, 1.0))

    if not typical_set(I, A):
        av = eval_vector(I, A)
        out["ft2"] = TrialOutcome(bool((av == 0.0).all()))
    else:
        out["ft2"] = TrialOutcome(True, vacuous=True)

    if _holds(I, Typ(A), D, 1.0):
        ta = eval_vector(I, Typ(A))
        tad = eval_vector(I, Typ(And(A, D)))
        out["ft3"] = TrialOutcome(bool((ta == tad).all()))
    else:
        out["ft3"] = TrialOutcome(True, vacuous=True)

    out["ft4"] = TrialOutcome(_holds(I, Typ(Or(A, B)), Or(Typ(A), Typ(B)), 1.0))
    out["ft5"] = TrialOutcome(_holds(I, And(Typ(A), Typ(B)), Typ(Or(A, B)), 1.0))
    return out


@dataclass
class SuiteReport:
    suite: str
    trials: int
    violations: list[dict] = field(default_factory=list)
    vacuous: dict[str, int] = field(default_factory=dict)
    found: dict | None = None      # for bounded hunts: the witness, if any
    inconclusive: bool = False     # hunt budget exhausted without a find

    @property
    def ok(self) -> bool:
        return not self.violations

    def digest(self) -> str:
        payload = json.dumps(
            {"suite": self.suite, "trials": self.trials,
             "violations": self.violations, "vacuous": self.vacuous},
            sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "trials": self.trials, "ok": self.ok,
                "violations": self.violations, "vacuous": self.vacuous,
                "found": self.found, "inconclusive": self.inconclusive,
                "digest": self.digest()}


def _sample_trial(rng: random.Random, cfg: GeneratorConfig
                  ) -> tuple[Interpretation, dict[str, ConceptExpr]]:
    names = [f"N{i}" for i in range(cfg.concept_count)]
    I = random_interpretation(rng, cfg, names)
    concepts = {key: random_concept(rng, names, cfg.depth) for key in "ABCDE"}
    return I, concepts


def _violation_record(suite: str, index: int, postulate: str, I: Interpretation,
                      concepts: dict[str, ConceptExpr], k: float) -> dict:
    return {"suite": suite, "trial": index, "postulate": postulate, "k": k,
            "concepts": {key: concept_to_text(c) for key, c in concepts.items()},
            "interpretation": to_json_dict(I)}


def klm_suite(cfg: GeneratorConfig, k: float = 1.0) -> SuiteReport:
    report = SuiteReport(suite=f"klm(k={k})", trials=cfg.iterations)
    vac = {p: 0 for p in KLM_POSTULATES}
    for i in range(cfg.iterations):
        rng = _trial_rng(cfg, i)
        I, concepts = _sample_trial(rng, cfg)
        for postulate, outcome in check_klm(I, concepts, k, rng).items():
            if outcome.vacuous:
                vac[postulate] += 1
            if not outcome.satisfied:
                report.violations.append(
                    _violation_record(report.suite, i, postulate, I, concepts, k))
    report.vacuous = vac
    return report


def ft_suite(cfg: GeneratorConfig) -> SuiteReport:
    report = SuiteReport(suite="ft", trials=cfg.iterations)
    vac = {p: 0 for p in FT_PROPERTIES}
    for i in range(cfg.iterations):
        rng = _trial_rng(cfg, i)
        I, concepts = _sample_trial(rng, cfg)
        for prop, outcome in check_ft(I, concepts).items():
            if outcome.vacuous:
                vac[prop] += 1
            if not outcome.satisfied:
                report.violations.append(
                    _violation_record("ft", i, prop, I, concepts, 1.0))
    report.vacuous = vac
    return report


def find_cm_violation(cfg: GeneratorConfig) -> SuiteReport:
    """Bounded hunt for a Cautious Monotonicity failure at some k < 1.

    Absence of a find within the budget is inconclusive, not a pass: the
    suite only asserts that such failures exist, not how dense they are.
    """
    report = SuiteReport(suite="cm-hunt", trials=0)
    for i in range(cfg.iterations):
        rng = _trial_rng(cfg, i)
        I, concepts = _sample_trial(rng, cfg)
        k = rng.randint(1, 9) / 10
        outcome = check_klm(I, concepts, k, rng)["CM"]
        report.trials = i + 1
        if not outcome.satisfied:
            report.found = _violation_record("cm-hunt", i, "CM", I, concepts, k)
            return report
    report.inconclusive = True
    return report


def find_andor_violation(cfg: GeneratorConfig) -> SuiteReport:
    """Bounded hunt for an AND/OR failure under a non-minimum t-norm family."""
    report = SuiteReport(suite=f"andor-hunt({cfg.family.name})", trials=0)
    for i in range(cfg.iterations):
        rng = _trial_rng(cfg, i)
        I, concepts = _sample_trial(rng, cfg)
        outcomes = check_klm(I, concepts, 1.0, rng)
        report.trials = i + 1
        for postulate in ("AND", "OR"):
            if not outcomes[postulate].satisfied:
                report.found = _violation_record(report.suite, i, postulate,
                                                 I, concepts, 1.0)
                return report
    report.inconclusive = True
    return report


# pinned fixtures ----------------------------------------------------------------

@dataclass
class RmFixtureReport:
    interpretation_goedel: Interpretation
    interpretation_involutive: Interpretation
    premise1_holds: bool
    premise2_fails_goedel: bool
    premise2_fails_involutive: bool
    premise2_value_goedel: float
    premise2_value_involutive: float
    conclusion_fails: bool
    conclusion_value: float
    conclusion_counterexample: str


def rm_fixture() -> RmFixtureReport:
    """The two-element model on which Rational Monotonicity fails.

    A is highest at x, so x is the unique typical A-element and T(A) <: C >= 1
    holds; T(A) <: not B >= 1 fails under both negations; and A and B peaks at
    z instead, where C is low, so T(A and B) <: C >= 1 fails with value 0.4.
    """
    concepts = {"A": np.array([0.8, 0.5]),
                "B": np.array([0.3, 0.6]),
                "C": np.array([0.9, 0.4])}
    I_g = Interpretation(domain=("x", "z"), concepts=dict(concepts), family=GOEDEL)
    I_i = Interpretation(domain=("x", "z"),
                         concepts={k: v.copy() for k, v in concepts.items()},
                         family=GOEDEL_INVOLUTIVE)
    A, B, C = Name("A"), Name("B"), Name("C")

    premise1 = check_axiom(I_g, Inclusion(Typ(A), C, ">=", 1.0))
    p2_g = check_axiom(I_g, Inclusion(Typ(A), Not(B), ">=", 1.0))
    p2_i = check_axiom(I_i, Inclusion(Typ(A), Not(B), ">=", 1.0))
    conclusion = check_axiom(I_g, Inclusion(Typ(And(A, B)), C, ">=", 1.0))
    ce = conclusion.counterexamples[0].element if conclusion.counterexamples else ""
    return RmFixtureReport(
        interpretation_goedel=I_g, interpretation_involutive=I_i,
        premise1_holds=premise1.holds,
        premise2_fails_goedel=not p2_g.holds,
        premise2_fails_involutive=not p2_i.holds,
        premise2_value_goedel=p2_g.value,
        premise2_value_involutive=p2_i.value,
        conclusion_fails=not conclusion.holds,
        conclusion_value=conclusion.value,
        conclusion_counterexample=ce)


def step_gap_fixture() -> tuple[Network, list[tuple[float, ...]]]:
    """A plateau network: faithfulness holds but coherence fails.

    The step unit maps both stimuli to 1, so neither is preferred to the
    other, yet their weight sums differ; the biconditional direction
    'heavier implies preferred' breaks while the faithful implication stays
    vacuously true.
    """
    net = Network(
        units=[Unit("j", name="In"),
               Unit("k", activation=BinaryStep(), name="Out")],
        edges=[Edge("j", "k", 1.0)],
        inputs=["j"])
    return net, [(0.3,), (0.1,)]


# model-compatibility hierarchy ----------------------------------------------------

def random_network(rng: random.Random, max_layers: int = 3, max_width: int = 6,
                   activation_factory: Callable[[random.Random], object] | None = None,
                   weight_span: float = 2.0, bias_span: float = 1.0) -> Network:
    """A random layered feedforward network with named units."""
    if activation_factory is None:
        activation_factory = lambda r: Logistic()
    n_inputs = rng.randint(1, max_width)
    layers = [[f"x{i}" for i in range(n_inputs)]]
    units = [Unit(uid, name=uid) for uid in layers[0]]
    edges: list[Edge] = []
    for li in range(1, rng.randint(1, max_layers) + 1):
        width = rng.randint(1, max_width)
        layer = []
        for j in range(width):
            uid = f"h{li}_{j}"
            units.append(Unit(uid, activation=activation_factory(rng),
                              bias=rng.uniform(-bias_span, bias_span), name=uid))
            for src in layers[li - 1]:
                edges.append(Edge(src, uid, rng.uniform(-weight_span, weight_span)))
            layer.append(uid)
        layers.append(layer)
    return Network(units=units, edges=edges, inputs=layers[0])


def random_stimuli(rng: random.Random, net: Network, count: int,
                   grid: int | None = None) -> list[list[float]]:
    rows = []
    for _ in range(count):
        if grid is not None:
            rows.append([rng.randint(0, grid) / grid for _ in net.inputs])
        else:
            rows.append([rng.random() for _ in net.inputs])
    return rows


@dataclass
class HierarchyReport:
    trials: int
    phi_failures: list[int] = field(default_factory=list)
    faithful_failures: list[int] = field(default_factory=list)
    coherent_failures: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.phi_failures or self.faithful_failures or self.coherent_failures)

    def to_dict(self) -> dict:
        return {"trials": self.trials, "ok": self.ok,
                "phiFailures": self.phi_failures,
                "faithfulFailures": self.faithful_failures,
                "coherentFailures": self.coherent_failures}


def hierarchy_trials(cfg: GeneratorConfig, max_stimuli: int = 50,
                     tol: float = 1e-9) -> HierarchyReport:
    """Random logistic networks must yield phi-coherent, coherent and
    faithful models of their own extracted knowledge bases."""
    report = HierarchyReport(trials=cfg.iterations)
    for i in range(cfg.iterations):
        rng = _trial_rng(cfg, i)
        net = random_network(rng)
        stimuli = random_stimuli(rng, net, rng.randint(1, max_stimuli))
        kb, phi = extract_kb(net)
        I = build_model(net, stimuli, family=cfg.family, eps=cfg.eps)
        if not check_phi_coherent(kb, I, phi, tol=tol).holds:
            report.phi_failures.append(i)
        if not check_faithful(kb, I).holds:
            report.faithful_failures.append(i)
        if not check_coherent(kb, I).holds:
            report.coherent_failures.append(i)
    return report
