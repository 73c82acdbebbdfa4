"""Entailment search vs. an independent brute-force oracle.

The oracle below re-derives everything from scratch: it walks the full value
grid over all concept names, keeps assignments satisfying the quantized
coherence equalities and the strict axioms, and then applies the typicality
semantics directly.  It shares no code with the search path beyond the
activation callables and the quantizer.
"""

import itertools
import math
import random

import pytest

from typilog.activations import Logistic
from typilog.bridge import build_model, extract_kb
from typilog.concepts import And, Bot, Inclusion, Name, Not, Or, Top, Typ
from typilog.degrees import GOEDEL_INVOLUTIVE, GradedScale
from typilog.entailment import (BudgetExceededError, EntailmentUnsupportedError,
                                cross_check, entails, enumerate_coherent, full_grid)
from typilog.harness import random_network
from typilog.syntax import parse_axiom, parse_kb
from typilog.weighted_kb import WeightedKb

from conftest import make_demo_network


# --- independent oracle -------------------------------------------------------

def oracle_eval(c, val):
    """Goedel-involutive evaluation of a role-free concept on one valuation."""
    if isinstance(c, Name):
        return val[c.name]
    if isinstance(c, Top):
        return 1.0
    if isinstance(c, Bot):
        return 0.0
    if isinstance(c, Not):
        return 1.0 - oracle_eval(c.sub, val)
    if isinstance(c, And):
        return min(oracle_eval(c.left, val), oracle_eval(c.right, val))
    if isinstance(c, Or):
        return max(oracle_eval(c.left, val), oracle_eval(c.right, val))
    raise AssertionError(f"oracle got {c!r}")


def oracle_quantize(v, n):
    if v <= 1 / (2 * n):
        return 0.0
    for i in range(1, n):
        if (2 * i - 1) / (2 * n) < v <= (2 * i + 1) / (2 * n):
            return i / n
    return 1.0


def oracle_valuations(kb, phi, n, extra_names=()):
    names = set(extra_names) | set(kb.distinguished)
    for entries in kb.document.weighted_blocks.values():
        for body, _ in entries:
            names |= {node.name for node in body.walk() if isinstance(node, Name)}
    for ax in kb.document.strict_axioms:
        for side in (ax.lhs, ax.rhs):
            names |= {node.name for node in side.walk() if isinstance(node, Name)}
    names = sorted(names)
    out = []
    for point in itertools.product([i / n for i in range(n + 1)], repeat=len(names)):
        val = dict(zip(names, point))
        ok = True
        for ci in kb.distinguished:
            s = 0.0
            for body, w in kb.document.weighted_blocks[ci]:
                s += w * oracle_eval(body, val)
            if val[ci] != oracle_quantize(phi[ci] if callable(phi[ci]) else None, n):
                pass
            if val[ci] != oracle_quantize(phi[ci](s), n):
                ok = False
                break
        if ok:
            for ax in kb.document.strict_axioms:
                lv, rv = oracle_eval(ax.lhs, val), oracle_eval(ax.rhs, val)
                pw = 1.0 if lv <= rv else rv
                holds = pw >= ax.threshold if ax.cmp == ">=" else pw > ax.threshold
                if not holds:
                    ok = False
                    break
        if ok:
            out.append(val)
    return names, out


def oracle_entails_typicality(kb, phi, lhs_body, rhs, cmp, alpha, n, extra_names=()):
    """Direct semantics of T(C) <: D cmp alpha on the canonical valuation set."""
    names, vals = oracle_valuations(kb, phi, n, extra_names)
    cs = [oracle_eval(lhs_body, v) for v in vals]
    positive = [c for c in cs if c > 0]
    pw = []
    if positive:
        m = max(positive)
        for c, v in zip(cs, vals):
            t = c if (c > 0 and c == m) else 0.0
            d = oracle_eval(rhs, v)
            pw.append(1.0 if t <= d else d)
    else:
        pw = [1.0] * len(vals)
    value = min(pw) if pw else 1.0
    if cmp == ">=":
        verdict = value >= alpha
        ces = [v for p, v in zip(pw, vals) if not p >= alpha]
    elif cmp == ">":
        verdict = value > alpha
        ces = [v for p, v in zip(pw, vals) if not p > alpha]
    else:
        verdict = value <= alpha if cmp == "<=" else value < alpha
        ces = []
    return verdict, ces, (max(positive) if positive else None)


# --- enumerate_coherent -------------------------------------------------------

class TestEnumerate:
    def test_demo_network_36_valuations(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        vals = list(enumerate_coherent(kb, phi, scale5))
        assert len(vals) == 36
        for val in vals:
            u = val["C_j1"] * 1.0 + val["C_j2"] * -1.0
            assert val["C_k"] == scale5.quantize(Logistic()(u))

    def test_strict_axiom_forces_zero(self, scale5):
        kb = WeightedKb.from_document(parse_kb(
            "A <: bot >= 1\nB { T(B) <: A @ 3 T(B) <: top @ -1 }"))
        phi = {"B": Logistic()}
        vals = list(enumerate_coherent(kb, phi, scale5))
        assert vals and all(v["A"] == 0.0 for v in vals)

    def test_empty_kb_single_concept_crisp(self):
        kb = WeightedKb.from_document(parse_kb(""))
        vals = list(enumerate_coherent(kb, {}, GradedScale(1), extra_names=["A"]))
        assert vals == [{"A": 0.0}, {"A": 1.0}]

    def test_matches_oracle_on_demo(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        names, expected = oracle_valuations(kb, phi, 5)
        got = list(enumerate_coherent(kb, phi, scale5))
        assert [tuple(v[n] for n in names) for v in got] == \
            [tuple(v[n] for n in names) for v in expected]

    def test_budget_aborts_loudly(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        with pytest.raises(BudgetExceededError) as err:
            list(enumerate_coherent(kb, phi, scale5, budget=10))
        assert err.value.search_space == 36

    def test_general_search_agrees_with_grid(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        grid = list(enumerate_coherent(kb, phi, scale5, mode="acyclic-grid"))
        general = list(enumerate_coherent(kb, phi, scale5, mode="general-search"))
        assert sorted(map(sorted, (v.items() for v in grid))) == \
            sorted(map(sorted, (v.items() for v in general)))

    def test_cyclic_kb_needs_general_search(self, scale5):
        kb = WeightedKb.from_document(parse_kb(
            "A { T(A) <: B @ 1 }\nB { T(B) <: A @ 1 }"))
        phi = {"A": Logistic(), "B": Logistic()}
        with pytest.raises(EntailmentUnsupportedError, match="cyclic"):
            list(enumerate_coherent(kb, phi, scale5, mode="acyclic-grid"))
        vals = list(enumerate_coherent(kb, phi, scale5, mode="general-search"))
        for v in vals:
            assert v["A"] == scale5.quantize(Logistic()(v["B"]))
            assert v["B"] == scale5.quantize(Logistic()(v["A"]))


# --- entails ------------------------------------------------------------------

class TestEntails:
    def test_reflexivity_for_any_kb(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        res = entails(kb, phi, parse_axiom("T(C_k) <: C_k >= 1"), scale5)
        assert res.entailed and not res.vacuous

    def test_demo_positive_query(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        res = entails(kb, phi, parse_axiom("T(C_k) <: C_j1 >= 1"), scale5)
        assert res.entailed
        assert res.max_value == 0.8  # sigma(1) quantized to C_5

    def test_demo_negative_query_with_counterexample(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        res = entails(kb, phi, parse_axiom("T(C_k) <: C_j2 >= 1/5"), scale5)
        assert not res.entailed
        assert res.counterexample == {"C_j1": 1.0, "C_j2": 0.0, "C_k": 0.8}

    def test_vacuous_query_flagged(self, scale5):
        kb = WeightedKb.from_document(parse_kb(
            "A <: bot >= 1\nB { T(B) <: A @ 1 T(B) <: top @ -40 }"))
        phi = {"B": Logistic()}
        res = entails(kb, phi, parse_axiom("T(A) <: B >= 1"), scale5)
        assert res.entailed and res.vacuous

    def test_unsatisfiable_kb_reported(self, scale5):
        kb = WeightedKb.from_document(parse_kb(
            "top <: bot >= 1\nB { T(B) <: top @ 0 }"))
        phi = {"B": Logistic()}
        res = entails(kb, phi, parse_axiom("T(B) <: B >= 1"), scale5)
        assert res.entailed and res.vacuous and res.unsat

    def test_matches_oracle_on_random_networks(self):
        rng = random.Random(77)
        for trial in range(12):
            n = rng.choice([2, 3, 4, 5])
            scale = GradedScale(n)
            net = random_network(rng, max_layers=2, max_width=3)
            if len(net.inputs) > 3 or (n + 1) ** len(net.inputs) > 4000:
                continue
            kb, phi = extract_kb(net)
            outputs = [u.name for u in net.computation_units]
            inputs = net.input_concepts
            body = Name(rng.choice(outputs))
            rhs = Or(Name(rng.choice(inputs)),
                     Not(Name(rng.choice(inputs)))) if rng.random() < 0.5 \
                else Name(rng.choice(inputs))
            k = rng.randint(1, n)
            ax = Inclusion(Typ(body), rhs, ">=", k / n)
            res = entails(kb, phi, ax, scale)
            verdict, ces, maxv = oracle_entails_typicality(
                kb, phi, body, rhs, ">=", k / n, n,
                extra_names=[body.name] + sorted(
                    {nd.name for nd in rhs.walk() if isinstance(nd, Name)}))
            assert res.entailed == verdict, f"trial {trial}"
            assert res.max_value == maxv
            got = sorted(tuple(sorted(v.items())) for v in res.counterexamples)
            want = sorted(tuple(sorted(v.items())) for v in ces)
            assert got == want

    def test_plain_inclusion_query(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        # some grid point has C_j1 = 1, C_j2 = 0: implication value 0
        res = entails(kb, phi, parse_axiom("C_j1 <: C_j2 >= 1/5"), scale5)
        assert not res.entailed

    def test_threshold_monotone(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        verdicts = []
        for k in range(1, 6):
            ax = Inclusion(Typ(Name("C_k")), Name("C_j1"), ">=", k / 5)
            verdicts.append(entails(kb, phi, ax, scale5).entailed)
        for k_ix in range(5):
            if verdicts[k_ix] is False:
                assert not any(verdicts[k_ix:])

    def test_jobs_do_not_change_anything(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        ax = parse_axiom("T(C_k) <: C_j2 >= 1/5")
        base = entails(kb, phi, ax, scale5, jobs=1)
        for jobs in (2, 3, 7):
            again = entails(kb, phi, ax, scale5, jobs=jobs)
            assert again.entailed == base.entailed
            assert again.counterexamples == base.counterexamples
            assert again.max_value == base.max_value

    def test_prune_matches_full_search(self):
        rng = random.Random(5)
        for _ in range(8):
            n = rng.choice([2, 3, 5])
            scale = GradedScale(n)
            net = random_network(rng, max_layers=2, max_width=3)
            if (n + 1) ** len(net.inputs) > 2000:
                continue
            kb, phi = extract_kb(net)
            body = rng.choice([u.name for u in net.computation_units])
            rhs = rng.choice(net.input_concepts)
            ax = Inclusion(Typ(Name(body)), Name(rhs), ">=", rng.randint(1, n) / n)
            full = entails(kb, phi, ax, scale)
            fast = entails(kb, phi, ax, scale, prune=True)
            assert fast.entailed == full.entailed
            assert fast.counterexamples == full.counterexamples
            assert fast.max_value == full.max_value

    def test_prune_rejects_typ_on_rhs(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        ax = Inclusion(Typ(Name("C_k")), Typ(Name("C_j1")), ">=", 1.0)
        with pytest.raises(EntailmentUnsupportedError):
            entails(kb, phi, ax, scale5, prune=True)

    def test_role_query_rejected(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        with pytest.raises(EntailmentUnsupportedError):
            entails(kb, phi, parse_axiom("T(C_k) <: some r . C_j1 >= 1"), scale5)

    def test_upper_bound_comparators(self, demo_network, scale5):
        kb, phi = extract_kb(demo_network)
        # min over maximizers of impl(T(C_k), C_j2) = 0 <= 2/5
        res = entails(kb, phi, parse_axiom("T(C_k) <: C_j2 <= 2/5"), scale5)
        assert res.entailed
        res2 = entails(kb, phi, parse_axiom("T(C_k) <: C_j1 < 1"), scale5)
        assert not res2.entailed


# --- cross check --------------------------------------------------------------

class TestCrossCheck:
    def test_full_grid_agreement_across_thresholds(self, demo_network, scale5):
        grid = full_grid(scale5, 2)
        for k in range(1, 6):
            for rhs in ("C_j1", "C_j2"):
                ax = Inclusion(Typ(Name("C_k")), Name(rhs), ">=", k / 5)
                rep = cross_check(demo_network, grid, ax, scale5)
                assert rep.full_domain
                assert rep.agrees, (k, rhs, rep.note)

    def test_subset_is_informational(self, demo_network, scale5):
        rep = cross_check(demo_network, [(1.0, 0.0), (0.2, 0.4)],
                          Inclusion(Typ(Name("C_k")), Name("C_j1"), ">=", 0.2),
                          scale5)
        assert not rep.full_domain
        assert "may miss" in rep.note

    def test_crisp_case(self, demo_network):
        scale = GradedScale(1)
        grid = full_grid(scale, 2)
        ax = Inclusion(Typ(Name("C_k")), Name("C_j1"), ">=", 1.0)
        rep = cross_check(demo_network, grid, ax, scale)
        assert rep.full_domain and rep.agrees
