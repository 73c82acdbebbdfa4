import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from typilog.concepts import And, Inclusion, Name, Not, Top, Typ
from typilog.degrees import GOEDEL, GOEDEL_INVOLUTIVE, GradedScale
from typilog.interpretation import (EQUAL, GREATER, LESS, Interpretation,
                                    UnknownNameError, check_axiom, eval_concept,
                                    eval_vector, from_csv, from_json_dict, preference,
                                    to_csv, to_json_dict, typical_set)
from typilog.syntax import parse_axiom, parse_concept

from conftest import make_penguin_interpretation


def rm_interpretation(family=GOEDEL):
    return Interpretation(
        domain=("x", "z"),
        concepts={"A": np.array([0.8, 0.5]), "B": np.array([0.3, 0.6]),
                  "C": np.array([0.9, 0.4])},
        family=family)


class TestEvalConcept:
    def test_tall_parent_example(self, tall_interpretation):
        c = parse_concept("some hasParent . Tall")
        assert eval_concept(tall_interpretation, c, "bob") == 0.9
        assert eval_concept(tall_interpretation, c, "mary") == 0.0

    def test_top_everywhere(self, tall_interpretation):
        assert eval_concept(tall_interpretation, Top(), "mary") == 1.0

    def test_typicality_values(self):
        I = rm_interpretation()
        assert eval_concept(I, Typ(Name("A")), "x") == 0.8
        assert eval_concept(I, Typ(Name("A")), "z") == 0.0

    def test_forall(self, tall_interpretation):
        # every hasParent-successor of bob is Tall to degree >= 0.5
        c = parse_concept("all hasParent . Tall")
        # goedel implication: min over y of r(bob,y) |> Tall(y) = min(0.5, 0.9, 1...) = 0.5
        assert eval_concept(tall_interpretation, c, "bob") == 0.5

    def test_unknown_names(self, tall_interpretation):
        with pytest.raises(UnknownNameError):
            eval_concept(tall_interpretation, Name("Nope"), "bob")
        with pytest.raises(UnknownNameError):
            eval_concept(tall_interpretation, parse_concept("some nope . Tall"), "bob")


class TestTypicalSet:
    def test_empty_concept(self):
        I = rm_interpretation()
        assert typical_set(I, And(Name("A"), Not(Name("A")))) == []  # goedel: min(a, neg a)=0

    def test_rm_conjunction(self):
        I = rm_interpretation()
        c = And(Name("A"), Name("B"))
        assert typical_set(I, c) == ["z"]
        assert eval_concept(I, Typ(c), "z") == 0.5

    def test_constant_concept_all_typical(self):
        I = Interpretation(domain=("a", "b", "c"),
                           concepts={"K": np.array([0.4, 0.4, 0.4])}, family=GOEDEL)
        assert typical_set(I, Name("K")) == ["a", "b", "c"]

    def test_fuzzy_tie_tolerance(self):
        I = Interpretation(domain=("a", "b"),
                           concepts={"K": np.array([0.5, 0.5 - 1e-12])},
                           family=GOEDEL, eps=1e-9)
        assert typical_set(I, Name("K")) == ["a", "b"]
        strict = Interpretation(domain=("a", "b"),
                                concepts={"K": np.array([0.5, 0.5 - 1e-12])},
                                family=GOEDEL, eps=0.0)
        assert typical_set(strict, Name("K")) == ["a"]


class TestCheckAxiom:
    def test_tall_inclusion_value(self, tall_interpretation):
        ax = parse_axiom("some hasParent . Tall <: Tall >= 0.7")
        res = check_axiom(tall_interpretation, ax)
        assert res.holds and res.value == 0.8 and res.counterexamples == []

    def test_rm_conclusion_counterexample(self):
        res = check_axiom(rm_interpretation(), parse_axiom("T(A and B) <: C >= 1"))
        assert not res.holds
        assert res.value == 0.4
        assert [v.element for v in res.counterexamples] == ["z"]

    def test_reflexivity_holds_everywhere(self):
        rng = random.Random(4)
        for _ in range(50):
            d = rng.randint(1, 6)
            I = Interpretation(
                domain=tuple(f"e{i}" for i in range(d)),
                concepts={"A": np.array([rng.randint(0, 10) / 10 for _ in range(d)])},
                family=GOEDEL)
            assert check_axiom(I, parse_axiom("T(A) <: A >= 1")).holds

    def test_upper_bound_witness(self):
        I = rm_interpretation()
        res = check_axiom(I, parse_axiom("T(A and B) <: C <= 0.5"))
        assert res.holds
        assert [v.element for v in res.counterexamples] == ["z"]
        res2 = check_axiom(I, parse_axiom("T(A and B) <: C <= 0.3"))
        assert not res2.holds and res2.counterexamples == []

    def test_assertions(self, tall_interpretation):
        assert check_axiom(tall_interpretation, parse_axiom("Tall(tom) >= 0.9")).holds
        assert not check_axiom(tall_interpretation, parse_axiom("Tall(mary) > 0.5")).holds
        assert check_axiom(tall_interpretation,
                           parse_axiom("hasParent(bob,mary) >= 1")).holds

    def test_counterexamples_sorted_by_magnitude(self):
        I = Interpretation(
            domain=("a", "b", "c"),
            concepts={"L": np.array([1.0, 1.0, 1.0]), "R": np.array([0.6, 0.2, 0.4])},
            family=GOEDEL)
        res = check_axiom(I, parse_axiom("L <: R >= 0.7"))
        assert [v.element for v in res.counterexamples] == ["b", "c", "a"]

    def test_pointwise_decomposition_oracle(self):
        rng = random.Random(9)
        names = ["A", "B", "C"]
        for _ in range(30):
            d = rng.randint(1, 6)
            I = Interpretation(
                domain=tuple(f"e{i}" for i in range(d)),
                concepts={n: np.array([rng.randint(0, 10) / 10 for _ in range(d)])
                          for n in names},
                family=GOEDEL_INVOLUTIVE)
            lhs = parse_concept("A and not B")
            rhs = parse_concept("C or B")
            res = check_axiom(I, Inclusion(lhs, rhs, ">=", 0.5))
            # naive per-element re-evaluation
            naive = min(float(I.family.implies(eval_concept(I, lhs, e),
                                               eval_concept(I, rhs, e)))
                        for e in I.domain)
            assert res.value == naive


class TestPreference:
    def test_bird_preference(self, penguin_interpretation):
        assert preference(penguin_interpretation, Name("Bird"), "reddy", "opus") == LESS
        assert preference(penguin_interpretation, Name("Penguin"), "opus", "reddy") == LESS
        assert preference(penguin_interpretation, Name("Penguin"), "reddy", "opus") == GREATER

    def test_reflexive_equal(self, penguin_interpretation):
        assert preference(penguin_interpretation, Name("Bird"), "reddy", "reddy") == EQUAL


class TestInvariants:
    def test_modularity(self):
        rng = random.Random(13)
        for _ in range(100):
            d = rng.randint(3, 7)
            I = Interpretation(
                domain=tuple(f"e{i}" for i in range(d)),
                concepts={"A": np.array([rng.randint(0, 10) / 10 for _ in range(d)])},
                family=GOEDEL)
            c = Name("A")
            for x in I.domain:
                for y in I.domain:
                    if preference(I, c, x, y) != LESS:
                        continue
                    for z in I.domain:
                        assert (preference(I, c, x, z) == LESS
                                or preference(I, c, z, y) == LESS)

    def test_typicality_floor(self):
        rng = random.Random(21)
        for _ in range(100):
            d = rng.randint(1, 6)
            vec = np.array([rng.choice([0.0, 0.0, rng.random()]) for _ in range(d)])
            I = Interpretation(domain=tuple(f"e{i}" for i in range(d)),
                               concepts={"A": vec}, family=GOEDEL)
            if (vec > 0).any():
                assert typical_set(I, Name("A")) != []
            else:
                assert typical_set(I, Name("A")) == []

    def test_graded_closure_goedel(self):
        rng = random.Random(7)
        scale = GradedScale(5)
        d = 6
        I = Interpretation(
            domain=tuple(f"e{i}" for i in range(d)),
            concepts={n: np.array([rng.randint(0, 5) / 5 for _ in range(d)])
                      for n in "ABC"},
            family=GOEDEL_INVOLUTIVE, scale=scale)
        c = parse_concept("T(not A and (B or not C)) or (A and not B)")
        out = eval_vector(I, c)
        assert all(scale.contains(float(v)) for v in out)


class TestConstructionAndIo:
    def test_empty_domain_rejected(self):
        with pytest.raises(ValueError):
            Interpretation(domain=(), concepts={})

    def test_degree_range_checked(self):
        with pytest.raises(Exception):
            Interpretation(domain=("a",), concepts={"A": np.array([1.5])})

    def test_off_scale_rejected(self):
        with pytest.raises(Exception):
            Interpretation(domain=("a",), concepts={"A": np.array([0.45])},
                           scale=GradedScale(5))

    def test_json_round_trip(self, penguin_interpretation):
        blob = json.dumps(to_json_dict(penguin_interpretation))
        back = from_json_dict(json.loads(blob), family=GOEDEL)
        assert back.domain == penguin_interpretation.domain
        for k, v in penguin_interpretation.concepts.items():
            assert (back.concepts[k] == v).all()
        for k, v in penguin_interpretation.roles.items():
            assert (back.roles[k] == v).all()
        assert back.individuals == penguin_interpretation.individuals

    def test_json_scale_preserved(self):
        I = Interpretation(domain=("a",), concepts={"A": np.array([0.4])},
                           scale=GradedScale(5))
        back = from_json_dict(to_json_dict(I))
        assert back.scale == GradedScale(5)

    def test_csv_round_trip(self):
        I = Interpretation(domain=("s0", "s1"),
                           concepts={"A": np.array([0.25, 1.0]),
                                     "B": np.array([0.0, 0.125])},
                           family=GOEDEL)
        back = from_csv(to_csv(I), family=GOEDEL)
        assert back.domain == I.domain
        assert (back.concepts["A"] == I.concepts["A"]).all()
        assert (back.concepts["B"] == I.concepts["B"]).all()

    def test_csv_without_element_column(self):
        back = from_csv("A,B\n0.5,1\n0,0.25\n")
        assert back.domain == ("s0", "s1")
        assert back.concepts["A"].tolist() == [0.5, 0.0]

    def test_csv_rejects_roles(self, tall_interpretation):
        with pytest.raises(ValueError):
            to_csv(tall_interpretation)


DEG = st.integers(min_value=0, max_value=10).map(lambda k: k / 10)


@given(st.lists(DEG, min_size=1, max_size=6))
@settings(max_examples=200)
def test_typ_of_typ_free_concept_is_idempotent_selection(vals):
    I = Interpretation(domain=tuple(f"e{i}" for i in range(len(vals))),
                       concepts={"A": np.array(vals)}, family=GOEDEL)
    tv = eval_vector(I, Typ(Name("A")))
    positives = [v for v in vals if v > 0]
    if positives:
        m = max(positives)
        assert [float(x) for x in tv] == [v if v == m else 0.0 for v in vals]
    else:
        assert (tv == 0).all()
