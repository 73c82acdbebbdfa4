"""Abstract syntax for concept expressions and graded axioms.

The concept language is boolean ALC plus a typicality operator T(.) that may
appear anywhere in an expression except nested inside another T(.).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .degrees import check_degree


class NestedTypicalityError(ValueError):
    """T(.) occurred inside the argument of another T(.)."""


@dataclass(frozen=True)
class ConceptExpr:
    def walk(self) -> Iterator["ConceptExpr"]:
        yield self
        for child in self.children():
            yield from child.walk()

    def children(self) -> tuple["ConceptExpr", ...]:
        return ()


@dataclass(frozen=True)
class Top(ConceptExpr):
    pass


@dataclass(frozen=True)
class Bot(ConceptExpr):
    pass


@dataclass(frozen=True)
class Name(ConceptExpr):
    name: str


@dataclass(frozen=True)
class Not(ConceptExpr):
    sub: ConceptExpr

    def children(self):
        return (self.sub,)


@dataclass(frozen=True)
class And(ConceptExpr):
    left: ConceptExpr
    right: ConceptExpr

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Or(ConceptExpr):
    left: ConceptExpr
    right: ConceptExpr

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Exists(ConceptExpr):
    role: str
    sub: ConceptExpr

    def children(self):
        return (self.sub,)


@dataclass(frozen=True)
class Forall(ConceptExpr):
    role: str
    sub: ConceptExpr

    def children(self):
        return (self.sub,)


@dataclass(frozen=True)
class Typ(ConceptExpr):
    sub: ConceptExpr

    def __post_init__(self):
        if any(isinstance(node, Typ) for node in self.sub.walk()):
            raise NestedTypicalityError("typicality operators cannot be nested")

    def children(self):
        return (self.sub,)


def concept_names(c: ConceptExpr) -> set[str]:
    return {node.name for node in c.walk() if isinstance(node, Name)}


def role_names(c: ConceptExpr) -> set[str]:
    return {node.role for node in c.walk() if isinstance(node, (Exists, Forall))}


def has_roles(c: ConceptExpr) -> bool:
    return any(isinstance(node, (Exists, Forall)) for node in c.walk())


def has_typ(c: ConceptExpr) -> bool:
    return any(isinstance(node, Typ) for node in c.walk())


COMPARATORS = (">=", "<=", ">", "<")


def compare(value: float, cmp: str, threshold: float) -> bool:
    if cmp == ">=":
        return value >= threshold
    if cmp == "<=":
        return value <= threshold
    if cmp == ">":
        return value > threshold
    if cmp == "<":
        return value < threshold
    raise ValueError(f"unknown comparator {cmp!r}")


def _check_cmp(cmp: str) -> str:
    if cmp not in COMPARATORS:
        raise ValueError(f"comparator must be one of {COMPARATORS}, got {cmp!r}")
    return cmp


@dataclass(frozen=True)
class Inclusion:
    lhs: ConceptExpr
    rhs: ConceptExpr
    cmp: str
    threshold: float

    def __post_init__(self):
        _check_cmp(self.cmp)
        check_degree(self.threshold)


@dataclass(frozen=True)
class ConceptAssertion:
    concept: ConceptExpr
    individual: str
    cmp: str
    threshold: float

    def __post_init__(self):
        _check_cmp(self.cmp)
        check_degree(self.threshold)


@dataclass(frozen=True)
class RoleAssertion:
    role: str
    subject: str
    target: str
    cmp: str
    threshold: float

    def __post_init__(self):
        _check_cmp(self.cmp)
        check_degree(self.threshold)


Axiom = Union[Inclusion, ConceptAssertion, RoleAssertion]


def axiom_concepts(ax: Axiom) -> set[str]:
    if isinstance(ax, Inclusion):
        return concept_names(ax.lhs) | concept_names(ax.rhs)
    if isinstance(ax, ConceptAssertion):
        return concept_names(ax.concept)
    return set()


def axiom_has_roles(ax: Axiom) -> bool:
    if isinstance(ax, Inclusion):
        return has_roles(ax.lhs) or has_roles(ax.rhs)
    if isinstance(ax, ConceptAssertion):
        return has_roles(ax.concept)
    return True
