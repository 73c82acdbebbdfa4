"""Truth degrees on [0,1], finite graded scales, and combination-function families.

Continuous degrees are plain 64-bit floats.  Graded degrees live on the scale
C_n = {0, 1/n, ..., n/n} and are always kept as *canonical* floats i/n, which
makes comparisons and argmax exact: the map i -> float(i/n) is strictly
monotone and injective for any practical n, and selection operations
(min/max/where) never leave the canonical set.  The only operations that need
arithmetic (involutive negation, Lukasiewicz sums) recover the integer
numerators, compute there, and divide back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class DegreeError(ValueError):
    """A truth degree escaped [0,1], or a graded value is off its scale."""


class ScaleClosureError(ValueError):
    """A combination function does not map the graded scale into itself."""


def check_degree(v: float) -> float:
    v = float(v)
    if not (0.0 <= v <= 1.0):  # NaN fails both comparisons
        raise DegreeError(f"degree {v!r} outside [0, 1]")
    return v


@dataclass(frozen=True)
class GradedScale:
    """The truth space {0, 1/n, ..., n/n} with nearest-value quantization.

    Quantization rounds v to the closest scale point; exact midpoints round
    down: 0 for v <= 1/2n, i/n for (2i-1)/2n < v <= (2i+1)/2n, 1 above
    (2n-1)/2n.  The error is therefore at most 1/2n.
    """

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"scale denominator must be a positive integer, got {self.n!r}")

    def quantize_num(self, v: float) -> int:
        check_degree(v)
        i = math.ceil(v * self.n - 0.5)
        return min(max(i, 0), self.n)

    def quantize(self, v: float) -> float:
        return self.quantize_num(v) / self.n

    def quantize_array(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.float64)
        if a.size and (a.min() < 0.0 or a.max() > 1.0):
            raise DegreeError("degrees outside [0, 1]")
        i = np.ceil(a * self.n - 0.5)
        return np.clip(i, 0, self.n) / self.n

    def numerator(self, v) -> int | np.ndarray:
        """Exact recovery of i from a canonical i/n value (array-friendly)."""
        a = np.asarray(v, dtype=np.float64)
        i = np.round(a * self.n)
        if not np.allclose(i / self.n, a, rtol=0.0, atol=1e-9):
            raise DegreeError(f"value(s) not on the 1/{self.n} scale")
        return int(i) if np.isscalar(v) or a.ndim == 0 else i

    def canonical(self, v) -> np.ndarray | float:
        """Snap values already on the scale to canonical i/n floats."""
        i = self.numerator(v)
        out = np.asarray(i, dtype=np.float64) / self.n
        return float(out) if out.ndim == 0 else out

    def contains(self, v: float) -> bool:
        try:
            self.numerator(v)
        except DegreeError:
            return False
        return True

    def values(self) -> list[float]:
        return [i / self.n for i in range(self.n + 1)]


class CombinationFamily:
    """A (t-norm, s-norm, implication, negation) quadruple.

    All operations accept scalars or numpy arrays and broadcast.  When a
    ``scale`` is passed, inputs are assumed canonical on that scale and the
    result is canonical too; families whose arithmetic leaves the scale raise
    ScaleClosureError.
    """

    name: str = "abstract"

    def tnorm(self, a, b, scale: GradedScale | None = None):
        raise NotImplementedError

    def snorm(self, a, b, scale: GradedScale | None = None):
        raise NotImplementedError

    def implies(self, a, b, scale: GradedScale | None = None):
        raise NotImplementedError

    def neg(self, a, scale: GradedScale | None = None):
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover
        return f"<family {self.name}>"


class _Goedel(CombinationFamily):
    name = "goedel"

    def tnorm(self, a, b, scale=None):
        return np.minimum(a, b)

    def snorm(self, a, b, scale=None):
        return np.maximum(a, b)

    def implies(self, a, b, scale=None):
        a, b = np.asarray(a, np.float64), np.asarray(b, np.float64)
        return np.where(a <= b, 1.0, b)

    def neg(self, a, scale=None):
        a = np.asarray(a, np.float64)
        return np.where(a == 0.0, 1.0, 0.0)


class _GoedelInvolutive(_Goedel):
    name = "goedel-involutive"

    def neg(self, a, scale=None):
        if scale is not None:
            return (scale.n - np.round(np.asarray(a, np.float64) * scale.n)) / scale.n
        return 1.0 - np.asarray(a, np.float64)


class _Lukasiewicz(CombinationFamily):
    name = "lukasiewicz"

    def tnorm(self, a, b, scale=None):
        if scale is not None:
            ia = np.round(np.asarray(a, np.float64) * scale.n)
            ib = np.round(np.asarray(b, np.float64) * scale.n)
            return np.maximum(ia + ib - scale.n, 0.0) / scale.n
        return np.maximum(np.asarray(a, np.float64) + b - 1.0, 0.0)

    def snorm(self, a, b, scale=None):
        if scale is not None:
            ia = np.round(np.asarray(a, np.float64) * scale.n)
            ib = np.round(np.asarray(b, np.float64) * scale.n)
            return np.minimum(ia + ib, scale.n) / scale.n
        return np.minimum(np.asarray(a, np.float64) + b, 1.0)

    def implies(self, a, b, scale=None):
        if scale is not None:
            ia = np.round(np.asarray(a, np.float64) * scale.n)
            ib = np.round(np.asarray(b, np.float64) * scale.n)
            return np.minimum(scale.n - ia + ib, scale.n) / scale.n
        return np.minimum(1.0 - np.asarray(a, np.float64) + b, 1.0)

    def neg(self, a, scale=None):
        if scale is not None:
            return (scale.n - np.round(np.asarray(a, np.float64) * scale.n)) / scale.n
        return 1.0 - np.asarray(a, np.float64)


class _Product(CombinationFamily):
    name = "product"

    def _no_scale(self, scale):
        if scale is not None:
            raise ScaleClosureError("product arithmetic does not stay on a finite 1/n scale")

    def tnorm(self, a, b, scale=None):
        self._no_scale(scale)
        return np.asarray(a, np.float64) * b

    def snorm(self, a, b, scale=None):
        self._no_scale(scale)
        a, b = np.asarray(a, np.float64), np.asarray(b, np.float64)
        return a + b - a * b

    def implies(self, a, b, scale=None):
        # 0 |> b = 1 by the tautology axiom: a = 0 falls into the a <= b branch,
        # so the division only ever sees a > b >= 0.
        self._no_scale(scale)
        a, b = np.asarray(a, np.float64), np.asarray(b, np.float64)
        taut = a <= b
        return np.where(taut, 1.0, b / np.where(taut, 1.0, a))

    def neg(self, a, scale=None):
        a = np.asarray(a, np.float64)
        return np.where(a == 0.0, 1.0, 0.0)


GOEDEL = _Goedel()
GOEDEL_INVOLUTIVE = _GoedelInvolutive()
LUKASIEWICZ = _Lukasiewicz()
PRODUCT = _Product()

FAMILIES: dict[str, CombinationFamily] = {
    f.name: f for f in (GOEDEL, GOEDEL_INVOLUTIVE, LUKASIEWICZ, PRODUCT)
}


def family_by_name(name: str) -> CombinationFamily:
    key = name.strip().lower().replace("_", "-")
    if key not in FAMILIES:
        raise KeyError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")
    return FAMILIES[key]


_OPS = ("tnorm", "snorm", "implication", "negation")


def combine(family: CombinationFamily, op: str, a: float, b: float | None = None,
            scale: GradedScale | None = None) -> float:
    """Apply one combination function to degree scalars; result stays in [0,1]."""
    if op not in _OPS:
        raise ValueError(f"op must be one of {_OPS}")
    check_degree(a)
    if op == "negation":
        if b is not None:
            raise ValueError("negation is unary")
        return check_degree(float(family.neg(a, scale)))
    if b is None:
        raise ValueError(f"{op} is binary")
    check_degree(b)
    fn = {"tnorm": family.tnorm, "snorm": family.snorm, "implication": family.implies}[op]
    return check_degree(float(fn(a, b, scale)))


@dataclass
class AxiomViolation:
    axiom: str
    inputs: tuple
    lhs: float
    rhs: float


@dataclass
class FamilyReport:
    family: str
    checked: int
    violations: list[AxiomViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _collect(report: FamilyReport, axiom: str, bad: np.ndarray, grids: Sequence[np.ndarray],
             lhs: np.ndarray, rhs: np.ndarray, cap: int = 50) -> None:
    idx = np.argwhere(bad)
    for row in idx[:cap]:
        ix = tuple(row)
        report.violations.append(AxiomViolation(
            axiom, tuple(float(g[ix]) for g in grids), float(lhs[ix]), float(rhs[ix])))


def validate_family(family: CombinationFamily, samples: Iterable[float] | None = None,
                    tol: float = 0.0) -> FamilyReport:
    """Check every t-norm/s-norm/implication/negation axiom on a sample grid.

    Equalities are checked up to ``tol``; order axioms up to the same slack.
    The four built-in families pass with tol=0 (Goedel variants) or 1e-12
    (Lukasiewicz and product, whose arithmetic rounds).
    """
    vals = np.array(sorted(set(check_degree(v) for v in samples)) if samples is not None
                    else [k / 20 for k in range(21)], dtype=np.float64)
    if vals.size == 0:
        raise ValueError("empty sample set")
    rep = FamilyReport(family=family.name, checked=0)
    a2, b2 = np.meshgrid(vals, vals, indexing="ij")
    a3, b3, c3 = np.meshgrid(vals, vals, vals, indexing="ij")
    one, zero = np.float64(1.0), np.float64(0.0)

    def eq(x, y):
        return np.abs(np.asarray(x, np.float64) - y) <= tol

    def le(x, y):
        return np.asarray(x, np.float64) <= np.asarray(y, np.float64) + tol

    # t-norm axioms
    checks2 = [
        ("tnorm-contradiction", family.tnorm(a2, zero), np.zeros_like(a2), eq),
        ("tnorm-identity", family.tnorm(a2, one), a2, eq),
        ("tnorm-commutativity", family.tnorm(a2, b2), family.tnorm(b2, a2), eq),
        ("snorm-tautology", family.snorm(a2, one), np.ones_like(a2), eq),
        ("snorm-identity", family.snorm(a2, zero), a2, eq),
        ("snorm-commutativity", family.snorm(a2, b2), family.snorm(b2, a2), eq),
    ]
    for name, lhs, rhs, rel in checks2:
        bad = ~rel(lhs, rhs) if rel is eq else ~rel(lhs, rhs)
        rep.checked += lhs.size
        if bad.any():
            _collect(rep, name, bad, (a2, b2), lhs, rhs)

    # associativity and monotonicity need triples
    checks3 = [
        ("tnorm-associativity", family.tnorm(family.tnorm(a3, b3), c3),
         family.tnorm(a3, family.tnorm(b3, c3)), None),
        ("snorm-associativity", family.snorm(family.snorm(a3, b3), c3),
         family.snorm(a3, family.snorm(b3, c3)), None),
    ]
    for name, lhs, rhs, _ in checks3:
        bad = ~eq(lhs, rhs)
        rep.checked += lhs.size
        if bad.any():
            _collect(rep, name, bad, (a3, b3, c3), lhs, rhs)

    guard = b3 <= c3
    mono = [
        ("tnorm-monotonicity", family.tnorm(a3, b3), family.tnorm(a3, c3)),
        ("snorm-monotonicity", family.snorm(a3, b3), family.snorm(a3, c3)),
        ("implication-monotonicity", family.implies(a3, b3), family.implies(a3, c3)),
    ]
    for name, lo, hi in mono:
        bad = guard & ~le(lo, hi)
        rep.checked += int(guard.sum())
        if bad.any():
            _collect(rep, name, bad, (a3, b3, c3), lo, hi)

    guard = a3 <= b3
    anti = family.implies(a3, c3), family.implies(b3, c3)
    bad = guard & ~le(anti[1], anti[0])
    rep.checked += int(guard.sum())
    if bad.any():
        _collect(rep, "implication-antitonicity", bad, (a3, b3, c3), anti[0], anti[1])

    # implication tautologies
    impl_taut = [
        ("implication-0-antecedent", family.implies(zero, vals), np.ones_like(vals)),
        ("implication-1-consequent", family.implies(vals, one), np.ones_like(vals)),
    ]
    for name, lhs, rhs in impl_taut:
        bad = ~eq(lhs, rhs)
        rep.checked += lhs.size
        if bad.any():
            _collect(rep, name, bad, (vals,), lhs, rhs)
    v10 = family.implies(one, zero)
    rep.checked += 1
    if not eq(v10, 0.0):
        rep.violations.append(AxiomViolation("implication-1-to-0", (1.0, 0.0), float(v10), 0.0))

    # negation axioms
    n0, n1 = family.neg(zero), family.neg(one)
    rep.checked += 2
    if not eq(n0, 1.0):
        rep.violations.append(AxiomViolation("negation-of-0", (0.0,), float(n0), 1.0))
    if not eq(n1, 0.0):
        rep.violations.append(AxiomViolation("negation-of-1", (1.0,), float(n1), 0.0))
    guard = a2 <= b2
    na, nb = np.broadcast_to(family.neg(a2), a2.shape), np.broadcast_to(family.neg(b2), b2.shape)
    bad = guard & ~le(nb, na)
    rep.checked += int(guard.sum())
    if bad.any():
        _collect(rep, "negation-antitonicity", bad, (a2, b2), na, nb)

    return rep
