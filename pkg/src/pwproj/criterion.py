"""Exact contractivity decisions for the canonical spectral cutoff projection.

For disjoint box unions S1, S2 and the projection that keeps the part of a
function's spectrum inside S1 and discards the part inside S2, contractivity
on L^p is decided exactly:

* p = 2k even: the projection is a contraction iff the condition set
  k*S1 + (k-1)*(-S1) meets S2 in measure zero;
* every other p in [1, oo]: a contraction iff S1 or S2 is a null set.

Everything on this path is rational arithmetic; there is no tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from .boxgeom import (
    Box,
    BoxUnion,
    RatLike,
    bounding_box,
    intersection_measure,
    iterate_sum,
    largest_solid_box,
    measure,
    minkowski_sum,
    rat,
    reflect,
)

EVEN = "even"
GENERAL = "general"
INFINITY = "infinity"

ExponentLike = Union["Exponent", int, str, Fraction]


class OverlapError(ValueError):
    """S1 and S2 overlap in positive measure; the decision problem assumes
    mes(S1 cap S2) = 0."""


@dataclass(frozen=True)
class Exponent:
    """Exponent p classified exactly: Even(k) means p = 2k; GENERAL holds a
    rational p in [1, oo) that is not an even integer; INFINITY is sup-norm."""

    kind: str
    k: int | None = None
    p: Fraction | None = None

    def __post_init__(self):
        if self.kind == EVEN:
            if self.k is None or self.k < 1:
                raise ValueError("even exponent needs k >= 1 (p = 2k)")
        elif self.kind == GENERAL:
            if self.p is None or self.p < 1:
                raise ValueError("finite exponent needs p >= 1")
            if self.p.denominator == 1 and self.p.numerator % 2 == 0:
                raise ValueError(f"p = {self.p} is an even integer; use Exponent.even")
        elif self.kind != INFINITY:
            raise ValueError(f"unknown exponent kind {self.kind!r}")

    @classmethod
    def even(cls, k: int) -> "Exponent":
        return cls(EVEN, k=int(k))

    @classmethod
    def general(cls, p: RatLike) -> "Exponent":
        return cls(GENERAL, p=rat(p))

    @classmethod
    def infinity(cls) -> "Exponent":
        return cls(INFINITY)

    @property
    def p_value(self) -> float:
        if self.kind == INFINITY:
            return math.inf
        if self.kind == EVEN:
            return 2.0 * self.k
        return float(self.p)

    def __str__(self) -> str:
        if self.kind == INFINITY:
            return "inf"
        if self.kind == EVEN:
            return str(2 * self.k)
        return str(self.p)


def parse_exponent(value: ExponentLike) -> Exponent:
    """Classify p exactly.  Strings may be integers ("4"), rationals ("7/2"),
    decimals ("3.5") or "inf"; floats are accepted only for integral values
    and infinity, so binary roundoff can never flip the branch."""
    if isinstance(value, Exponent):
        return value
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return Exponent.infinity()
        if value.is_integer():
            value = int(value)
        else:
            raise TypeError("pass non-integer exponents as strings or Fractions, not floats")
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "oo"):
            return Exponent.infinity()
        value = Fraction(text)
    p = rat(value)
    if p < 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    if p.denominator == 1 and p.numerator % 2 == 0:
        return Exponent.even(p.numerator // 2)
    return Exponent.general(p)


@dataclass(frozen=True)
class Certificate:
    """Decision output: verdict plus the data that proves it.

    For even p the proof datum is the condition set and its (exact)
    intersection measure with S2; for other p the proof datum is which of
    the two sets is null.
    """

    contractive: bool
    exponent: Exponent
    condition_set: BoxUnion | None
    obstruction_measure: Fraction
    degenerate_reason: str | None = None

    @property
    def verdict(self) -> str:
        return "contractive" if self.contractive else "not contractive"


def condition_set(S1: BoxUnion, k: int) -> BoxUnion:
    """The set k*S1 + (k-1)*(-S1) governing contractivity at p = 2k.

    For k = 1 the second factor is {0} and the result is S1 itself.  The
    output is deduplicated but not normalized; callers that report it should
    normalize first.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return minkowski_sum(iterate_sum(S1, k), iterate_sum(reflect(S1), k - 1))


def _check_hypothesis(S1: BoxUnion, S2: BoxUnion) -> None:
    if S1.dim != S2.dim:
        raise ValueError(f"dimension mismatch: {S1.dim} vs {S2.dim}")
    ov = intersection_measure(S1, S2)
    if ov != 0:
        raise OverlapError(f"S1 and S2 overlap in measure {ov}; the hypothesis mes(S1 cap S2) = 0 fails")


def _even_obstruction(S1: BoxUnion, S2: BoxUnion, k: int) -> tuple[BoxUnion, Fraction]:
    left = iterate_sum(S1, k)
    right = iterate_sum(reflect(S1), k - 1)
    bb_l, bb_r = bounding_box(left), bounding_box(right)
    if bb_l is None or bb_r is None:
        return BoxUnion(S1.dim, ()), Fraction(0)
    # cheap screen: bbox(A + B) = bbox(A) + bbox(B); if even that misses S2
    # in measure, the exact intersection is certainly null
    hull = Box(
        tuple(a + b for a, b in zip(bb_l.lo, bb_r.lo)),
        tuple(a + b for a, b in zip(bb_l.hi, bb_r.hi)),
    )
    cond = minkowski_sum(left, right)
    if intersection_measure(BoxUnion(S1.dim, (hull,)), S2) == 0:
        return cond, Fraction(0)
    return cond, intersection_measure(cond, S2)


def decide(S1: BoxUnion, S2: BoxUnion, p: ExponentLike) -> Certificate:
    """Decide whether the cutoff projection onto S1 contracts L^p norms on
    functions with spectrum in S1 union S2.

    Raises OverlapError if mes(S1 cap S2) > 0 (the problem's standing
    hypothesis), rather than silently repairing the sets.
    """
    exponent = parse_exponent(p)
    _check_hypothesis(S1, S2)
    if exponent.kind == EVEN:
        cond, obstruction = _even_obstruction(S1, S2, exponent.k)
        return Certificate(
            contractive=(obstruction == 0),
            exponent=exponent,
            condition_set=cond,
            obstruction_measure=obstruction,
        )
    m1, m2 = measure(S1), measure(S2)
    if m1 == 0:
        return Certificate(True, exponent, None, Fraction(0), degenerate_reason="S1 null")
    if m2 == 0:
        return Certificate(True, exponent, None, Fraction(0), degenerate_reason="S2 null")
    return Certificate(False, exponent, None, Fraction(0))


class MaxEvenResult(NamedTuple):
    k: int
    saturated: bool


def max_contractive_even_k(S1: BoxUnion, S2: BoxUnion, k_cap: int = 64) -> MaxEvenResult:
    """Largest k <= k_cap with a contractive verdict at p = 2k.

    Contractive k form an initial segment (monotonicity in even p), so the
    scan stops at the first failure.  If no failure occurs up to the cap the
    result is (k_cap, saturated=True); k = 1 never fails under the
    disjointness hypothesis.
    """
    if k_cap < 1:
        raise ValueError("k_cap must be >= 1")
    _check_hypothesis(S1, S2)
    last = 0
    for k in range(1, k_cap + 1):
        _, obstruction = _even_obstruction(S1, S2, k)
        if obstruction != 0:
            return MaxEvenResult(last, False)
        last = k
    return MaxEvenResult(k_cap, True)


def guaranteed_failure_k(S1: BoxUnion, S2: BoxUnion) -> int | None:
    """Smallest k with a *proof* that the verdict at p = 2k is not contractive,
    derived from a maximal solid box of S1.

    If Q = prod [a_i, a_i + w_i] sits inside S1 with all w_i > 0, then the
    condition set contains prod [a_i - (k-1) w_i, a_i + k w_i], which swallows
    the bounding box of S2 once k is large enough; at that k the obstruction
    measure is measure(S2).  Returns None when S1 or S2 is null (no failure
    exists: the projection contracts at every even p).
    """
    q = largest_solid_box(S1)
    bb2 = bounding_box(S2)
    if q is None or bb2 is None or measure(S2) == 0:
        return None
    k = 1
    for i in range(S1.dim):
        a, w = q.lo[i], q.hi[i] - q.lo[i]
        need_left = (a - bb2.lo[i]) / w + 1
        need_right = (bb2.hi[i] - a) / w
        k = max(k, math.ceil(need_left), math.ceil(need_right))
    return k
