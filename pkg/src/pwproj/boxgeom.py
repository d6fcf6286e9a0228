"""Exact rational arithmetic on finite unions of axis-aligned boxes.

All endpoints are `fractions.Fraction`, so Lebesgue measures, Minkowski
sums and intersections are computed exactly; in particular "measure zero"
is a decidable predicate here, not a floating-point guess.  Boxes are
closed; boundaries carry no measure, so open/closed distinctions never
change a result.  Degenerate boxes (zero width on some axis) are allowed
and have measure zero; they matter because the 0-fold iterated Minkowski
sum is the single point {0}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

RatLike = Union[Fraction, int, str]


def rat(value: RatLike) -> Fraction:
    """Coerce to an exact rational.

    Accepts Fractions, ints, and strings ("3", "3/2", "1.5"); decimal
    strings are parsed as exact decimal fractions.  Floats are rejected:
    callers must not smuggle binary roundoff into the decision path.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected int, Fraction or string for an exact endpoint, got {type(value).__name__}")


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box prod_i [lo_i, hi_i] with rational corners."""

    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi must have the same dimension")
        if not self.lo:
            raise ValueError("boxes must have dimension >= 1")
        for a, b in zip(self.lo, self.hi):
            if a > b:
                raise ValueError(f"box has lo > hi on some axis: {a} > {b}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def widths(self) -> tuple[Fraction, ...]:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    @property
    def volume(self) -> Fraction:
        v = Fraction(1)
        for w in self.widths:
            v *= w
        return v

    @property
    def is_degenerate(self) -> bool:
        return any(a == b for a, b in zip(self.lo, self.hi))

    def contains_box(self, other: "Box") -> bool:
        return all(a <= c and d <= b for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def intersect(self, other: "Box") -> "Box | None":
        lo = tuple(max(a, c) for a, c in zip(self.lo, other.lo))
        hi = tuple(min(b, d) for b, d in zip(self.hi, other.hi))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return Box(lo, hi)


def box(*bounds: Sequence[RatLike]) -> Box:
    """Build a Box from per-axis (lo, hi) pairs: box((0,1), ("3/2","5/2"))."""
    lo = tuple(rat(b[0]) for b in bounds)
    hi = tuple(rat(b[1]) for b in bounds)
    return Box(lo, hi)


@dataclass(frozen=True)
class BoxUnion:
    """Finite union of boxes in R^d; the list may overlap and may be empty."""

    dim: int
    boxes: tuple[Box, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        for b in self.boxes:
            if b.dim != self.dim:
                raise ValueError(f"box of dimension {b.dim} in union of dimension {self.dim}")

    @property
    def is_empty(self) -> bool:
        return not self.boxes


def box_union(boxes: Iterable[Box], dim: int | None = None) -> BoxUnion:
    bs = tuple(boxes)
    if dim is None:
        if not bs:
            raise ValueError("dim is required for an empty union")
        dim = bs[0].dim
    return BoxUnion(dim, bs)


def empty(dim: int = 1) -> BoxUnion:
    return BoxUnion(dim, ())


def origin(dim: int = 1) -> BoxUnion:
    """The singleton {0}: one degenerate box at the origin (the 0-fold sum)."""
    z = tuple(Fraction(0) for _ in range(dim))
    return BoxUnion(dim, (Box(z, z),))


def intervals(*pairs: Sequence[RatLike]) -> BoxUnion:
    """1-d union from (lo, hi) pairs: intervals((0,1), (2,3))."""
    return BoxUnion(1, tuple(box(p) for p in pairs))


def _check_same_dim(a: BoxUnion, b: BoxUnion) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


# ---------------------------------------------------------------------------
# measure


def _merge_intervals(pairs: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Merge closed 1-d intervals (touching intervals coalesce)."""
    pairs = sorted(pairs)
    out: list[tuple[Fraction, Fraction]] = []
    for a, b in pairs:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


def _measure_solids(boxes: list[Box], axis: int) -> Fraction:
    """Exact measure of a union of nondegenerate boxes, sweeping one axis
    at a time over the compressed coordinate grid."""
    d = boxes[0].dim
    if axis == d - 1:
        merged = _merge_intervals([(b.lo[axis], b.hi[axis]) for b in boxes])
        return sum((b - a for a, b in merged), Fraction(0))
    coords = sorted({b.lo[axis] for b in boxes} | {b.hi[axis] for b in boxes})
    total = Fraction(0)
    cache: dict[frozenset[Box], Fraction] = {}
    for x0, x1 in zip(coords, coords[1:]):
        if x0 == x1:
            continue
        span = [b for b in boxes if b.lo[axis] <= x0 and b.hi[axis] >= x1]
        if not span:
            continue
        key = frozenset(span)
        sub = cache.get(key)
        if sub is None:
            sub = _measure_solids(span, axis + 1)
            cache[key] = sub
        total += (x1 - x0) * sub
    return total


def measure(A: BoxUnion) -> Fraction:
    """Exact d-dimensional Lebesgue measure of the union, overlaps counted once."""
    solids = [b for b in A.boxes if not b.is_degenerate]
    if not solids:
        return Fraction(0)
    return _measure_solids(solids, 0)


def intersection_measure(A: BoxUnion, B: BoxUnion) -> Fraction:
    """Measure of the intersection, via the union of pairwise box intersections."""
    _check_same_dim(A, B)
    pieces = []
    for a in A.boxes:
        for b in B.boxes:
            c = a.intersect(b)
            if c is not None and not c.is_degenerate:
                pieces.append(c)
    if not pieces:
        return Fraction(0)
    return _measure_solids(_dedupe(pieces), 0)


def symmetric_difference_measure(A: BoxUnion, B: BoxUnion) -> Fraction:
    """measure(A) + measure(B) - 2 measure(A cap B); zero iff the point sets
    agree up to measure zero."""
    return measure(A) + measure(B) - 2 * intersection_measure(A, B)


# ---------------------------------------------------------------------------
# normalize


def _normalize_solids(boxes: list[Box], axis: int) -> list[tuple]:
    """Disjoint (up to boundaries) decomposition of a union of nondegenerate
    boxes; returns nested (x0, x1, sub) slabs."""
    d = boxes[0].dim
    if axis == d - 1:
        return _merge_intervals([(b.lo[axis], b.hi[axis]) for b in boxes])
    coords = sorted({b.lo[axis] for b in boxes} | {b.hi[axis] for b in boxes})
    slabs: list[tuple] = []
    cache: dict[frozenset[Box], list] = {}
    for x0, x1 in zip(coords, coords[1:]):
        if x0 == x1:
            continue
        span = [b for b in boxes if b.lo[axis] <= x0 and b.hi[axis] >= x1]
        if not span:
            continue
        key = frozenset(span)
        sub = cache.get(key)
        if sub is None:
            sub = _normalize_solids(span, axis + 1)
            cache[key] = sub
        # merge with the previous slab when adjacent and structurally equal
        if slabs and slabs[-1][1] == x0 and slabs[-1][2] == sub:
            slabs[-1] = (slabs[-1][0], x1, sub)
        else:
            slabs.append((x0, x1, sub))
    return slabs


def _boxes_from_slabs(slabs, dim: int) -> list[Box]:
    """Flatten nested slab decomposition into boxes."""
    out: list[Box] = []

    def walk(node, lo_prefix: tuple, hi_prefix: tuple, depth: int):
        if depth == dim - 1:
            for a, b in node:
                out.append(Box(lo_prefix + (a,), hi_prefix + (b,)))
            return
        for x0, x1, sub in node:
            walk(sub, lo_prefix + (x0,), hi_prefix + (x1,), depth + 1)

    walk(slabs, (), (), 0)
    return out


def _dedupe(boxes: Iterable[Box]) -> list[Box]:
    seen = set()
    out = []
    for b in boxes:
        key = (b.lo, b.hi)
        if key not in seen:
            seen.add(key)
            out.append(b)
    return out


def normalize(A: BoxUnion) -> BoxUnion:
    """Rewrite as pairwise measure-disjoint boxes covering the same point set.

    Nondegenerate boxes are decomposed on the compressed coordinate grid and
    re-merged into maximal runs; degenerate boxes pass through unless they lie
    inside a solid part.  Measure is preserved exactly.
    """
    solids = [b for b in A.boxes if not b.is_degenerate]
    degens = _dedupe(b for b in A.boxes if b.is_degenerate)
    out: list[Box] = []
    if solids:
        if A.dim == 1:
            merged = _merge_intervals([(b.lo[0], b.hi[0]) for b in solids])
            out = [Box((a,), (b,)) for a, b in merged]
        else:
            out = _boxes_from_slabs(_normalize_solids(solids, 0), A.dim)
    kept = [g for g in degens if not any(s.contains_box(g) for s in out)]
    return BoxUnion(A.dim, tuple(out + kept))


# ---------------------------------------------------------------------------
# Minkowski algebra


def minkowski_sum(A: BoxUnion, B: BoxUnion) -> BoxUnion:
    """Pairwise box sums [lo_a + lo_b, hi_a + hi_b]; exact for axis-aligned
    boxes.  The output is not normalized (duplicates are dropped)."""
    _check_same_dim(A, B)
    sums = []
    for a in A.boxes:
        for b in B.boxes:
            lo = tuple(x + y for x, y in zip(a.lo, b.lo))
            hi = tuple(x + y for x, y in zip(a.hi, b.hi))
            sums.append(Box(lo, hi))
    return BoxUnion(A.dim, tuple(_dedupe(sums)))


def reflect(A: BoxUnion) -> BoxUnion:
    """The point set {-x : x in A}."""
    return BoxUnion(
        A.dim,
        tuple(Box(tuple(-b for b in bx.hi), tuple(-a for a in bx.lo)) for bx in A.boxes),
    )


def iterate_sum(A: BoxUnion, k: int) -> BoxUnion:
    """k-fold iterated Minkowski sum: 0A = {0}, (k+1)A = kA + A.

    Repeated sums of the same boxes are deduplicated (a k-fold sum of boxes
    is determined by the multiset of summands), so the box count grows
    polynomially in k.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    acc = origin(A.dim)
    for _ in range(k):
        acc = minkowski_sum(acc, A)
    return acc


def affine_map(A: BoxUnion, scale: RatLike, shift: Sequence[RatLike] | RatLike = 0) -> BoxUnion:
    """Apply x -> scale*x + shift (scalar rational scale, vector shift)."""
    lam = rat(scale)
    if lam == 0:
        raise ValueError("scale must be nonzero")
    if isinstance(shift, (list, tuple)):
        tau = tuple(rat(s) for s in shift)
    else:
        tau = tuple(rat(shift) for _ in range(A.dim))
    if len(tau) != A.dim:
        raise ValueError("shift dimension mismatch")
    out = []
    for b in A.boxes:
        p = tuple(lam * x + t for x, t in zip(b.lo, tau))
        q = tuple(lam * x + t for x, t in zip(b.hi, tau))
        if lam < 0:
            p, q = q, p
        out.append(Box(p, q))
    return BoxUnion(A.dim, tuple(out))


def bounding_box(A: BoxUnion) -> Box | None:
    if A.is_empty:
        return None
    lo = tuple(min(b.lo[i] for b in A.boxes) for i in range(A.dim))
    hi = tuple(max(b.hi[i] for b in A.boxes) for i in range(A.dim))
    return Box(lo, hi)


def contains_point(A: BoxUnion, point: Sequence[RatLike]) -> bool:
    """Closed membership: is the point in some box of A?"""
    p = tuple(rat(x) for x in point)
    if len(p) != A.dim:
        raise ValueError("point dimension mismatch")
    return any(all(a <= x <= b for a, x, b in zip(bx.lo, p, bx.hi)) for bx in A.boxes)


def interior_contains_point(A: BoxUnion, point: Sequence[RatLike]) -> bool:
    """Open membership: is the point in the interior of some box of A?"""
    p = tuple(rat(x) for x in point)
    if len(p) != A.dim:
        raise ValueError("point dimension mismatch")
    return any(all(a < x < b for a, x, b in zip(bx.lo, p, bx.hi)) for bx in A.boxes)


def largest_solid_box(A: BoxUnion) -> Box | None:
    """A maximal-volume box from the disjoint decomposition of A, or None if
    A has measure zero.  Useful as a certified 'thick part' of A."""
    solids = [b for b in normalize(A).boxes if not b.is_degenerate]
    if not solids:
        return None
    return max(solids, key=lambda b: b.volume)


def common_denominator(A: BoxUnion, *others: BoxUnion) -> int:
    """lcm of all endpoint denominators across the given unions."""
    d = 1
    for u in (A,) + others:
        for b in u.boxes:
            for x in b.lo + b.hi:
                d = d * x.denominator // math.gcd(d, x.denominator)
    return d
