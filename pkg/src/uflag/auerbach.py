"""Topological lower bounds for Auerbach bases of low-dimensional norms.

The quotient of the nondegenerate unit-vector tuples by the signed
permutation action is the unordered flag manifold times a ball, so its
category and total Betti number bound the number of Auerbach bases from
below: the category for arbitrary continuous norms, the mod-2 rank for
generic smooth ones.  This module only assembles numbers computed
elsewhere in the engine; it never touches an actual norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable

from .f2linalg import MalformedInputError


@dataclass(frozen=True)
class RingData:
    """A graded ring with a basis-level multiplication oracle.

    dims[d] is the rank in degree d; multiply(a, b) returns the set of
    basis labels of the product of two basis labels (empty = zero).
    Labels are (degree, index) pairs.
    """

    dims: tuple[int, ...]
    multiply: Callable[[Hashable, Hashable], frozenset]

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def labels(self, d: int) -> list[tuple[int, int]]:
        return [(d, i) for i in range(self.dims[d])]


def truncated_polynomial_ring(gen_degree: int, height: int) -> RingData:
    """F_2[x]/(x^height) with |x| = gen_degree."""
    top = gen_degree * (height - 1)
    dims = tuple(1 if d % gen_degree == 0 else 0 for d in range(top + 1))

    def multiply(a, b):
        d = a[0] + b[0]
        return frozenset([(d, 0)]) if d <= top else frozenset()

    return RingData(dims, multiply)


def cup_length(ring: RingData) -> int:
    """Longest nonvanishing product of positive-degree classes.

    Graded dynamic programming: reachable[k] holds the nonzero classes
    expressible as k-fold products, as frozensets of basis labels.
    """
    singles = []
    for d in range(1, ring.top_degree + 1):
        for lab in ring.labels(d):
            singles.append(frozenset([lab]))
    if not singles:
        return 0

    def times(cls: frozenset, single: frozenset) -> frozenset:
        (b,) = single
        out: set = set()
        for a in cls:
            out.symmetric_difference_update(ring.multiply(a, b))
        return frozenset(out)

    length = 1
    reachable = set(s for s in singles)
    while True:
        nxt: set = set()
        for cls in reachable:
            for s in singles:
                prod = times(cls, s)
                if prod:
                    nxt.add(prod)
        if not nxt:
            return length
        length += 1
        reachable = nxt


def category_bounds(cuplen: int, dim: int) -> tuple[int, int]:
    """(lower, upper) bounds for the category: cup length + 1 and dim + 1."""
    if cuplen < 0 or dim < 0:
        raise MalformedInputError("cup length and dimension must be nonnegative")
    return (cuplen + 1, dim + 1)


@dataclass(frozen=True)
class BoundsReport:
    n: int
    field: str
    cup_length: int | None
    cat_lower: int
    cat_upper: int
    cat_value: int | None
    rank_f2: int | None
    rank_q: int | None
    auerbach_general: int
    auerbach_generic: int | None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "field": self.field,
            "cup_length": self.cup_length,
            "cat_lower": self.cat_lower,
            "cat_upper": self.cat_upper,
            "cat_value": self.cat_value,
            "rank_f2": self.rank_f2,
            "rank_q": self.rank_q,
            "auerbach_general": self.auerbach_general,
            "auerbach_generic": self.auerbach_generic,
            "notes": list(self.notes),
        }


def real_poincare(n: int) -> tuple[int, ...]:
    """Engine-computed mod-2 Poincare coefficients of the real quotient."""
    from . import sseq
    from .seeds import builtin_seeds

    seeds, _ = sseq.load_seed_file(builtin_seeds(n), n)
    report = sseq.run(n, seeds)
    return report.poincare


def auerbach_report(n: int, field: str) -> BoundsReport:
    """Lower bounds for the number of Auerbach bases of an n-dimensional
    (real or complex) normed space, from the engine's cohomology outputs.
    """
    if field == "real":
        if n not in (3, 4, 5):
            raise MalformedInputError("real bounds are computed for n in {3, 4, 5}")
        dim = n * (n - 1) // 2
        poincare = real_poincare(n)
        rank = sum(poincare)
        cat = dim + 1  # the ordered flag covering pins the category
        cuplen = None
        notes = [
            "category from the ordered-flag covering argument",
            "generic bound is the total mod-2 rank of the quotient manifold",
        ]
        if n == 3:
            ring = truncated_polynomial_ring(1, 4)
            cuplen = cup_length(ring)
            notes.append("degree-1 truncated polynomial ring of height 4")
        lower, upper = category_bounds(cuplen if cuplen is not None else dim, dim)
        return BoundsReport(
            n=n,
            field=field,
            cup_length=cuplen,
            cat_lower=lower,
            cat_upper=upper,
            cat_value=cat,
            rank_f2=rank,
            rank_q=2 ** (n // 2),
            auerbach_general=cat,
            auerbach_generic=rank,
            notes=tuple(notes),
        )
    if field == "complex":
        if n != 3:
            dim = n * (n - 1)
            lower = n * (n - 1) // 2 + 1
            return BoundsReport(
                n=n,
                field=field,
                cup_length=None,
                cat_lower=lower,
                cat_upper=dim + 1,
                cat_value=None,
                rank_f2=None,
                rank_q=None,
                auerbach_general=lower,
                auerbach_generic=None,
                notes=("formula-only mode: category interval from the covering bound",),
            )
        from . import complex3

        pres = complex3.f2_ring_presentation()
        ring = truncated_polynomial_ring(pres["generator_degree"], pres["height"])
        cuplen = cup_length(ring)
        dim = n * (n - 1)
        lower, upper = category_bounds(cuplen, dim)
        return BoundsReport(
            n=n,
            field=field,
            cup_length=cuplen,
            cat_lower=lower,
            cat_upper=upper,
            cat_value=lower if lower == upper else None,
            rank_f2=pres["total_rank"],
            rank_q=1,
            auerbach_general=lower,
            auerbach_generic=None,
            notes=(
                "category is pinned: cup-length bound meets the dimension bound",
                "generic-smooth count for complex norms is not derived from this ring",
            ),
        )
    raise MalformedInputError(f"unknown field {field!r}")
