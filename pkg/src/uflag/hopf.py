"""The Hopf ring of mod-2 cohomology of the hyperoctahedral family.

The ambient object is the direct sum over n of H*(B B_n; F_2), with three
interacting structures: the transfer product (odot), the componentwise cup
product, and the coproduct dual to the juxtaposition product.  Everything
here is exact arithmetic over F_2 in the Hopf monomial basis.

Representation.  Within a fixed component n, the available ring generators
are determined by their index alone: index 0 is the top alpha class of the
component, index k >= 1 is the gamma class of width 2^k (which forces its
second subscript n / 2^k).  A gathered block is therefore stored as
(component, exps) where exps maps generator index -> cup exponent; the
pure unit block of a component has empty exps.  The profile of a block in
the sense of the monomial basis is exactly its exps tuple, and two blocks
with equal profile are automatically scalings of a common shape: the shape
has component 2^K (K the largest index) and the scale is component / 2^K.
Blocks behave like divided powers of their shape under both the transfer
product (binomial coefficients on scales, computed mod 2 by Lucas) and the
coproduct (which splits a block into complementary scalings).

A Hopf monomial is a transfer product of blocks with pairwise distinct
profiles; the monomials form the canonical additive basis, and a HopfClass
is a formal F_2 sum of them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from .f2linalg import MalformedInputError


@dataclass(frozen=True)
class Generator:
    """A Hopf ring generator: gamma(k, l), alpha(n), or unit(m)."""

    kind: str
    k: int = 0
    n: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("gamma", "alpha", "unit"):
            raise MalformedInputError(f"unknown generator kind {self.kind!r}")
        if self.kind == "gamma" and (self.k < 1 or self.n < 1):
            raise MalformedInputError("gamma(k, l) needs k >= 1 and l >= 1")
        if self.kind in ("alpha", "unit") and self.n < 1:
            raise MalformedInputError(f"{self.kind} needs a positive subscript")

    @property
    def component(self) -> int:
        if self.kind == "gamma":
            return self.n << self.k
        return self.n

    @property
    def degree(self) -> int:
        if self.kind == "gamma":
            return self.n * ((1 << self.k) - 1)
        if self.kind == "alpha":
            return self.n
        return 0

    @property
    def index(self) -> int | None:
        """Profile index: k for gamma, 0 for alpha, None for unit."""
        if self.kind == "gamma":
            return self.k
        if self.kind == "alpha":
            return 0
        return None


def gamma(k: int, l: int) -> Generator:
    return Generator("gamma", k=k, n=l)


def alpha(n: int) -> Generator:
    return Generator("alpha", n=n)


def unit(m: int) -> Generator:
    return Generator("unit", n=m)


class GatheredBlock(NamedTuple):
    """A cup product of generators in one component.

    exps is a tuple of (index, exponent) pairs sorted by index; the empty
    tuple is the unit block of its component.
    """

    component: int
    exps: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        d = 0
        for k, e in self.exps:
            if k == 0:
                d += e * self.component
            else:
                d += e * (self.component >> k) * ((1 << k) - 1)
        return d

    @property
    def profile(self) -> tuple[tuple[int, int], ...]:
        return self.exps

    @property
    def max_index(self) -> int:
        return self.exps[-1][0] if self.exps else 0

    @property
    def scale(self) -> int:
        return self.component >> self.max_index

    @property
    def shape(self) -> "GatheredBlock":
        return GatheredBlock(1 << self.max_index, self.exps)

    def scaled(self, s: int) -> "GatheredBlock":
        """The block with the same profile and scale s (shape unchanged)."""
        return GatheredBlock(s << self.max_index, self.exps)

    def generators(self) -> list[tuple[Generator, int]]:
        """Factor list as (generator, cup exponent) pairs."""
        if not self.exps:
            return [(unit(self.component), 1)]
        out = []
        for k, e in self.exps:
            if k == 0:
                out.append((alpha(self.component), e))
            else:
                out.append((gamma(k, self.component >> k), e))
        return out


def block_from_factors(factors: Iterable[tuple[Generator, int]]) -> GatheredBlock:
    """Build a validated block from generator-exponent pairs."""
    factors = list(factors)
    if not factors:
        raise MalformedInputError("a gathered block needs at least one factor")
    component = factors[0][0].component
    exps: dict[int, int] = {}
    saw_unit = False
    for gen, e in factors:
        if gen.component != component:
            raise MalformedInputError(
                f"component mismatch inside a block: {gen} is not in component {component}"
            )
        if e < 1:
            raise MalformedInputError("cup exponents must be positive")
        if gen.kind == "unit":
            saw_unit = True
            continue
        idx = gen.index
        assert idx is not None
        exps[idx] = exps.get(idx, 0) + e
    if saw_unit and exps:
        # Units are cup-neutral inside their component.
        pass
    block = GatheredBlock(component, tuple(sorted(exps.items())))
    validate_block(block)
    return block


def validate_block(block: GatheredBlock) -> None:
    if block.component < 1:
        raise MalformedInputError("block component must be positive")
    for k, e in block.exps:
        if e < 1 or k < 0:
            raise MalformedInputError("malformed block exponents")
        if k >= 1 and block.component % (1 << k):
            raise MalformedInputError(
                f"index-{k} generator does not exist in component {block.component}"
            )


# A Hopf monomial is a sorted tuple of blocks with pairwise distinct profiles;
# the empty tuple is the basis element of component 0.
Mono = tuple[GatheredBlock, ...]


def block_sort_key(b: GatheredBlock):
    return (1 if not b.exps else 0, -b.max_index, -b.degree, -b.component, b.exps)


def mono_component(m: Mono) -> int:
    return sum(b.component for b in m)


def mono_degree(m: Mono) -> int:
    return sum(b.degree for b in m)


def unit_mono(n: int) -> Mono:
    """The pure unit monomial 1_n (the empty monomial for n = 0)."""
    if n == 0:
        return ()
    return (GatheredBlock(n, ()),)


def _multinomial_odd(scales: list[int]) -> bool:
    """Mod-2 multinomial coefficient: odd iff the scales add without carries."""
    total, ones = 0, 0
    for s in scales:
        total += s
        ones += bin(s).count("1")
    return bin(total).count("1") == ones


def normalize_blocks(blocks: Iterable[GatheredBlock]) -> Mono | None:
    """Merge equal-profile blocks by the divided-power rule.

    Returns the canonical monomial, or None when the mod-2 coefficient
    vanishes.  Unit blocks always merge with coefficient 1.
    """
    groups: dict[tuple, list[GatheredBlock]] = {}
    for b in blocks:
        validate_block(b)
        groups.setdefault(b.exps, []).append(b)
    out = []
    for exps, group in groups.items():
        if len(group) == 1:
            out.append(group[0])
            continue
        component = sum(b.component for b in group)
        if exps and not _multinomial_odd([b.scale for b in group]):
            return None
        out.append(GatheredBlock(component, exps))
    return tuple(sorted(out, key=block_sort_key))


def odot_monos(a: Mono, b: Mono) -> Mono | None:
    return normalize_blocks(a + b)


Terms = frozenset  # frozenset[Mono], coefficients implicitly 1 over F_2


def _toggle(acc: set, item) -> None:
    if item in acc:
        acc.remove(item)
    else:
        acc.add(item)


@dataclass(frozen=True)
class HopfClass:
    """A formal F_2 sum of Hopf monomials in a single component."""

    terms: frozenset

    def __post_init__(self) -> None:
        comps = {mono_component(m) for m in self.terms}
        if len(comps) > 1:
            raise MalformedInputError(f"terms mix components {sorted(comps)}")

    @property
    def component(self) -> int | None:
        for m in self.terms:
            return mono_component(m)
        return None

    @property
    def degree(self) -> int | None:
        degs = {mono_degree(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "HopfClass") -> "HopfClass":
        if self.terms and other.terms and self.component != other.component:
            raise MalformedInputError("cannot add classes in different components")
        return HopfClass(self.terms.symmetric_difference(other.terms))

    def __mul__(self, other: "HopfClass") -> "HopfClass":
        return cup(self, other)

    def odot(self, other: "HopfClass") -> "HopfClass":
        return odot(self, other)

    def __str__(self) -> str:
        from .grammar import format_class

        return format_class(self)


def zero() -> HopfClass:
    return HopfClass(frozenset())


def from_monos(monos: Iterable[Mono]) -> HopfClass:
    acc: set = set()
    for m in monos:
        _toggle(acc, m)
    return HopfClass(frozenset(acc))


def one(n: int) -> HopfClass:
    return from_monos([unit_mono(n)])


def generator_class(gen: Generator) -> HopfClass:
    if gen.kind == "unit":
        return one(gen.n)
    return from_monos([(block_from_factors([(gen, 1)]),)])


def normalize(blocks: Iterable[GatheredBlock]) -> HopfClass:
    m = normalize_blocks(blocks)
    return zero() if m is None else from_monos([m])


def odot(a: HopfClass, b: HopfClass) -> HopfClass:
    acc: set = set()
    for ma in a.terms:
        for mb in b.terms:
            m = odot_monos(ma, mb)
            if m is not None:
                _toggle(acc, m)
    return HopfClass(frozenset(acc))


@dataclass(frozen=True)
class TensorClass:
    """An F_2 sum of decomposable tensors of Hopf monomials."""

    pairs: frozenset  # frozenset[tuple[Mono, Mono]]

    def filter_split(self, n1: int, n2: int) -> "TensorClass":
        kept = {
            p for p in self.pairs if mono_component(p[0]) == n1 and mono_component(p[1]) == n2
        }
        return TensorClass(frozenset(kept))


@lru_cache(maxsize=None)
def _block_coproduct(b: GatheredBlock) -> tuple[tuple[Mono, Mono], ...]:
    """Coproduct of one block: complementary scalings of its shape."""
    s = b.scale
    out = []
    for j in range(s + 1):
        left = () if j == 0 else (b.scaled(j),)
        right = () if j == s else (b.scaled(s - j),)
        out.append((left, right))
    return tuple(out)


@lru_cache(maxsize=None)
def _mono_coproduct(m: Mono) -> frozenset:
    pairs: set = {((), ())}
    for b in m:
        new: set = set()
        for left, right in pairs:
            for bl, br in _block_coproduct(b):
                l2 = odot_monos(left, bl)
                if l2 is None:
                    continue
                r2 = odot_monos(right, br)
                if r2 is None:
                    continue
                _toggle(new, (l2, r2))
        pairs = new
    return frozenset(pairs)


def coproduct(m: Mono | HopfClass) -> TensorClass:
    if isinstance(m, HopfClass):
        acc: set = set()
        for t in m.terms:
            for p in _mono_coproduct(t):
                _toggle(acc, p)
        return TensorClass(frozenset(acc))
    return TensorClass(_mono_coproduct(m))


def coproduct_component(m: Mono | HopfClass, split: tuple[int, int]) -> TensorClass:
    n1, n2 = split
    comp = mono_component(m) if not isinstance(m, HopfClass) else m.component
    if comp is not None and n1 + n2 != comp:
        raise MalformedInputError(f"split {split} does not sum to component {comp}")
    return coproduct(m).filter_split(n1, n2)


def _merge_single_blocks(a: Mono, b: Mono) -> Mono | None:
    """Cup of two at-most-one-block monomials of equal component."""
    if not a:
        return b
    if not b:
        return a
    (ba,), (bb,) = a, b
    exps: dict[int, int] = dict(ba.exps)
    for k, e in bb.exps:
        exps[k] = exps.get(k, 0) + e
    return (GatheredBlock(ba.component, tuple(sorted(exps.items()))),)


@lru_cache(maxsize=None)
def _cup_monos(a: Mono, b: Mono) -> frozenset:
    """Cup product of two monomials, as a set of basis monomials."""
    if mono_component(a) != mono_component(b):
        return frozenset()
    if len(a) <= 1 and len(b) <= 1:
        m = _merge_single_blocks(a, b)
        return frozenset() if m is None else frozenset([m])
    # Expand against the side with more blocks via Hopf ring distributivity.
    if len(b) < len(a):
        a, b = b, a
    head, tail = (b[0],), b[1:]
    acc: set = set()
    split = (mono_component(head), mono_component(tail))
    for left, right in coproduct_component(a, split).pairs:
        for ml in _cup_monos(left, head):
            for mr in _cup_monos(right, tail):
                m = odot_monos(ml, mr)
                if m is not None:
                    _toggle(acc, m)
    return frozenset(acc)


def cup(a: HopfClass, b: HopfClass) -> HopfClass:
    if a.is_zero() or b.is_zero():
        return zero()
    if a.component != b.component:
        return zero()
    acc: set = set()
    for ma in a.terms:
        for mb in b.terms:
            for m in _cup_monos(ma, mb):
                _toggle(acc, m)
    return HopfClass(frozenset(acc))


def cup_expand_left(a: HopfClass, b: HopfClass) -> HopfClass:
    """Cup computed by always expanding the coproduct of the left factor.

    Used as an internal consistency check against the default expansion
    order; the two must agree.
    """
    if a.is_zero() or b.is_zero() or a.component != b.component:
        return zero()

    def go(ma: Mono, mb: Mono) -> frozenset:
        if len(ma) <= 1 and len(mb) <= 1:
            m = _merge_single_blocks(ma, mb)
            return frozenset() if m is None else frozenset([m])
        if len(mb) <= 1:
            ma, mb = mb, ma
        head, tail = (mb[0],), mb[1:]
        acc: set = set()
        for left, right in coproduct_component(ma, (mono_component(head), mono_component(tail))).pairs:
            for ml in go(left, head):
                for mr in go(right, tail):
                    m = odot_monos(ml, mr)
                    if m is not None:
                        _toggle(acc, m)
        return frozenset(acc)

    acc: set = set()
    for ma in a.terms:
        for mb in b.terms:
            # Force the left operand to be the expanded side.
            for m in go(mb, ma):
                _toggle(acc, m)
    return HopfClass(frozenset(acc))


def _shapes_upto(n: int, d: int) -> list[tuple[int, tuple[tuple[int, int], ...], int]]:
    """All block shapes usable in component <= n, degree weight <= d.

    Returns (shape_component, exps, weight) with weight = degree of the
    scale-1 block; the unit shape is excluded.
    """
    shapes = []
    kmax = n.bit_length() - 1
    for kk in range(kmax + 1):
        shape_comp = 1 << kk
        if shape_comp > n:
            continue
        # Generator degrees in the shape component, by index.
        degs = {0: shape_comp}
        for k in range(1, kk + 1):
            degs[k] = (shape_comp >> k) * ((1 << k) - 1)
        indices = sorted(degs)
        ranges = []
        for k in indices:
            lo = 1 if k == kk else 0
            ranges.append(range(lo, d // degs[k] + 1))
        for combo in itertools.product(*ranges):
            exps = tuple((k, e) for k, e in zip(indices, combo) if e)
            if not exps or exps[-1][0] != kk:
                continue
            w = sum(e * degs[k] for k, e in exps)
            if 1 <= w <= d:
                shapes.append((shape_comp, exps, w))
    shapes.sort()
    return shapes


@lru_cache(maxsize=None)
def enumerate_basis(n: int, d: int) -> tuple[Mono, ...]:
    """All Hopf monomials of component n and degree d, canonically ordered.

    The order is graded lexicographic on the sorted block keys: gamma-heavy
    blocks first, units last, ties broken by degree, component, and profile.
    """
    if n < 0 or d < 0:
        raise MalformedInputError("component and degree must be nonnegative")
    if n == 0:
        return ((),) if d == 0 else ()
    shapes = _shapes_upto(n, d)
    found: list[Mono] = []

    def rec(i: int, comp_left: int, deg_left: int, acc: list[GatheredBlock]) -> None:
        if deg_left == 0:
            blocks = list(acc)
            if comp_left > 0:
                blocks.append(GatheredBlock(comp_left, ()))
            found.append(tuple(sorted(blocks, key=block_sort_key)))
            return
        if i == len(shapes):
            return
        shape_comp, exps, w = shapes[i]
        rec(i + 1, comp_left, deg_left, acc)
        s = 1
        while s * shape_comp <= comp_left and s * w <= deg_left:
            acc.append(GatheredBlock(s * shape_comp, exps))
            rec(i + 1, comp_left - s * shape_comp, deg_left - s * w, acc)
            acc.pop()
            s += 1

    rec(0, n, d, [])
    uniq = sorted(set(found), key=lambda m: tuple(block_sort_key(b) for b in m))
    return tuple(uniq)


def basis_index(n: int, d: int) -> dict[Mono, int]:
    return {m: i for i, m in enumerate(enumerate_basis(n, d))}


def class_to_vector(c: HopfClass, n: int, d: int) -> int:
    """Coordinates of a class in the enumerated (n, d) basis, as a bitmask."""
    if c.is_zero():
        return 0
    if c.component != n or c.degree != d:
        raise MalformedInputError(
            f"class has (component, degree) ({c.component}, {c.degree}), expected ({n}, {d})"
        )
    idx = basis_index(n, d)
    v = 0
    for m in c.terms:
        v |= 1 << idx[m]
    return v


def vector_to_class(v: int, n: int, d: int) -> HopfClass:
    basis = enumerate_basis(n, d)
    return from_monos([basis[i] for i in range(len(basis)) if (v >> i) & 1])


def random_class(rng, n: int, d: int, max_terms: int = 3) -> HopfClass:
    """A reproducible random class in the given component and degree."""
    basis = enumerate_basis(n, d)
    if not basis:
        return zero()
    k = rng.randint(0, min(max_terms, len(basis)))
    return from_monos(rng.sample(list(basis), k))
