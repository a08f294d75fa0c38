import random

import pytest

from uflag import hopf
from uflag.f2linalg import MalformedInputError
from uflag.grammar import ParseError, format_class, format_mono, parse_class
from uflag.hopf import GatheredBlock, alpha, gamma, unit

p = parse_class


def tensor_cup(t1, t2):
    """Factorwise cup product of two tensor classes."""
    acc = set()
    for l1, r1 in t1.pairs:
        for l2, r2 in t2.pairs:
            left = hopf.cup(hopf.from_monos([l1]), hopf.from_monos([l2]))
            right = hopf.cup(hopf.from_monos([r1]), hopf.from_monos([r2]))
            for ml in left.terms:
                for mr in right.terms:
                    pair = (ml, mr)
                    acc.symmetric_difference_update({pair})
    return hopf.TensorClass(frozenset(acc))


def test_generator_grading():
    assert gamma(1, 1).component == 2 and gamma(1, 1).degree == 1
    assert gamma(2, 1).component == 4 and gamma(2, 1).degree == 3
    assert gamma(1, 2).component == 4 and gamma(1, 2).degree == 2
    assert alpha(3).component == 3 and alpha(3).degree == 3
    assert unit(5).degree == 0


def test_normalize_merges():
    g11 = GatheredBlock(2, ((1, 1),))
    assert hopf.normalize([g11, g11]).is_zero()  # binom(2,1) even
    a1 = GatheredBlock(1, ((0, 1),))
    a2 = GatheredBlock(2, ((0, 1),))
    assert hopf.normalize([a1, a2]) == p("a[3]")  # binom(3,1) odd
    assert hopf.normalize([GatheredBlock(2, ()), GatheredBlock(3, ())]) == p("1[5]")


def test_block_component_mismatch_rejected():
    with pytest.raises(MalformedInputError):
        hopf.block_from_factors([(gamma(1, 1), 1), (alpha(3), 1)])


def test_odot_examples():
    assert hopf.odot(p("g[1,1]"), p("a[2] o 1[2]")) == p("g[1,1] o a[2] o 1[2]")
    assert hopf.odot(p("a[2]"), p("a[2]")).is_zero()
    assert hopf.odot(p("g[1,1]^2"), p("g[1,1]")) == p("g[1,1]^2 o g[1,1]")


def test_coproduct_examples():
    # The three displayed expansions.
    (a2,) = p("a[2]").terms
    (a1,) = p("a[1]").terms
    d_a2 = hopf.coproduct(p("a[2]"))
    assert d_a2.pairs == frozenset({(a2, ()), ((), a2), (a1, a1)})
    d_12 = hopf.coproduct(p("1[2]"))
    assert len(d_12.pairs) == 3
    d_mixed = hopf.coproduct(p("a[1] o 1[2]"))
    assert len(d_mixed.pairs) == 6
    rendered = sorted(f"{format_mono(l)}|{format_mono(r)}" for l, r in d_mixed.pairs)
    assert rendered == sorted(
        [
            "a[1] o 1[2]|1[0]",
            "a[1] o 1[1]|1[1]",
            "a[1]|1[2]",
            "1[2]|a[1]",
            "1[1]|a[1] o 1[1]",
            "1[0]|a[1] o 1[2]",
        ]
    )


def test_coproduct_component_and_errors():
    tc = hopf.coproduct_component(p("a[2] o 1[2]"), (2, 2))
    assert all(hopf.mono_component(l) == 2 for l, _ in tc.pairs)
    with pytest.raises(MalformedInputError):
        hopf.coproduct_component(p("a[2]"), (2, 2))


def test_cup_examples():
    assert hopf.cup(p("g[1,1]"), p("a[1] o 1[2]")).is_zero()  # components 2 vs 3
    y = p("g[1,1] o a[1]")
    assert hopf.cup(p("1[3]"), y) == y
    lhs = hopf.cup(p("g[1,1] o 1[1] + a[1] o 1[2]"), p("a[1] o a[2]"))
    assert lhs == p("a[1] o g[1,1]*a[2] + a[1]^2 o a[2] + a[1] o a[1]^2 o a[1]")
    assert hopf.cup(p("g[1,1] o 1[2] + a[1] o 1[3]"), p("g[1,2]")) == p(
        "g[1,1]^2 o g[1,1]"
    )


def test_cup_left_right_expansion_agree():
    rng = random.Random(3)
    for _ in range(120):
        n = rng.randint(1, 5)
        a = hopf.random_class(rng, n, rng.randint(0, 4))
        b = hopf.random_class(rng, n, rng.randint(0, 4))
        assert hopf.cup(a, b) == hopf.cup_expand_left(a, b)


def test_grading_invariants():
    rng = random.Random(4)
    for _ in range(150):
        n1, n2 = rng.randint(1, 3), rng.randint(1, 3)
        d1, d2 = rng.randint(0, 3), rng.randint(0, 3)
        a = hopf.random_class(rng, n1, d1)
        b = hopf.random_class(rng, n2, d2)
        ab = hopf.odot(a, b)
        if not ab.is_zero():
            assert ab.component == n1 + n2
            assert ab.degree == d1 + d2
        if n1 == n2:
            c = hopf.cup(a, b)
            if not c.is_zero():
                assert c.component == n1
                assert c.degree == d1 + d2


def test_cup_commutative_associative():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 5)
        a = hopf.random_class(rng, n, rng.randint(0, 5))
        b = hopf.random_class(rng, n, rng.randint(0, 5))
        c = hopf.random_class(rng, n, rng.randint(0, 5))
        assert hopf.cup(a, b) == hopf.cup(b, a)
        assert hopf.cup(hopf.cup(a, b), c) == hopf.cup(a, hopf.cup(b, c))


def test_bialgebra_laws():
    rng = random.Random(6)
    for _ in range(60):
        n = rng.randint(1, 4)
        d = rng.randint(0, 4)
        a = hopf.random_class(rng, n, d)
        b = hopf.random_class(rng, n, rng.randint(0, 4))
        # Counit: the (n, 0) part of the coproduct recovers the class.
        if not a.is_zero():
            right_unit = hopf.coproduct_component(a, (n, 0))
            back = hopf.from_monos([l for l, r in right_unit.pairs if r == ()])
            assert back == a
        # Compatibility of coproduct and cup, factorwise.
        assert tensor_cup(hopf.coproduct(a), hopf.coproduct(b)).pairs == (
            hopf.coproduct(hopf.cup(a, b)).pairs
        )


def test_coassociativity():
    rng = random.Random(8)
    for _ in range(40):
        n = rng.randint(1, 4)
        a = hopf.random_class(rng, n, rng.randint(0, 3), max_terms=2)
        left: set = set()
        right: set = set()
        for l, r in hopf.coproduct(a).pairs:
            for x, y in hopf.coproduct(hopf.from_monos([l])).pairs:
                left.symmetric_difference_update({(x, y, r)})
            for y, z in hopf.coproduct(hopf.from_monos([r])).pairs:
                right.symmetric_difference_update({(l, y, z)})
        assert left == right


def test_enumerate_basis():
    b31 = hopf.enumerate_basis(3, 1)
    assert [format_mono(m) for m in b31] == ["g[1,1] o 1[1]", "a[1] o 1[2]"]
    assert [format_mono(m) for m in hopf.enumerate_basis(4, 0)] == ["1[4]"]
    for d in range(9):
        assert len(hopf.enumerate_basis(2, d)) == d + 1
    # Degree-3 monomials of component 3: seven of them (the printed list of
    # six misses one, which Gysin exactness against the subgroup dimensions
    # pins down).
    assert [len(hopf.enumerate_basis(3, d)) for d in range(4)] == [1, 2, 4, 7]


def test_enumerate_monomials_are_valid_and_unique():
    for n in range(1, 6):
        for d in range(7):
            basis = hopf.enumerate_basis(n, d)
            assert len(set(basis)) == len(basis)
            for m in basis:
                assert hopf.mono_component(m) == n
                assert hopf.mono_degree(m) == d
                profiles = [b.exps for b in m]
                assert len(set(profiles)) == len(profiles)
                assert hopf.normalize_blocks(list(m)) == m


def test_normalize_idempotent_on_random_multisets():
    rng = random.Random(9)
    for _ in range(300):
        n = rng.randint(1, 5)
        d = rng.randint(0, 5)
        basis = hopf.enumerate_basis(n, d)
        if not basis:
            continue
        mono = rng.choice(basis)
        assert hopf.normalize_blocks(list(mono)) == mono


def test_parse_format_round_trip():
    cases = [
        "g[1,1] o 1[1]",
        "a[2] o 1[2] + g[1,2]",
        "g[1,1]^2*a[2]",
        "g[2,1]*g[1,2] o a[1]^3",
        "0",
    ]
    for text in cases:
        c = parse_class(text)
        assert parse_class(format_class(c)) == c
    rng = random.Random(10)
    for _ in range(80):
        c = hopf.random_class(rng, rng.randint(1, 5), rng.randint(0, 5))
        assert parse_class(format_class(c)) == c


def test_parse_canonicalizes_block_example():
    c = parse_class("g[1,1]^2 * a[2]")
    (mono,) = c.terms
    assert len(mono) == 1
    assert c.component == 2 and c.degree == 4


def test_parse_errors_have_positions():
    with pytest.raises(ParseError) as exc:
        parse_class("g[1,1] o q")
    assert exc.value.position == 9
    with pytest.raises(ParseError):
        parse_class("g[1,1] + a[1]")  # component mix under +
    with pytest.raises(ParseError):
        parse_class("g[1]")
