import random

import pytest

from uflag import hopf, steenrod
from uflag.f2linalg import MalformedInputError
from uflag.grammar import parse_class

p = parse_class


def test_sq1_of_unit_is_zero():
    assert steenrod.sq1(p("1[3]")).is_zero()
    assert steenrod.sq1(p("1[5]")).is_zero()


def test_degree_one_rule_is_squaring():
    assert steenrod.sq1(p("a[1]")) == p("a[1]^2")
    assert steenrod.sq1(p("g[1,1]")) == p("g[1,1]^2")


def test_component_three_identity():
    # The displayed degree-3 value of Sq1 on the order-3 page-2 class.
    got = steenrod.sq1(p("g[1,1] o a[1] + a[2] o 1[1]"))
    want = p(
        "g[1,1]*a[2] o 1[1] + a[1]^2 o a[1] o 1[1] + g[1,1]^2 o a[1] + g[1,1] o a[1]^2"
    )
    assert got == want


def test_reverse_derived_rules():
    rules = steenrod.default_rules()
    assert rules.value(2, 0) == p("g[1,1]*a[2] + a[1]^2 o a[1]")
    assert rules.value(4, 1) == p("g[2,1] + g[1,1]^2 o g[1,1]")


def test_cartan_over_cup_powers():
    # Even cup powers die, odd powers reduce by one.
    assert steenrod.sq1(p("a[1]^2")).is_zero()
    assert steenrod.sq1(p("a[1]^3")) == p("a[1]^4")
    assert steenrod.sq1(p("g[1,1]^2*a[2]")) == p("g[1,1]^3*a[2] + g[1,1]^2*a[1]^2 o a[1]")


def test_sq1_raises_degree_by_one():
    rng = random.Random(12)
    for _ in range(60):
        n = rng.randint(1, 4)
        d = rng.randint(0, 4)
        c = hopf.random_class(rng, n, d)
        try:
            s = steenrod.sq1(c)
        except steenrod.UnresolvedGeneratorError:
            continue
        if not s.is_zero():
            assert s.degree == d + 1
            assert s.component == n


def test_sq1_sq1_vanishes():
    rng = random.Random(13)
    checked = 0
    for _ in range(120):
        n = rng.randint(1, 4)
        c = hopf.random_class(rng, n, rng.randint(0, 4))
        try:
            assert steenrod.sq1(steenrod.sq1(c)).is_zero()
            checked += 1
        except steenrod.UnresolvedGeneratorError:
            continue
    assert checked > 40


def test_missing_rule_names_generator():
    with pytest.raises(steenrod.UnresolvedGeneratorError) as exc:
        steenrod.sq1(p("g[2,1]"))
    assert "g[2,1]" in str(exc.value)


def test_rule_table_validation():
    with pytest.raises(MalformedInputError):
        steenrod.SqRuleTable({(1, 0): p("a[1] o 1[1]")})  # wrong: not the square
    with pytest.raises(MalformedInputError):
        steenrod.SqRuleTable({(2, 0): p("a[2]")})  # degree not raised


def test_rules_from_seed_roundtrip():
    entries = [
        {"generator": "a[1]", "value": "a[1]^2"},
        {"generator": "g[1,1]", "value": "g[1,1]^2"},
        {"generator": "a[2]", "value": "g[1,1]*a[2] + a[1]^2 o a[1]"},
    ]
    rules = steenrod.rules_from_seed(entries)
    assert rules.value(2, 0) == p("g[1,1]*a[2] + a[1]^2 o a[1]")
