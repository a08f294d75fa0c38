"""First Steenrod square on Hopf classes.

Sq^1 is determined by its values on ring generators, extended by the
Cartan formula over cup products and the sum rule over transfer products.
Values on generators are configuration data: the degree-1 generators are
forced (Sq^1 x = x^2) and the shipped defaults for the degree-2 generators
are reverse-derived from displayed transgression computations; the table
is overridable from a seed file.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import hopf
from .f2linalg import MalformedInputError
from .hopf import GatheredBlock, HopfClass, Mono


class UnresolvedGeneratorError(MalformedInputError):
    """Sq^1 was requested on a generator with no rule."""

    def __init__(self, component: int, index: int) -> None:
        name = f"a[{component}]" if index == 0 else f"g[{index},{component >> index}]"
        super().__init__(f"no Sq^1 rule for generator {name}")
        self.generator = name


# Rules are keyed by (component, index): index 0 is the alpha class of the
# component, index k >= 1 the gamma class.
RuleKey = tuple[int, int]


@dataclass(frozen=True)
class SqRuleTable:
    rules: dict[RuleKey, HopfClass] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (comp, idx), value in self.rules.items():
            gen_deg = comp if idx == 0 else (comp >> idx) * ((1 << idx) - 1)
            if not value.is_zero():
                if value.component != comp:
                    raise MalformedInputError(
                        f"Sq^1 rule for ({comp}, {idx}) lands in component {value.component}"
                    )
                if value.degree != gen_deg + 1:
                    raise MalformedInputError(
                        f"Sq^1 rule for ({comp}, {idx}) must raise degree by 1"
                    )
            if gen_deg == 1:
                gen = _generator_class(comp, idx)
                if value != hopf.cup(gen, gen):
                    raise MalformedInputError(
                        "degree-1 generators must satisfy Sq^1 x = x^2"
                    )

    def value(self, comp: int, idx: int) -> HopfClass:
        try:
            return self.rules[(comp, idx)]
        except KeyError:
            raise UnresolvedGeneratorError(comp, idx) from None


def _generator_class(comp: int, idx: int) -> HopfClass:
    gen = hopf.alpha(comp) if idx == 0 else hopf.gamma(idx, comp >> idx)
    return hopf.generator_class(gen)


def default_rules() -> SqRuleTable:
    from .grammar import parse_class

    return SqRuleTable(
        {
            (1, 0): parse_class("a[1]^2"),
            (2, 1): parse_class("g[1,1]^2"),
            (2, 0): parse_class("g[1,1]*a[2] + a[1]^2 o a[1]"),
            (4, 1): parse_class("g[2,1] + g[1,1]^2 o g[1,1]"),
        }
    )


def _sq1_block(b: GatheredBlock, rules: SqRuleTable) -> HopfClass:
    """Cartan formula inside one gathered block."""
    if not b.exps:
        return hopf.zero()
    acc = hopf.zero()
    for i, (k, e) in enumerate(b.exps):
        if e % 2 == 0:
            continue  # Sq^1 of an even cup power vanishes mod 2
        rest_exps = tuple(
            (kk, ee - 1 if j == i else ee)
            for j, (kk, ee) in enumerate(b.exps)
            if not (j == i and ee == 1)
        )
        rest = (GatheredBlock(b.component, rest_exps),)
        term = hopf.cup(hopf.from_monos([rest]), rules.value(b.component, k))
        acc = acc + term
    return acc


def _sq1_mono(m: Mono, rules: SqRuleTable) -> HopfClass:
    acc = hopf.zero()
    for i, b in enumerate(m):
        sq_b = _sq1_block(b, rules)
        if sq_b.is_zero():
            continue
        rest = hopf.from_monos([m[:i] + m[i + 1 :]])
        acc = acc + hopf.odot(rest, sq_b)
    return acc


def sq1(c: HopfClass, rules: SqRuleTable | None = None) -> HopfClass:
    """Sq^1 of a class; raises UnresolvedGeneratorError on missing rules."""
    if rules is None:
        rules = default_rules()
    acc = hopf.zero()
    for m in c.terms:
        acc = acc + _sq1_mono(m, rules)
    return acc


def rules_from_seed(entries: list[dict]) -> SqRuleTable:
    """Build a rule table from seed-file entries.

    Each entry is {"generator": <single generator expression>,
    "value": <class expression>}.
    """
    from .grammar import parse_class

    rules: dict[RuleKey, HopfClass] = {}
    for entry in entries:
        gen_class = parse_class(entry["generator"])
        if len(gen_class.terms) != 1:
            raise MalformedInputError("rule generator must be a single monomial")
        (mono,) = gen_class.terms
        if len(mono) != 1 or len(mono[0].exps) != 1 or mono[0].exps[0][1] != 1:
            raise MalformedInputError("rule generator must be a single ring generator")
        key = (mono[0].component, mono[0].exps[0][0])
        rules[key] = parse_class(entry["value"])
    return SqRuleTable(rules)
