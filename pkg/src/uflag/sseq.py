"""Seeded multiplicative first-quadrant spectral sequence over F_2.

The engine targets the fibrations SO(n) -> M -> B B_n^+: the second page
is the tensor product of the base cohomology (served by gysin.BposRing)
with the truncated polynomial fiber algebra of SO(n).  Differentials are
never derived from geometry here; they are seed data on fiber generators,
extended base-linearly and by the Leibniz rule.

Fiber bookkeeping uses the binary factorization of monomials: every
monomial is a square-free product of the factors b_i^(2^j), and a seed at
page r assigns a value to one such factor.  This matches the way the
source computations track transgressing powers, and it makes the Leibniz
extension a one-line sum over factors.

Assertion seeds ("the differential on this element is nonzero, value
unspecified") are handled by branching: the engine enumerates every
admissible concrete value on the current page, runs each branch to the
end, prunes branches that contradict another assertion (or a declared
restriction-to-smaller-order constraint), and merges.  A cell is reported
exact only when every surviving branch agrees; otherwise it carries a
dimension range.  An assertion whose source class is already dead is a
hard contradiction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import gysin, hopf
from .f2linalg import MalformedInputError, low_bit, reduce_mod, rref, span_contains, span_sum
from .hopf import HopfClass


class SeedContradictionError(RuntimeError):
    """An asserted-nonzero differential is forced to vanish."""


# ---------------------------------------------------------------------------
# Fiber algebra


@dataclass(frozen=True)
class FiberAlgebra:
    """H*(SO(n)): truncated polynomial generators b_i in odd degrees i."""

    n: int
    generators: tuple[tuple[int, int], ...]  # (degree i, truncation power)

    @property
    def top_degree(self) -> int:
        return sum(i * (p - 1) for i, p in self.generators)

    def monomials(self) -> dict[int, list[tuple[int, ...]]]:
        """Exponent tuples by degree, lexicographically ordered."""
        by_deg: dict[int, list[tuple[int, ...]]] = {}
        ranges = [range(p) for _, p in self.generators]
        for exps in itertools.product(*ranges):
            d = sum(i * e for (i, _), e in zip(self.generators, exps))
            by_deg.setdefault(d, []).append(exps)
        for lst in by_deg.values():
            lst.sort()
        return by_deg

    def degree_of(self, exps: tuple[int, ...]) -> int:
        return sum(i * e for (i, _), e in zip(self.generators, exps))

    def mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...] | None:
        out = tuple(x + y for x, y in zip(a, b))
        for (_, p), e in zip(self.generators, out):
            if e >= p:
                return None
        return out

    def binary_factors(self, exps: tuple[int, ...]) -> list[tuple[int, int]]:
        """Square-free factorization into (generator position, power-of-2 exponent)."""
        out = []
        for pos, e in enumerate(exps):
            j = 1
            while e:
                if e & 1:
                    out.append((pos, j))
                e >>= 1
                j <<= 1
        return out

    def factor_tuple(self, pos: int, power: int) -> tuple[int, ...]:
        return tuple(power if k == pos else 0 for k in range(len(self.generators)))

    def divide(self, exps: tuple[int, ...], pos: int, power: int) -> tuple[int, ...]:
        return tuple(e - power if k == pos else e for k, e in enumerate(exps))

    def format_mono(self, exps: tuple[int, ...]) -> str:
        parts = []
        for (i, _), e in zip(self.generators, exps):
            if e == 1:
                parts.append(f"b{i}")
            elif e > 1:
                parts.append(f"b{i}^{e}")
        return "*".join(parts) if parts else "1"

    def parse_mono(self, text: str) -> tuple[int, ...]:
        exps = [0] * len(self.generators)
        text = text.strip()
        if text in ("1", ""):
            return tuple(exps)
        for part in text.split("*"):
            part = part.strip()
            if not part.startswith("b"):
                raise MalformedInputError(f"bad fiber monomial {text!r}")
            if "^" in part:
                name, _, etext = part.partition("^")
                e = int(etext)
            else:
                name, e = part, 1
            i = int(name[1:])
            for pos, (deg, p) in enumerate(self.generators):
                if deg == i:
                    exps[pos] += e
                    if exps[pos] >= p:
                        raise MalformedInputError(f"{part} exceeds truncation {p}")
                    break
            else:
                raise MalformedInputError(f"no fiber generator of degree {i}")
        return tuple(exps)


def fiber_algebra(n: int) -> FiberAlgebra:
    if n < 2:
        raise MalformedInputError("fiber algebra needs n >= 2")
    gens = []
    for i in range(1, n, 2):
        p = 1
        while i * p < n:
            p <<= 1
        gens.append((i, p))
    return FiberAlgebra(n, tuple(gens))


# ---------------------------------------------------------------------------
# Seeds


@dataclass(frozen=True)
class Seed:
    """A declared differential on a fiber generator power.

    value is either a tuple of (upstairs class, fiber exponent tuple)
    terms, or the string "nonzero" for an assertion seed.  base_factor
    scales the named source; assertion seeds with a base_factor act as
    consistency constraints on the branch values of the plain assertion
    for the same source.  restrict_nonzero names a smaller order whose
    induced spectral sequence must also see a nonzero value (naturality
    along restriction), which prunes branch candidates.
    """

    page: int
    source: tuple[int, int]  # (generator position, power-of-2 exponent)
    value: tuple | str
    base_factor: HopfClass | None = None
    restrict_nonzero: int | None = None
    sq1_partner: tuple[tuple[int, int], int] | None = None
    note: str = ""


def seed_from_json(entry: dict, fiber: FiberAlgebra) -> Seed:
    from .grammar import parse_class

    src = fiber.parse_mono(entry["source"])
    factors = fiber.binary_factors(src)
    if len(factors) != 1:
        raise MalformedInputError(
            f"seed source {entry['source']!r} must be a single 2-power generator"
        )
    raw = entry["value"]
    value: tuple | str
    if raw == "nonzero":
        value = "nonzero"
    elif raw == "0":
        value = ()
    elif isinstance(raw, str):
        value = ((parse_class(raw), fiber.parse_mono("1")),)
    else:
        value = tuple(
            (parse_class(t["base"]), fiber.parse_mono(t.get("fiber", "1")))
            for t in raw["terms"]
        )
    bf = entry.get("base_factor")
    partner = None
    if "sq1_partner" in entry:
        pentry = entry["sq1_partner"]
        pfactors = fiber.binary_factors(fiber.parse_mono(pentry["source"]))
        if len(pfactors) != 1:
            raise MalformedInputError("sq1_partner source must be a single generator power")
        partner = (pfactors[0], pentry["page"])
    return Seed(
        page=entry["page"],
        source=factors[0],
        value=value,
        base_factor=parse_class(bf) if bf else None,
        restrict_nonzero=entry.get("restrict_nonzero"),
        sq1_partner=partner,
        note=entry.get("note", ""),
    )


def load_seed_file(data: dict, n: int) -> tuple[list[Seed], list[dict]]:
    """Parse a seed file; returns (seeds, sq1 rule entries)."""
    if data.get("n") != n:
        raise MalformedInputError(f"seed file is for n={data.get('n')}, not n={n}")
    fiber = fiber_algebra(n)
    seeds = [seed_from_json(e, fiber) for e in data.get("seeds", [])]
    return seeds, data.get("sq1_rules", [])


# ---------------------------------------------------------------------------
# Pages and cells

Cell = tuple[int, int]


@dataclass
class CellReport:
    p: int
    q: int
    dim_lo: int
    dim_hi: int
    dim_exact: bool
    basis_exact: bool

    @property
    def dim(self) -> int:
        return self.dim_hi


@dataclass
class Page:
    """A snapshot of one page: cell dimensions plus determinacy flags."""

    r: int
    cells: dict[Cell, CellReport]

    def dim(self, p: int, q: int) -> int:
        rep = self.cells.get((p, q))
        return rep.dim if rep else 0


@dataclass
class SSReport:
    n: int
    cutoff: int
    pages: list[Page]
    einf: dict[Cell, CellReport]
    totals: list[CellReport]  # indexed by total degree, p/q unused
    poincare: tuple[int, ...]
    audit: list[str]
    branch_count: int

    def poincare_text(self) -> str:
        return polynomial_text(self.poincare)


def polynomial_text(coeffs: tuple[int, ...]) -> str:
    parts = []
    for d, c in enumerate(coeffs):
        if not c:
            continue
        if d == 0:
            parts.append(str(c))
        else:
            t = "t" if d == 1 else f"t^{d}"
            parts.append(t if c == 1 else f"{c}*{t}")
    return " + ".join(parts) if parts else "0"


def poincare_complete(low_dims: list[int], manifold_dim: int) -> tuple[int, ...]:
    """Palindromic completion of a prefix of Betti numbers."""
    if manifold_dim < 0 or len(low_dims) > manifold_dim + 1:
        raise MalformedInputError("dimension prefix longer than the manifold allows")
    out: list[int | None] = [None] * (manifold_dim + 1)
    for d, c in enumerate(low_dims):
        out[d] = c
    for d, c in enumerate(low_dims):
        mirror = manifold_dim - d
        if out[mirror] is None:
            out[mirror] = c
        elif out[mirror] != c:
            raise MalformedInputError(
                f"duality conflict in degree {mirror}: {out[mirror]} vs {c}"
            )
    if any(c is None for c in out):
        raise MalformedInputError("prefix does not reach the middle degree")
    return tuple(out)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# The run


@dataclass
class _State:
    """One branch of a run: cycle and boundary subspaces per cell.

    zt marks cells whose cycle space could not be computed exactly
    (unknown multiplication blocks or untracked targets); bt marks cells
    whose boundary space may be missing unknown contributions.  Dimensions
    of flagged cells are reported as bounded, never as exact.
    """

    zs: dict[Cell, list[int]]
    bs: dict[Cell, list[int]]
    zt: set[Cell]
    bt: set[Cell]
    audit: list[str]
    overrides: dict[tuple[int, tuple[int, int]], list[tuple[int, tuple[int, ...]]]]
    ranks: dict[tuple[int, Cell], int] = None  # (page, cell) -> exact rank of d_r out
    # overrides: (page, source) -> concrete value as [(coords at deg r, fiber tuple)]

    def __post_init__(self) -> None:
        if self.ranks is None:
            self.ranks = {}

    def tainted(self, cell: Cell) -> bool:
        return cell in self.zt or cell in self.bt

    def clone(self) -> "_State":
        return _State(
            zs={c: list(v) for c, v in self.zs.items()},
            bs={c: list(v) for c, v in self.bs.items()},
            zt=set(self.zt),
            bt=set(self.bt),
            audit=list(self.audit),
            overrides={k: list(v) for k, v in self.overrides.items()},
            ranks=dict(self.ranks),
        )


class Run:
    def __init__(self, n: int, seeds: list[Seed], cutoff: int | None = None) -> None:
        self.n = n
        self.fiber = fiber_algebra(n)
        self.qmax = self.fiber.top_degree
        md = gysin.default_cutoff(n)
        if cutoff is None:
            # Binding range: up to the middle degree, where duality takes
            # over (but at least 3, which the order-3 case needs whole).
            cutoff = min(md, max((md + 1) // 2, 3))
        self.cutoff = cutoff
        if self.cutoff > md:
            raise MalformedInputError("cutoff beyond the manifold dimension")
        self.pmax = max(gysin.default_cutoff(n), self.cutoff + 4)
        self.ring = gysin.get_ring(n, self.pmax)
        self.seeds = seeds
        self.monos = self.fiber.monomials()
        self._mult_cache: dict = {}
        self.pages: list[Page] = []
        self.audit: list[str] = []
        self._check_seeds()

    # -- lattice helpers

    def base_dim(self, p: int) -> int:
        if p < 0 or p > self.pmax:
            return 0
        return self.ring.dim(p)

    def cell_monos(self, q: int) -> list[tuple[int, ...]]:
        return self.monos.get(q, [])

    def cell_dim(self, cell: Cell) -> int:
        p, q = cell
        return self.base_dim(p) * len(self.cell_monos(q))

    def cells(self) -> list[Cell]:
        out = []
        for p in range(self.pmax + 1):
            for q in range(self.qmax + 1):
                if self.cell_dim((p, q)):
                    out.append((p, q))
        return out

    def _check_seeds(self) -> None:
        for s in self.seeds:
            if s.value == "nonzero":
                continue
            pos, power = s.source
            q = self.fiber.generators[pos][0] * power
            want = (s.page, q - s.page + 1)
            for base, fib in s.value:
                if base.is_zero():
                    continue
                got = (base.degree, self.fiber.degree_of(fib))
                if got != want:
                    raise MalformedInputError(
                        f"seed on b{self.fiber.generators[pos][0]}^{power} at page "
                        f"{s.page} has bidegree {got}, expected {want}"
                    )

    # -- base multiplication, cached

    def _mult_columns(self, key, p: int) -> tuple[list[int], list[bool]]:
        """Columns of multiplication into degree p + deg, with partial flags."""
        cache_key = (key, p)
        if cache_key in self._mult_cache:
            return self._mult_cache[cache_key]
        kind, payload, deg = key
        if kind == "up":
            cols, partial = self.ring.multiply(payload, p)
        else:
            cols, partial = self._mult_vec_columns(payload, deg, p)
        self._mult_cache[cache_key] = (cols, partial)
        return cols, partial

    def _mult_vec_columns(self, coords: int, dv: int, p: int) -> tuple[list[int], list[bool]]:
        """Multiplication by a downstairs coordinate vector of degree dv."""
        ring = self.ring
        if p == 0:
            # Multiplying by the unit returns the vector itself, exactly.
            return [coords], [False]
        n_reps_v = ring.n_reps(dv)
        rep_part = coords & ((1 << n_reps_v) - 1)
        ker_part = coords >> n_reps_v
        up_vec = ring.coords_to_upstairs(rep_part, dv)
        up_class = hopf.vector_to_class(up_vec, self.n, dv)
        dt = p + dv
        cols: list[int] = []
        partial: list[bool] = []
        base_cols, base_partial = ring.multiply(up_class, p) if not up_class.is_zero() else (
            [0] * ring.dim(p),
            [False] * ring.dim(p),
        )
        ker_classes = [
            hopf.vector_to_class(v, self.n, dv)
            for i, v in enumerate(ring.kernel[dv])
            if (ker_part >> i) & 1
        ]
        n_reps_t = ring.n_reps(dt)
        for j in range(ring.dim(p)):
            col = base_cols[j]
            part = base_partial[j]
            if ker_classes:
                if j < ring.n_reps(p):
                    b_up = ring.rep_class_upstairs(p, j)
                    for kc in ker_classes:
                        prod = hopf.cup(kc, b_up)
                        vec = 0 if prod.is_zero() else hopf.class_to_vector(prod, self.n, dt)
                        from .f2linalg import coordinates

                        coeff = coordinates(ring.kernel[dt], vec)
                        if coeff is None:
                            raise MalformedInputError("kernel ideal violated")
                        col ^= coeff << n_reps_t
                    part = True  # image components of ker x rep products unknown
                else:
                    part = True  # ker x ker products fully unknown
            cols.append(col)
            partial.append(part)
        return cols, partial

    # -- differential assembly

    def _page_values(self, state: _State, r: int) -> dict[tuple[int, int], list]:
        """Concrete seed values at page r: source -> [(mult key or coords, fiber)]."""
        values: dict[tuple[int, int], list] = {}
        for s in self.seeds:
            if s.page != r or s.value == "nonzero" or s.base_factor is not None:
                continue
            terms = []
            for base, fib in s.value:
                if base.is_zero():
                    continue
                terms.append((("up", base, base.degree), fib))
            values[s.source] = terms
        for (page, source), vec_terms in state.overrides.items():
            if page == r:
                values[source] = [
                    (("down", coords, r), fib) for coords, fib in vec_terms
                ]
        return values

    def _cell_columns(self, state: _State, r: int, cell: Cell, values) -> tuple[list[int], list[bool], bool]:
        """Lattice columns of d_r on a cell; returns (cols, partial, out_of_range)."""
        p, q = cell
        monos = self.cell_monos(q)
        bdim = self.base_dim(p)
        tq = q - r + 1
        tp = p + r
        tmonos = self.cell_monos(tq) if tq >= 0 else []
        tindex = {m: i for i, m in enumerate(tmonos)}
        tbdim = self.base_dim(tp)
        cols = [0] * (len(monos) * bdim)
        partial = [False] * len(cols)
        out_of_range = False
        for mi, m in enumerate(monos):
            terms = []
            for pos, power in self.fiber.binary_factors(m):
                val = values.get((pos, power))
                if not val:
                    continue
                rest = self.fiber.divide(m, pos, power)
                for key, fib in val:
                    target = self.fiber.mul(rest, fib)
                    if target is None:
                        continue
                    terms.append((key, target))
            if not terms:
                continue
            if tq < 0:
                continue
            if tp > self.pmax or tbdim == 0:
                out_of_range = True
                continue
            for key, target in terms:
                if target not in tindex:
                    continue
                mult_cols, mult_partial = self._mult_columns(key, p)
                shift = tindex[target] * tbdim
                for j in range(bdim):
                    idx = mi * bdim + j
                    cols[idx] ^= mult_cols[j] << shift
                    partial[idx] = partial[idx] or mult_partial[j]
        return cols, partial, out_of_range

    # -- one page of one branch

    def _split_clean(self, zvecs: list[int], partial: list[bool]) -> tuple[list[int], list[int]]:
        """Split a cycle space into (partial-free part, leftover complement)."""
        bad = [i for i, flag in enumerate(partial) if flag]
        if not bad:
            return list(zvecs), []
        clean: list[int] = []
        dirty: list[int] = []
        work = list(zvecs)
        # Eliminate bad coordinates greedily; vectors still touching a bad
        # coordinate after elimination form the leftover complement.
        for i in bad:
            pivot = None
            for v in work:
                if (v >> i) & 1:
                    pivot = v
                    break
            if pivot is None:
                continue
            work = [v ^ pivot if v is not pivot and (v >> i) & 1 else v for v in work]
            dirty.append(pivot)
            work.remove(pivot)
        clean = work
        return clean, dirty

    def _process_page(self, state: _State, r: int) -> list[_State]:
        branches = self._branch_assertions(state, r)
        out = []
        for br in branches:
            done = self._advance(br, r)
            if done is not None:
                out.append(done)
        if not out and branches:
            raise SeedContradictionError(
                f"page {r}: every admissible branch violates an assertion seed"
            )
        return out

    def _branch_assertions(self, state: _State, r: int) -> list[_State]:
        plain = [
            s
            for s in self.seeds
            if s.page == r and s.value == "nonzero" and s.base_factor is None
        ]
        states = [state]
        for s in plain:
            pos, power = s.source
            qf = self.fiber.generators[pos][0] * power
            src_cell = (0, qf)
            tgt_cell = (r, qf - r + 1)
            src_mono = self.fiber.factor_tuple(pos, power)
            mi = self.cell_monos(qf).index(src_mono)
            src_vec = 1 << (mi * self.base_dim(0))
            label = (
                f"assertion seed on {self.fiber.format_mono(src_mono)} at page {r}"
            )
            new_states: list[_State] = []
            for st in states:
                z, b = st.zs[src_cell], st.bs[src_cell]
                if not span_contains(z, src_vec) or span_contains(b, src_vec):
                    st.audit.append(f"{label}: source class dead, branch pruned")
                    continue
                candidates = self._quotient_candidates(st, tgt_cell)
                candidates = [
                    u
                    for u in candidates
                    if self._restriction_ok(s, u, tgt_cell)
                    and self._sq1_partner_ok(st, s, u, tgt_cell, r)
                ]
                if not candidates:
                    st.audit.append(f"{label}: no admissible value, branch pruned")
                    continue
                for u in candidates:
                    nst = st.clone()
                    nst.overrides[(r, s.source)] = self._vector_terms(u, tgt_cell)
                    nst.audit.append(
                        f"page {r}: branching on asserted-nonzero "
                        f"d{r}({self.fiber.format_mono(src_mono)})"
                    )
                    new_states.append(nst)
            if not new_states:
                raise SeedContradictionError(f"{label}: forced zero in every branch")
            states = new_states
        return states

    def _vector_terms(self, u: int, cell: Cell) -> list[tuple[int, tuple[int, ...]]]:
        p, q = cell
        bdim = self.base_dim(p)
        out = []
        for mi, m in enumerate(self.cell_monos(q)):
            coords = (u >> (mi * bdim)) & ((1 << bdim) - 1)
            if coords:
                out.append((coords, m))
        return out

    def _quotient_candidates(self, state: _State, cell: Cell) -> list[int]:
        z, b = state.zs[cell], state.bs[cell]
        qbasis = []
        span = list(b)
        for v in z:
            red = reduce_mod(v, rref(span))
            if red:
                qbasis.append(red)
                span.append(red)
        if len(qbasis) > 14:
            raise MalformedInputError(
                f"assertion branching too wide at cell {cell} ({len(qbasis)} dims)"
            )
        out = []
        for bits in range(1, 1 << len(qbasis)):
            u = 0
            for i, v in enumerate(qbasis):
                if (bits >> i) & 1:
                    u ^= v
            out.append(u)
        return out

    def _restriction_ok(self, seed: Seed, u: int, cell: Cell) -> bool:
        if seed.restrict_nonzero is None:
            return True
        return _restricted_nonzero(self, seed, u, cell)

    def _sq1_partner_ok(self, state: _State, seed: Seed, u: int, cell: Cell, r: int) -> bool:
        """Transgression compatibility: Sq^1 of the candidate value must
        agree with the declared differential of the fiber class Sq^1(source)
        on the next page (the transgression theorem the source computations
        already rely on).  Candidates the Sq^1 table cannot evaluate are
        kept."""
        if seed.sq1_partner is None:
            return True
        from . import steenrod

        partner_src, partner_page = seed.sq1_partner
        partner_value = None
        for s in self.seeds:
            if s.page == partner_page and s.source == partner_src and isinstance(s.value, tuple):
                partner_value = s.value
        if partner_value is None or partner_page != r + 1:
            return True
        p, q = cell
        if q != 0:
            return True
        n_reps = self.ring.n_reps(p)
        if u >> n_reps:
            return True  # kernel-side part: no upstairs lift to act on
        lift = hopf.vector_to_class(self.ring.coords_to_upstairs(u, p), self.n, p)
        try:
            sq = steenrod.sq1(lift)
        except steenrod.UnresolvedGeneratorError:
            return True
        svec = self.ring.class_to_coords(sq, p + 1) if not sq.is_zero() else 0
        vvec = 0
        for base, fib in partner_value:
            if any(fib):
                return True  # partner value with fiber part: not comparable here
            vvec ^= self.ring.class_to_coords(base, p + 1)
        # Page-(r+1) boundary of the bottom-row target: what accumulated so
        # far plus this page's images, over-approximated by multiplying the
        # candidate through the full base degree p + 1 - r.
        boundary = list(state.bs.get((p + 1, 0), []))
        extra_deg = p + 1 - r
        if 0 <= extra_deg <= self.pmax:
            cols, partial = self._mult_vec_columns(u, p, extra_deg)
            boundary = span_sum(boundary, [c for c, bad in zip(cols, partial) if not bad])
        return span_contains(boundary, svec ^ vvec)

    def _advance(self, state: _State, r: int) -> _State | None:
        values = self._page_values(state, r)
        all_cells = self.cells()
        matrices: dict[Cell, tuple[list[int], list[bool], bool]] = {
            cell: self._cell_columns(state, r, cell, values) for cell in all_cells
        }
        if not self._constraints_hold(state, r, matrices):
            return None
        new_zs: dict[Cell, list[int]] = {}
        new_bs: dict[Cell, list[int]] = {c: list(v) for c, v in state.bs.items()}
        new_zt = set(state.zt)
        new_bt = set(state.bt)
        images: dict[Cell, list[int]] = {c: [] for c in all_cells}
        kernels: dict[Cell, list[int]] = {}
        rank_out: dict[Cell, int] = {}
        for cell in all_cells:
            p, q = cell
            z = state.zs[cell]
            cols, partial, out_of_range = matrices[cell]
            target = (p + r, q - r + 1)
            if out_of_range:
                new_zt.add(cell)
            if not z or all(c == 0 for c in cols):
                kernels[cell] = list(z)
                continue
            if target in state.bt:
                # The target's boundary space may be under-approximated, so
                # kernel membership tests against it are unreliable.
                new_zt.add(cell)
            if cell in state.zt:
                # Images computed from an unreliable cycle space.
                new_bt.add(target)
            clean, dirty = self._split_clean(z, partial)
            if dirty:
                new_zt.add(cell)
                new_bt.add(target)
            tgt_b = state.bs.get(target, [])
            pure: list[int] = []
            work: list[tuple[int, int]] = []  # (reduced image, cycle rep)
            for zv in clean:
                img = 0
                v = zv
                while v:
                    i = low_bit(v)
                    v &= v - 1
                    img ^= cols[i]
                img = reduce_mod(img, tgt_b)
                if img:
                    self._check_dd(matrices, target, img, r)
                    images[target].append(img)
                for wimg, wz in work:
                    if img and (img >> low_bit(wimg)) & 1:
                        img ^= wimg
                        zv ^= wz
                if img:
                    work.append((img, zv))
                    work.sort(key=lambda t: low_bit(t[0]))
                else:
                    pure.append(zv)
            kernels[cell] = rref(pure + dirty)
            rank_out[cell] = len(work)
        for cell in all_cells:
            nb = new_bs.get(cell, [])
            if images[cell]:
                nb = span_sum(nb, images[cell])
            new_bs[cell] = nb
            nz = kernels.get(cell, [])
            if nb and not all(span_contains(nz, b) for b in nb):
                nz = span_sum(nz, nb)
            new_zs[cell] = nz
        ranks = dict(state.ranks)
        for cell, rk in rank_out.items():
            ranks[(r, cell)] = rk
        return _State(
            new_zs, new_bs, new_zt, new_bt, list(state.audit), state.overrides, ranks
        )

    def _check_dd(self, matrices, target: Cell, img: int, r: int) -> None:
        """d_r applied to a d_r image must vanish identically."""
        if target not in matrices:
            return
        cols, partial, _ = matrices[target]
        out = 0
        v = img
        while v:
            i = low_bit(v)
            v &= v - 1
            if partial[i]:
                return  # cannot certify through unknown blocks
            out ^= cols[i]
        if out:
            raise SeedContradictionError(
                f"d_{r} o d_{r} != 0 out of cell {target}; inconsistent seed data"
            )

    def _constraints_hold(self, state: _State, r: int, matrices) -> bool:
        """Check base-scaled assertion seeds against the branch values."""
        for s in self.seeds:
            if s.page != r or s.value != "nonzero" or s.base_factor is None:
                continue
            pos, power = s.source
            qf = self.fiber.generators[pos][0] * power
            bf = s.base_factor
            dbf = bf.degree or 0
            src_cell = (dbf, qf)
            coords = self.ring.class_to_coords(bf, dbf)
            mono = self.fiber.factor_tuple(pos, power)
            monos = self.cell_monos(qf)
            if mono not in monos or coords == 0:
                state.audit.append(f"constraint at page {r}: source not present, pruned")
                return False
            mi = monos.index(mono)
            src_vec = coords << (mi * self.base_dim(dbf))
            z, b = state.zs[src_cell], state.bs[src_cell]
            if not span_contains(z, src_vec) or span_contains(b, src_vec):
                state.audit.append(
                    f"constraint at page {r}: scaled source already dead, pruned"
                )
                return False
            cols, partial, _ = matrices[src_cell]
            img = 0
            v = src_vec
            bad = False
            while v:
                i = low_bit(v)
                v &= v - 1
                img ^= cols[i]
                bad = bad or partial[i]
            if bad:
                continue  # cannot evaluate; leave the branch alone
            target = (src_cell[0] + r, qf - r + 1)
            if span_contains(state.bs.get(target, []), img):
                state.audit.append(
                    f"page {r}: branch value makes an asserted-nonzero scaled "
                    "differential vanish, pruned"
                )
                return False
        return True

    # -- the main loop

    def execute(self) -> list[_State]:
        init = _State(
            zs={c: self._full_cell(c) for c in self.cells()},
            bs={c: [] for c in self.cells()},
            zt=set(),
            bt=set(),
            audit=[],
            overrides={},
        )
        states = [init]
        self.pages = [self._snapshot(2, states)]
        for r in range(2, self.qmax + 2):
            next_states: list[_State] = []
            for st in states:
                next_states.extend(self._process_page(st, r))
            if not next_states:
                raise SeedContradictionError(f"no consistent branch survives page {r}")
            states = next_states
            self.pages.append(self._snapshot(r + 1, states))
        return states

    def _full_cell(self, cell: Cell) -> list[int]:
        return [1 << i for i in range(self.cell_dim(cell))]

    def _snapshot(self, r: int, states: list[_State]) -> Page:
        cells = {}
        for cell in self.cells():
            dims = [len(st.zs[cell]) - len(st.bs[cell]) for st in states]
            tainted = any(st.tainted(cell) for st in states)
            same_basis = all(
                st.zs[cell] == states[0].zs[cell] and st.bs[cell] == states[0].bs[cell]
                for st in states
            )
            cells[cell] = CellReport(
                cell[0],
                cell[1],
                min(dims),
                max(dims),
                dim_exact=(min(dims) == max(dims) and not tainted),
                basis_exact=same_basis and not tainted,
            )
        return Page(r, cells)

    def report(self) -> SSReport:
        states = self.execute()
        einf_page = self.pages[-1]
        einf = einf_page.cells
        totals: list[CellReport] = []
        for t in range(self.cutoff + 1):
            lo = hi = 0
            exact = True
            for (p, q), rep in einf.items():
                if p + q == t:
                    lo += rep.dim_lo
                    hi += rep.dim_hi
                    exact = exact and rep.dim_exact
            totals.append(CellReport(t, -1, lo, hi, exact, exact))
        audit: list[str] = list(self.audit)
        for st in states:
            for line in st.audit:
                if line not in audit:
                    audit.append(line)
        if len(states) > 1:
            audit.append(f"{len(states)} admissible branches merged")
        for t, rep in enumerate(totals):
            if not rep.dim_exact:
                audit.append(
                    f"total degree {t} only bounded: [{rep.dim_lo}, {rep.dim_hi}]"
                )
        low_dims = [rep.dim_hi for rep in totals]
        try:
            poly = poincare_complete(low_dims, gysin.default_cutoff(self.n))
        except MalformedInputError as exc:
            audit.append(f"duality completion failed: {exc}")
            poly = ()
        return SSReport(
            n=self.n,
            cutoff=self.cutoff,
            pages=self.pages,
            einf=einf,
            totals=totals,
            poincare=poly,
            audit=audit,
            branch_count=len(states),
        )


def _restricted_nonzero(run: Run, seed: Seed, u: int, cell: Cell) -> bool:
    """Naturality filter: the candidate must restrict to a nonzero class.

    The comparison map of the two fibrations sends the order-n spectral
    sequence to the order-m one by the cohomological restriction on the
    base; the asserted differential downstairs is nonzero, so candidates
    restricting to zero are inadmissible.
    """
    m = seed.restrict_nonzero
    assert m is not None
    p, q = cell
    sub = _subrun_state(run.n, m, seed.page)
    if sub is None:
        return True
    sub_run, sub_state = sub
    ring, sring = run.ring, sub_run.ring
    if q != 0:
        return True  # only bottom-row targets supported
    n_reps = ring.n_reps(p)
    rep_part = u & ((1 << n_reps) - 1)
    up = hopf.vector_to_class(ring.coords_to_upstairs(rep_part, p), run.n, p)
    res = gysin.restriction_to(up, run.n, m)
    coords = sring.class_to_coords(res, p) if not res.is_zero() else 0
    if u >> n_reps:
        return True  # kernel-side candidates: restriction not modeled, keep
    cellv = coords  # bottom row: lattice vector == base coords
    z, b = sub_state.zs[(p, 0)], sub_state.bs[(p, 0)]
    return span_contains(z, cellv) and not span_contains(b, cellv)


_SUBRUN_CACHE: dict[tuple[int, int, int], tuple[Run, _State] | None] = {}


def _subrun_state(n: int, m: int, page: int):
    """State of the order-m run at the given page (before its own page-r seeds)."""
    key = (n, m, page)
    if key in _SUBRUN_CACHE:
        return _SUBRUN_CACHE[key]
    from .seeds import builtin_seeds

    try:
        data = builtin_seeds(m)
    except KeyError:
        _SUBRUN_CACHE[key] = None
        return None
    seeds, _ = load_seed_file(data, m)
    sub = Run(m, [s for s in seeds if s.page < page])
    state = _State(
        zs={c: sub._full_cell(c) for c in sub.cells()},
        bs={c: [] for c in sub.cells()},
        zt=set(),
        bt=set(),
        audit=[],
        overrides={},
    )
    for r in range(2, page):
        outs = sub._process_page(state, r)
        state = outs[0]
    _SUBRUN_CACHE[key] = (sub, state)
    return (sub, state)


def e2_page(n: int, cutoff: int) -> Page:
    """The tensor-product second page, with exact flags everywhere."""
    run = Run(n, [], cutoff)
    cells = {}
    for cell in run.cells():
        d = run.cell_dim(cell)
        cells[cell] = CellReport(cell[0], cell[1], d, d, True, True)
    return Page(2, cells)


def run(n: int, seeds: list[Seed], cutoff: int | None = None) -> SSReport:
    return Run(n, seeds, cutoff).report()
