import pytest

from uflag import gysin, sseq
from uflag.f2linalg import MalformedInputError
from uflag.seeds import builtin_seeds
from uflag.sseq import SeedContradictionError


def load(n):
    seeds, _ = sseq.load_seed_file(builtin_seeds(n), n)
    return seeds


def test_fiber_algebra_values():
    f3 = sseq.fiber_algebra(3)
    assert f3.generators == ((1, 4),)
    dims3 = {d: len(v) for d, v in f3.monomials().items()}
    assert dims3 == {0: 1, 1: 1, 2: 1, 3: 1}
    f4 = sseq.fiber_algebra(4)
    assert f4.generators == ((1, 4), (3, 2))
    dims4 = [len(f4.monomials().get(d, [])) for d in range(7)]
    assert dims4 == [1, 1, 1, 2, 1, 1, 1]
    f5 = sseq.fiber_algebra(5)
    assert f5.generators == ((1, 8), (3, 2))
    assert sum(len(v) for v in f5.monomials().values()) == 16
    assert f5.top_degree == 10
    f2 = sseq.fiber_algebra(2)
    assert f2.generators == ((1, 2),)


def test_fiber_mono_text_round_trip():
    f5 = sseq.fiber_algebra(5)
    for text in ("1", "b1", "b1^4", "b3", "b1^2*b3"):
        assert f5.format_mono(f5.parse_mono(text)) == text


def test_e2_page_dims():
    page3 = sseq.e2_page(3, 3)
    assert [page3.dim(pp, 0) for pp in range(4)] == [1, 1, 2, 3]
    page4 = sseq.e2_page(4, 3)
    assert page4.dim(3, 0) == 6
    assert page4.dim(3, 3) == 12  # two fiber monomials over a 6-dim base
    page2 = sseq.e2_page(2, 1)
    assert page2.dim(0, 1) == 1 and page2.dim(1, 1) == 1


def test_empty_seed_run_collapses():
    rep = sseq.run(2, [], 1)
    run = sseq.Run(2, [], 1)
    for (pp, q), cell in rep.einf.items():
        if pp + q <= 1:
            assert cell.dim == run.cell_dim((pp, q))
            assert cell.dim_exact
    # With every differential zero the limit page is not a manifold's
    # cohomology, and the duality completion reports that instead of lying.
    assert rep.poincare == ()
    assert any("duality completion failed" in a for a in rep.audit)


def test_run_n3():
    rep = sseq.run(3, load(3), 3)
    assert rep.poincare == (1, 1, 1, 1)
    assert rep.branch_count == 1
    assert all(t.dim_exact for t in rep.totals)
    # The limit page is concentrated in the bottom row.
    for (pp, q), cell in rep.einf.items():
        if pp + q <= 3 and q > 0:
            assert cell.dim_hi == 0
    # Total dimension matches the closed manifold.
    assert sum(rep.poincare) == 4


def test_run_n4():
    rep = sseq.run(4, load(4), 3)
    assert rep.poincare == (1, 1, 2, 4, 2, 1, 1)
    assert all(t.dim_exact for t in rep.totals)
    e5 = next(pg for pg in rep.pages if pg.r == 5)
    assert [e5.dim(pp, 0) for pp in range(4)] == [1, 1, 2, 4]
    # Nothing survives in the leftmost column in positive degrees.
    for (pp, q), cell in rep.einf.items():
        if pp == 0 and 0 < q <= 3:
            assert cell.dim_hi == 0


def test_run_n5():
    rep = sseq.run(5, load(5), 5)
    assert rep.poincare == (1, 1, 2, 4, 4, 4, 4, 4, 2, 1, 1)
    assert [t.dim_hi for t in rep.totals] == [1, 1, 2, 4, 4, 4]
    assert all(t.dim_exact for t in rep.totals)


def test_bottom_row_never_a_source():
    seeds = load(3)
    run = sseq.Run(3, seeds, 3)
    states = run.execute()
    for (r, (pp, q)), rk in states[0].ranks.items():
        if q == 0:
            assert rk == 0


def test_rank_nullity_per_page_and_degree():
    # Passing from one page to the next, each total degree loses exactly
    # the ranks in and out of its cells (Euler-characteristic audit).
    seeds = load(3)
    run = sseq.Run(3, seeds, 3)
    states = run.execute()
    ranks = states[0].ranks
    safe_t = run.cutoff
    for idx in range(len(run.pages) - 1):
        page, nxt = run.pages[idx], run.pages[idx + 1]
        r = page.r
        for t in range(safe_t + 1):
            dim_now = sum(page.dim(pp, t - pp) for pp in range(t + 1))
            dim_next = sum(nxt.dim(pp, t - pp) for pp in range(t + 1))
            rank_out = sum(
                rk for (rr, (pp, q)), rk in ranks.items() if rr == r and pp + q == t
            )
            rank_in = sum(
                rk for (rr, (pp, q)), rk in ranks.items() if rr == r and pp + q == t - 1
            )
            assert dim_next == dim_now - rank_out - rank_in


def test_seed_bidegree_validation():
    fiber = sseq.fiber_algebra(3)
    bad = sseq.seed_from_json(
        {"page": 2, "source": "b1", "value": "a[3]"}, fiber
    )
    with pytest.raises(MalformedInputError):
        sseq.Run(3, [bad], 3)


def test_assertion_on_dead_class_is_a_contradiction():
    seeds = load(3)
    fiber = sseq.fiber_algebra(3)
    # b1 dies on page 2; asserting a nonzero page-3 differential on it is
    # inconsistent.
    seeds = seeds + [
        sseq.seed_from_json({"page": 3, "source": "b1", "value": "nonzero"}, fiber)
    ]
    with pytest.raises(SeedContradictionError):
        sseq.run(3, seeds, 3)


def test_poincare_complete():
    assert sseq.poincare_complete([1, 1, 2, 4], 6) == (1, 1, 2, 4, 2, 1, 1)
    assert sseq.poincare_complete([1, 1, 2, 4, 4, 4], 10) == (
        1, 1, 2, 4, 4, 4, 4, 4, 2, 1, 1,
    )
    assert sseq.poincare_complete([1], 0) == (1,)
    with pytest.raises(MalformedInputError):
        sseq.poincare_complete([1, 2], 1)  # palindrome conflict
    with pytest.raises(MalformedInputError):
        sseq.poincare_complete([1, 1], 10)  # prefix too short


def test_polynomial_text():
    assert sseq.polynomial_text((1, 1, 1, 1)) == "1 + t + t^2 + t^3"
    assert sseq.polynomial_text((1, 0, 2)) == "1 + 2*t^2"
    assert sseq.polynomial_text(()) == "0"


def test_seed_file_mismatch():
    with pytest.raises(MalformedInputError):
        sseq.load_seed_file(builtin_seeds(3), 4)


def test_cutoff_validation():
    with pytest.raises(MalformedInputError):
        sseq.Run(3, [], 7)
