import random

import pytest

from uflag import gysin, hopf
from uflag.f2linalg import (
    F2Matrix,
    MalformedInputError,
    Subspace,
    cokernel_basis,
    kernel_basis,
    rank,
    rref,
    span_contains,
)


def identity(n):
    labels = tuple(f"e{i}" for i in range(n))
    return F2Matrix(labels, labels, tuple(1 << i for i in range(n)))


def zero_matrix(rows, cols):
    return F2Matrix(
        tuple(f"r{i}" for i in range(rows)),
        tuple(f"c{j}" for j in range(cols)),
        tuple(0 for _ in range(rows)),
    )


def random_matrix(rng, rows, cols):
    return F2Matrix(
        tuple(f"r{i}" for i in range(rows)),
        tuple(f"c{j}" for j in range(cols)),
        tuple(rng.getrandbits(cols) for _ in range(rows)),
    )


def test_rank_identity_and_zero():
    assert rank(identity(3)) == 3
    assert rank(zero_matrix(4, 2)) == 0


def test_rank_of_euler_multiplication_on_degree_one():
    # Multiplication by the Euler class from degree 1 to degree 2 in the
    # order-3 group: two columns over the four degree-2 monomials.
    m = gysin.cup_matrix(gysin.euler_class(3).value, 3, 1)
    assert m.n_cols == 2
    assert m.n_rows == 4
    assert rank(m) == 2


def test_kernel_trivial_and_full():
    assert kernel_basis(identity(4)).dim == 0
    k = kernel_basis(zero_matrix(3, 5))
    assert k.dim == 5


def test_kernel_of_euler_in_degree_three_order_four():
    m = gysin.cup_matrix(gysin.euler_class(4).value, 4, 3)
    k = kernel_basis(m)
    assert k.dim == 1
    assert k.basis_labels() == [["g[2,1]"]]


def test_cokernel_identity_zero_and_euler():
    assert cokernel_basis(identity(5)).dim == 0
    assert cokernel_basis(zero_matrix(3, 2)).dim == 3
    m = gysin.cup_matrix(gysin.euler_class(3).value, 3, 2)
    c = cokernel_basis(m)
    assert c.dim == 3
    assert all(len(labels) == 1 for labels in c.basis_labels())


def test_rank_nullity_and_transpose_on_random_matrices():
    rng = random.Random(0)
    for _ in range(40):
        rows, cols = rng.randint(1, 64), rng.randint(1, 64)
        m = random_matrix(rng, rows, cols)
        r = rank(m)
        assert r + kernel_basis(m).dim == cols
        assert r + cokernel_basis(m).dim == rows
        assert r == rank(m.transpose())


def test_apply_matches_column_combination():
    rng = random.Random(1)
    m = random_matrix(rng, 10, 7)
    for j in range(7):
        assert m.apply(1 << j) == m.column(j)


def test_subspace_invariants():
    with pytest.raises(MalformedInputError):
        Subspace(("a", "a"), ())
    with pytest.raises(MalformedInputError):
        Subspace(("a", "b"), (0b10, 0b11))  # pivots out of order
    s = Subspace.from_vectors(("a", "b", "c"), [0b110, 0b011, 0b101])
    assert s.dim == 2
    assert span_contains(s.vectors, 0b101)


def test_duplicate_labels_rejected():
    with pytest.raises(MalformedInputError):
        F2Matrix(("r", "r"), ("c",), (0, 0))
    with pytest.raises(MalformedInputError):
        F2Matrix.from_entries(["r"], ["c"], [[2]])


def test_rref_is_canonical():
    rng = random.Random(2)
    for _ in range(30):
        vecs = [rng.getrandbits(12) for _ in range(6)]
        rng.shuffle(vecs)
        a = rref(vecs)
        rng.shuffle(vecs)
        assert rref(vecs) == a
