"""Exact linear algebra over GF(2) with labeled bases.

Vectors are int bitmasks (bit i = coordinate i), matrices are tuples of row
bitmasks.  Everything is plain Gaussian elimination; the matrices in this
package stay small (well under 200x200), so no blocked algorithms.

Echelon conventions are fixed so that kernel and cokernel representatives
are deterministic: reduced vectors are kept with strictly increasing pivot
(lowest set bit) and fully reduced against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class MalformedInputError(ValueError):
    """Raised when labeled data violates a structural invariant."""


def low_bit(v: int) -> int:
    """Index of the lowest set bit of a nonzero int."""
    return (v & -v).bit_length() - 1


def rref(vectors: Iterable[int]) -> list[int]:
    """Reduced echelon basis of the span, sorted by pivot index."""
    basis: list[int] = []
    for v in vectors:
        v = reduce_mod(v, basis)
        if v:
            # Back-substitute into the existing basis, then insert.
            p = low_bit(v)
            basis = [b ^ v if (b >> p) & 1 else b for b in basis]
            basis.append(v)
            basis.sort(key=low_bit)
    return basis


def reduce_mod(v: int, basis: Sequence[int]) -> int:
    """Reduce v against an echelon basis; result has no pivot coordinates."""
    for b in basis:
        if (v >> low_bit(b)) & 1:
            v ^= b
    return v


def span_contains(basis: Sequence[int], v: int) -> bool:
    return reduce_mod(v, basis) == 0

def span_sum(a: Sequence[int], b: Sequence[int]) -> list[int]:
    return rref(list(a) + list(b))


def kernel_vectors(columns: Sequence[int], n_cols: int) -> list[int]:
    """Kernel of the map x -> sum of columns[i] over set bits of x.

    columns[i] is the image of the i-th standard basis vector, as a bitmask
    over the codomain.  Returns an echelon basis over the domain.
    """
    # Eliminate on (image | tag) pairs; kernel elements are tags whose image
    # cancels to zero.
    work: list[tuple[int, int]] = []  # (image, combination)
    kernel: list[int] = []
    for i, col in enumerate(columns):
        img, comb = col, 1 << i
        for wimg, wcomb in work:
            if img and (img >> low_bit(wimg)) & 1:
                img ^= wimg
                comb ^= wcomb
        if img:
            work.append((img, comb))
            work.sort(key=lambda t: low_bit(t[0]))
        else:
            kernel.append(comb)
    return rref(kernel)


@dataclass(frozen=True)
class Subspace:
    """A subspace of a labeled ambient space, stored as an echelon basis."""

    ambient: tuple[str, ...]
    vectors: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.ambient)) != len(self.ambient):
            raise MalformedInputError("duplicate ambient labels")
        pivots = [low_bit(v) for v in self.vectors if v]
        if len(pivots) != len(self.vectors) or sorted(set(pivots)) != pivots:
            raise MalformedInputError("vectors are not in echelon form")

    @classmethod
    def from_vectors(cls, ambient: Sequence[str], vectors: Iterable[int]) -> "Subspace":
        return cls(tuple(ambient), tuple(rref(vectors)))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def contains(self, v: int) -> bool:
        return span_contains(self.vectors, v)

    def basis_labels(self) -> list[list[str]]:
        """Support labels of each basis vector, for reporting."""
        out = []
        for v in self.vectors:
            out.append([self.ambient[i] for i in range(len(self.ambient)) if (v >> i) & 1])
        return out


@dataclass(frozen=True)
class F2Matrix:
    """A matrix over GF(2) with labeled rows and columns.

    rows[i] is the bitmask of row i over the columns; the matrix represents
    the linear map F2^cols -> F2^rows.
    """

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.row_labels)) != len(self.row_labels):
            raise MalformedInputError("duplicate row labels")
        if len(set(self.col_labels)) != len(self.col_labels):
            raise MalformedInputError("duplicate column labels")
        if len(self.rows) != len(self.row_labels):
            raise MalformedInputError("row count does not match labels")
        mask = (1 << len(self.col_labels)) - 1
        for r in self.rows:
            if r & ~mask:
                raise MalformedInputError("row has bits outside the column range")

    @classmethod
    def from_entries(
        cls,
        row_labels: Sequence[str],
        col_labels: Sequence[str],
        entries: Sequence[Sequence[int]],
    ) -> "F2Matrix":
        rows = []
        for entry_row in entries:
            if len(entry_row) != len(col_labels):
                raise MalformedInputError("ragged entry row")
            if any(e not in (0, 1) for e in entry_row):
                raise MalformedInputError("entries must be 0 or 1")
            rows.append(sum(1 << j for j, e in enumerate(entry_row) if e))
        return cls(tuple(row_labels), tuple(col_labels), tuple(rows))

    @property
    def n_rows(self) -> int:
        return len(self.row_labels)

    @property
    def n_cols(self) -> int:
        return len(self.col_labels)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        """Column j as a bitmask over rows."""
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.rows))

    def columns(self) -> list[int]:
        return [self.column(j) for j in range(self.n_cols)]

    def transpose(self) -> "F2Matrix":
        return F2Matrix(self.col_labels, self.row_labels, tuple(self.columns()))

    def apply(self, v: int) -> int:
        """Image of a column-space vector, as a bitmask over rows."""
        out = 0
        for i, r in enumerate(self.rows):
            out |= (bin(r & v).count("1") & 1) << i
        return out


def rank(m: F2Matrix) -> int:
    return len(rref(m.rows))


def kernel_basis(m: F2Matrix) -> Subspace:
    """Echelon basis of {v : m v = 0}, in column coordinates."""
    vecs = kernel_vectors(m.columns(), m.n_cols)
    return Subspace(m.col_labels, tuple(vecs))


def image_basis(m: F2Matrix) -> Subspace:
    """Echelon basis of the column space, in row coordinates."""
    return Subspace(m.row_labels, tuple(rref(m.columns())))


def cokernel_basis(m: F2Matrix) -> Subspace:
    """Unit-vector representatives of a complement of the column space.

    The representatives are the standard basis vectors at row indices that
    are not pivots of the echelonized column space; this makes the choice
    deterministic.
    """
    img = rref(m.columns())
    pivot_rows = {low_bit(v) for v in img}
    reps = [1 << i for i in range(m.n_rows) if i not in pivot_rows]
    return Subspace(m.row_labels, tuple(reps))


def coordinates(basis: Sequence[int], v: int) -> int | None:
    """Coefficients of v over an echelon basis, or None if v is outside."""
    coeff = 0
    for idx, b in enumerate(basis):
        if (v >> low_bit(b)) & 1:
            v ^= b
            coeff |= 1 << idx
    return None if v else coeff
