"""Dense exact-rational matrices, index sets, minors, and compounds.

Everything here is immutable and pure.  Determinants use fraction-free
Bareiss elimination; bulk minor scans use an order-by-order Laplace
recurrence over lexicographically ordered index subsets, which is the
documented external ordering for compound matrices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import (
    FeasibilityExceeded,
    IndexOutOfRange,
    OrderOutOfRange,
    ShapeMismatch,
)
from .rational import coerce_rational, format_rational

#: Default cap for operations that enumerate all minors of a matrix.
SCAN_CAP_DEFAULT = 8

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class IndexSet:
    """A strictly increasing tuple of 1-based indices."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = self.indices
        if not idx:
            raise ShapeMismatch("index set must be nonempty")
        for a, b in zip(idx, idx[1:]):
            if b <= a:
                raise ShapeMismatch(f"indices must be strictly increasing: {idx}")
        if idx[0] < 1:
            raise IndexOutOfRange(f"indices are 1-based: {idx}")

    @classmethod
    def coerce(cls, value) -> "IndexSet":
        if isinstance(value, IndexSet):
            return value
        if isinstance(value, int):
            return cls((value,))
        return cls(tuple(int(i) for i in value))

    def check_range(self, limit: int, what: str = "index") -> None:
        if self.indices[-1] > limit:
            raise IndexOutOfRange(f"{what} {self.indices[-1]} exceeds {limit}")

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


class Matrix:
    """Immutable dense matrix of exact rationals.

    Entries are addressed 0-based via ``A[i, j]``; the index sets used
    by :func:`minor` are 1-based.
    """

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(coerce_rational(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ShapeMismatch("matrix must have at least one row and column")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ShapeMismatch("rows have inconsistent lengths")
        object.__setattr__(self, "_rows", data)

    # -- construction -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Iterable) -> "Matrix":
        d = [coerce_rational(x) for x in entries]
        n = len(d)
        return cls([[d[i] if i == j else _ZERO for j in range(n)] for i in range(n)])

    # -- shape and access -------------------------------------------------

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return len(self._rows[0])

    @property
    def entries(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- algebra ----------------------------------------------------------

    def transpose(self) -> "Matrix":
        return Matrix(tuple(zip(*self._rows)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __pow__(self, k: int) -> "Matrix":
        return mat_pow(self, k)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        body = "; ".join(
            " ".join(format_rational(x) for x in row) for row in self._rows
        )
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def to_lists(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self._rows]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Exact matrix product."""
    if a.cols != b.rows:
        raise ShapeMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bt = tuple(zip(*b.entries))
    return Matrix(
        [
            [sum(x * y for x, y in zip(row, col)) for col in bt]
            for row in a.entries
        ]
    )


def mat_pow(a: Matrix, k: int) -> Matrix:
    """Exact k-th power, k >= 1."""
    if not a.is_square():
        raise ShapeMismatch("powers require a square matrix")
    if k < 1:
        raise ValueError(f"power must be >= 1, got {k}")
    result = a
    for _ in range(k - 1):
        result = mat_mul(result, a)
    return result


# -- determinants and minors ----------------------------------------------


def _det_bareiss(rows: list[list[Fraction]]) -> Fraction:
    """Fraction-free Bareiss elimination; exact for rational entries."""
    n = len(rows)
    m = [row[:] for row in rows]
    sign = 1
    prev = _ONE
    for i in range(n - 1):
        if m[i][i] == 0:
            for r in range(i + 1, n):
                if m[r][i] != 0:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return _ZERO
        piv = m[i][i]
        for r in range(i + 1, n):
            mri = m[r][i]
            row_r = m[r]
            row_i = m[i]
            for c in range(i + 1, n):
                row_r[c] = (row_r[c] * piv - mri * row_i[c]) / prev
            row_r[i] = _ZERO
        prev = piv
    return sign * m[n - 1][n - 1]


def det(a: Matrix) -> Fraction:
    """Determinant via fraction-free elimination."""
    if not a.is_square():
        raise ShapeMismatch("determinant requires a square matrix")
    return _det_bareiss([list(row) for row in a.entries])


def minor(a: Matrix, rows, cols) -> Fraction:
    """Exact minor: determinant of the submatrix A[rows | cols] (1-based)."""
    rset = IndexSet.coerce(rows)
    cset = IndexSet.coerce(cols)
    if len(rset) != len(cset):
        raise ShapeMismatch(
            f"minor needs equally many rows and columns, got {len(rset)} and {len(cset)}"
        )
    rset.check_range(a.rows, "row")
    cset.check_range(a.cols, "column")
    sub = [[a[i - 1, j - 1] for j in cset] for i in rset]
    return _det_bareiss(sub)


def lex_subsets(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    """All p-subsets of {1..n} in lexicographic order (the compound order)."""
    return tuple(itertools.combinations(range(1, n + 1), p))


def minor_levels(
    a: Matrix, max_order: int | None = None
) -> Iterator[tuple[int, dict]]:
    """Yield ``(p, table)`` for p = 1..max_order, where ``table`` maps
    ``(row_subset, col_subset)`` to the exact minor.

    Tables are built by Laplace expansion along the last selected row,
    reusing the previous order.  Iteration order within each table is
    lexicographic in (rows, cols).
    """
    n, m = a.rows, a.cols
    limit = min(n, m) if max_order is None else min(max_order, n, m)
    prev: dict = {}
    for p in range(1, limit + 1):
        table: dict = {}
        if p == 1:
            for i in range(1, n + 1):
                for j in range(1, m + 1):
                    table[((i,), (j,))] = a[i - 1, j - 1]
        else:
            ent = a.entries
            for rset in itertools.combinations(range(1, n + 1), p):
                head = rset[:-1]
                last_row = ent[rset[-1] - 1]
                for cset in itertools.combinations(range(1, m + 1), p):
                    acc = _ZERO
                    for t, c in enumerate(cset):
                        coeff = last_row[c - 1]
                        if coeff:
                            sub = prev[(head, cset[:t] + cset[t + 1 :])]
                            if sub:
                                # expansion along row p: sign (-1)^(p + t + 1)
                                if (p + t + 1) % 2 == 0:
                                    acc += coeff * sub
                                else:
                                    acc -= coeff * sub
                    table[(rset, cset)] = acc
        yield p, table
        prev = table


@dataclass(frozen=True)
class CompoundMatrix:
    """All p x p minors of an n x n matrix in lexicographic order."""

    p: int
    base_n: int
    data: Matrix

    @property
    def subsets(self) -> tuple[tuple[int, ...], ...]:
        return lex_subsets(self.base_n, self.p)


def multiplicative_compound(a: Matrix, p: int) -> CompoundMatrix:
    """The p-th multiplicative compound of a square matrix."""
    if not a.is_square():
        raise ShapeMismatch("compound requires a square matrix")
    n = a.rows
    if not 1 <= p <= n:
        raise OrderOutOfRange(f"compound order {p} outside [1, {n}]")
    table = None
    for order, tab in minor_levels(a, p):
        if order == p:
            table = tab
    subs = lex_subsets(n, p)
    data = Matrix([[table[(r, c)] for c in subs] for r in subs])
    return CompoundMatrix(p=p, base_n=n, data=data)


def cauchy_binet_check(a: Matrix, b: Matrix, alpha, beta) -> bool:
    """Check minor(AB, alpha, beta) against the sum over inner index sets.

    Both sides are computed independently, term by term; this always holds
    mathematically and serves as a cross-check of the minor kernel.
    """
    if a.cols != b.rows:
        raise ShapeMismatch("shapes do not compose")
    aset = IndexSet.coerce(alpha)
    bset = IndexSet.coerce(beta)
    k = len(aset)
    if k != len(bset):
        raise ShapeMismatch("alpha and beta must have equal cardinality")
    if k > min(a.rows, a.cols, b.cols):
        raise ShapeMismatch(f"cardinality {k} exceeds min dimension")
    aset.check_range(a.rows, "row")
    bset.check_range(b.cols, "column")
    lhs = minor(mat_mul(a, b), aset, bset)
    rhs = _ZERO
    for gamma in itertools.combinations(range(1, a.cols + 1), k):
        rhs += minor(a, aset, gamma) * minor(b, gamma, bset)
    return lhs == rhs


def check_scan_cap(a: Matrix, cap: int | None) -> None:
    limit = SCAN_CAP_DEFAULT if cap is None else cap
    if max(a.rows, a.cols) > limit:
        raise FeasibilityExceeded(
            f"minor scan over a {a.rows}x{a.cols} matrix exceeds cap {limit}"
        )


# -- text formats -----------------------------------------------------------


def matrix_to_json_dict(a: Matrix) -> dict:
    return {"rows": a.rows, "cols": a.cols, "entries": a.to_lists()}


def matrix_from_json_dict(doc: dict) -> Matrix:
    try:
        entries = doc["entries"]
        m = Matrix(entries)
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed matrix document: {exc}") from exc
    if m.rows != doc.get("rows", m.rows) or m.cols != doc.get("cols", m.cols):
        raise ShapeMismatch("declared shape does not match entries")
    return m


def dumps_matrix(a: Matrix) -> str:
    return json.dumps(matrix_to_json_dict(a), indent=2) + "\n"


def loads_matrix(text: str) -> Matrix:
    return matrix_from_json_dict(json.loads(text))


def matrix_from_csv(text: str) -> Matrix:
    """Read a matrix from comma-separated cells in parse_rational syntax."""
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        rows.append([cell.strip() for cell in line.split(",")])
    return Matrix(rows)


def matrix_to_csv(a: Matrix) -> str:
    return "\n".join(",".join(cells) for cells in a.to_lists()) + "\n"
