"""
Exact integer and rational matrix algebra.

Everything here is exact: integers are Python ints, rationals are
``fractions.Fraction``. Determinants and ranks are delegated to sympy; the
Smith normal form is computed by hand because the pivot rule has to be
fixed for reproducible output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

import sympy

from ribbon.cache import cached_smith
from ribbon.exceptions import (
    LinalgError,
    NoSolutionError,
    NonSquareError,
    ShapeMismatchError,
)
from ribbon.logging_config import get_logger

logger = get_logger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatchError(f"Negative shape {self.rows}x{self.cols}")
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise ShapeMismatchError(
                f"Entry table does not match declared shape {self.rows}x{self.cols}"
            )
        object.__setattr__(self, "entries", entries)

    # Construction

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None
    ) -> "IntMatrix":
        """Build a matrix from a list of rows; ``cols`` is needed only when empty."""
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(tuple(r) for r in rows))

    @classmethod
    def from_columns(
        cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None
    ) -> "IntMatrix":
        """Build a matrix whose columns are the given vectors."""
        columns = [list(c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls.from_rows(
            [[c[i] for c in columns] for i in range(rows)], cols=len(columns)
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(
            n,
            n,
            tuple(tuple(values[i] if i == j else 0 for j in range(n)) for i in range(n)),
        )

    @classmethod
    def from_sympy(cls, m: sympy.Matrix) -> "IntMatrix":
        return cls.from_rows(
            [[int(m[i, j]) for j in range(m.cols)] for i in range(m.rows)], cols=m.cols
        )

    # Access

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def to_list(self) -> List[List[int]]:
        return [list(r) for r in self.entries]

    def to_sympy(self) -> sympy.Matrix:
        if self.rows == 0 or self.cols == 0:
            return sympy.zeros(self.rows, self.cols)
        return sympy.Matrix(self.to_list())

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i)
        )

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self.entries[i][j] for j in col_idx] for i in row_idx], cols=len(col_idx)
        )

    # Arithmetic

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [self.column(j) for j in range(self.cols)], cols=self.rows
        )

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ShapeMismatchError(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        other_cols = other.columns()
        return IntMatrix.from_rows(
            [[_dot(r, c) for c in other_cols] for r in self.entries], cols=other.cols
        )

    def apply(self, vector: Sequence[int]) -> Vector:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise ShapeMismatchError(
                f"Vector of length {len(vector)} does not fit {self.cols} columns"
            )
        return tuple(_dot(r, vector) for r in self.entries)

    def _check_same_shape(self, other: "IntMatrix") -> None:
        if self.shape != other.shape:
            raise ShapeMismatchError(f"Shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix.from_rows(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            cols=self.cols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix.from_rows(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            cols=self.cols,
        )

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[k * a for a in r] for r in self.entries], cols=self.cols
        )

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.entries) + "]"


class SmithDecomposition(NamedTuple):
    """U·A·V = S with U, V unimodular and S diagonal in divisibility order."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))


class Cokernel(NamedTuple):
    """Invariant factors of Z^m / im(A) and the map onto factor coordinates."""

    invariant_factors: Tuple[int, ...]
    projection: IntMatrix


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def hstack(*blocks: IntMatrix) -> IntMatrix:
    """Concatenate matrices side by side."""
    if not blocks:
        return IntMatrix.zeros(0, 0)
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ShapeMismatchError("hstack blocks must have equal row counts")
    return IntMatrix.from_rows(
        [sum((list(b.row(i)) for b in blocks), []) for i in range(rows)],
        cols=sum(b.cols for b in blocks),
    )


def vstack(*blocks: IntMatrix) -> IntMatrix:
    """Stack matrices vertically."""
    if not blocks:
        return IntMatrix.zeros(0, 0)
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ShapeMismatchError("vstack blocks must have equal column counts")
    return IntMatrix.from_rows([r for b in blocks for r in b.entries], cols=cols)


def block_diagonal(*blocks: IntMatrix) -> IntMatrix:
    """Direct sum of matrices."""
    total_cols = sum(b.cols for b in blocks)
    rows: List[List[int]] = []
    offset = 0
    for b in blocks:
        for r in b.entries:
            rows.append([0] * offset + list(r) + [0] * (total_cols - offset - b.cols))
        offset += b.cols
    return IntMatrix.from_rows(rows, cols=total_cols)


def determinant(a: IntMatrix) -> int:
    """Exact determinant (fraction-free Bareiss elimination)."""
    if not a.is_square:
        raise NonSquareError(f"Determinant needs a square matrix, got {a.shape}")
    if a.rows == 0:
        return 1
    return int(a.to_sympy().det(method="bareiss"))


def rank(a: IntMatrix) -> int:
    """Rank over the rationals."""
    if a.rows == 0 or a.cols == 0:
        return 0
    return int(a.to_sympy().rank())


def inverse_rational(a: IntMatrix) -> Tuple[Tuple[Fraction, ...], ...]:
    """Exact inverse over Q as a table of Fractions."""
    if determinant(a) == 0:
        raise LinalgError("Matrix is singular over Q")
    if a.rows == 0:
        return ()
    inv = a.to_sympy().inv()
    return tuple(
        tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(a.cols))
        for i in range(a.rows)
    )


def is_unimodular(a: IntMatrix) -> bool:
    return a.is_square and abs(determinant(a)) == 1


@cached_smith
def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    """
    Smith normal form by unimodular row and column operations.

    Pivot: smallest nonzero absolute value in the active block, ties broken
    by lowest (row, col). Returns U, S, V with U·A·V = S.
    """
    m, n = a.rows, a.cols
    s = a.to_list()
    u = IntMatrix.identity(m).to_list()
    v = IntMatrix.identity(n).to_list()

    def swap_rows(i: int, j: int) -> None:
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, k: int) -> None:
        if k:
            s[target] = [x + k * y for x, y in zip(s[target], s[source])]
            u[target] = [x + k * y for x, y in zip(u[target], u[source])]

    def add_col(target: int, source: int, k: int) -> None:
        if k:
            for row in s:
                row[target] += k * row[source]
            for row in v:
                row[target] += k * row[source]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    x = s[i][j]
                    if x and (pivot is None or abs(x) < abs(s[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = s[t][t]

            for i in range(t + 1, m):
                add_row(i, t, -(s[i][t] // p))
            for j in range(t + 1, n):
                add_col(j, t, -(s[t][j] // p))

            if any(s[i][t] for i in range(t + 1, m)) or any(
                s[t][j] for j in range(t + 1, n)
            ):
                continue

            bad_row = next(
                (
                    i
                    for i in range(t + 1, m)
                    if any(s[i][j] % p for j in range(t + 1, n))
                ),
                None,
            )
            if bad_row is not None:
                add_row(t, bad_row, 1)
                continue

            if p < 0:
                s[t] = [-x for x in s[t]]
                u[t] = [-x for x in u[t]]
            break

    result = SmithDecomposition(
        IntMatrix.from_rows(u, cols=m),
        IntMatrix.from_rows(s, cols=n),
        IntMatrix.from_rows(v, cols=n),
    )
    logger.debug(f"Smith form of {m}x{n} matrix: diagonal {result.diagonal}")
    return result


def cokernel(a: IntMatrix) -> Cokernel:
    """
    Cokernel of a relation matrix whose columns are relations in Z^rows.

    Unit factors are dropped; zeros stand for free summands and come last.
    """
    snf = smith_normal_form(a)
    diag = list(snf.diagonal) + [0] * (a.rows - min(a.rows, a.cols))
    keep = [i for i, d in enumerate(diag) if d != 1]
    factors = tuple(diag[i] for i in keep)
    projection = IntMatrix.from_rows([snf.U.row(i) for i in keep], cols=a.rows)
    return Cokernel(factors, projection)


def solve_integer(a: IntMatrix, b: Sequence[int]) -> Vector:
    """Return an integer x with A·x = b, or raise NoSolutionError."""
    if len(b) != a.rows:
        raise ShapeMismatchError(
            f"Right-hand side of length {len(b)} does not fit {a.rows} rows"
        )
    snf = smith_normal_form(a)
    c = snf.U.apply(b)
    diag = snf.diagonal
    y = [0] * a.cols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci != 0:
                raise NoSolutionError("Right-hand side is not in the rational image")
        elif ci % d:
            raise NoSolutionError(
                f"Right-hand side is not in the integer image (divisor {d})"
            )
        else:
            y[i] = ci // d
    return snf.V.apply(y)


def integer_kernel(a: IntMatrix) -> IntMatrix:
    """Z-basis of {x : A·x = 0}, as the columns of the returned matrix."""
    snf = smith_normal_form(a)
    diag = snf.diagonal
    basis = [
        snf.V.column(j)
        for j in range(a.cols)
        if j >= len(diag) or diag[j] == 0
    ]
    return IntMatrix.from_columns(basis, rows=a.cols)


def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> IntMatrix:
    """Random product of elementary integer matrices."""
    rows = IntMatrix.identity(n).to_list()
    if n < 2:
        if n == 1 and rng.random() < 0.5:
            rows[0][0] = -1
        return IntMatrix.from_rows(rows, cols=n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-2, -1, 1, 2])
        rows[i] = [x + k * y for x, y in zip(rows[i], rows[j])]
    if rng.random() < 0.5:
        i, j = rng.sample(range(n), 2)
        rows[i], rows[j] = rows[j], rows[i]
    return IntMatrix.from_rows(rows, cols=n)

