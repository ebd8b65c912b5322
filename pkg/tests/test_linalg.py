"""
Tests for exact integer linear algebra.
"""

from fractions import Fraction

import pytest

from ribbon.exceptions import NonSquareError, NoSolutionError, ShapeMismatchError
from ribbon.linalg import (
    IntMatrix,
    block_diagonal,
    cokernel,
    determinant,
    hstack,
    integer_kernel,
    inverse_rational,
    is_unimodular,
    random_unimodular,
    rank,
    smith_normal_form,
    solve_integer,
    vstack,
)


def random_matrix(rng, rows, cols, k=5):
    return IntMatrix.from_rows(
        [[rng.randint(-k, k) for _ in range(cols)] for _ in range(rows)], cols=cols
    )


def check_smith(a: IntMatrix):
    snf = smith_normal_form(a)
    assert snf.U @ a @ snf.V == snf.S
    assert is_unimodular(snf.U)
    assert is_unimodular(snf.V)
    for i in range(a.rows):
        for j in range(a.cols):
            if i != j:
                assert snf.S[i, j] == 0
    diag = snf.diagonal
    assert all(d >= 0 for d in diag)
    for x, y in zip(diag, diag[1:]):
        assert (y == 0) if x == 0 else (y % x == 0)
    return diag


class TestIntMatrix:
    """Test matrix construction and arithmetic."""

    def test_shapes(self):
        """Empty shapes are legal and keep their column count."""
        assert IntMatrix.zeros(0, 0).shape == (0, 0)
        assert IntMatrix.from_rows([], cols=3).shape == (0, 3)
        assert IntMatrix.from_rows([[], []], cols=0).shape == (2, 0)

    def test_arithmetic(self):
        a = IntMatrix.from_rows([[1, 2], [3, 4]])
        b = IntMatrix.identity(2)
        assert a @ b == a
        assert (a + b).to_list() == [[2, 2], [3, 5]]
        assert (a - a).is_zero()
        assert a.transpose().to_list() == [[1, 3], [2, 4]]
        assert a.apply([1, -1]) == (-1, -1)
        assert str(a) == "[[1, 2], [3, 4]]"

    def test_symmetry(self):
        assert IntMatrix.from_rows([[2, 1], [1, 3]]).is_symmetric()
        assert not IntMatrix.from_rows([[2, 1], [0, 3]]).is_symmetric()

    def test_block_helpers(self):
        a = IntMatrix.from_rows([[1]])
        b = IntMatrix.from_rows([[2, 3]])
        assert hstack(a, b).to_list() == [[1, 2, 3]]
        assert vstack(b, b).shape == (2, 2)
        assert block_diagonal(a, b).to_list() == [[1, 0, 0], [0, 2, 3]]
        with pytest.raises(ShapeMismatchError):
            vstack(a, b)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            IntMatrix.identity(2) @ IntMatrix.identity(3)


class TestDeterminantAndRank:
    """Test determinant, rank and rational inverse."""

    def test_determinant(self):
        assert determinant(IntMatrix.from_rows([[1, 2], [3, 4]])) == -2
        assert determinant(IntMatrix.zeros(0, 0)) == 1

    def test_determinant_non_square(self):
        with pytest.raises(NonSquareError):
            determinant(IntMatrix.zeros(2, 3))

    def test_rank(self):
        assert rank(IntMatrix.from_rows([[1, 2], [2, 4]])) == 1
        assert rank(IntMatrix.zeros(0, 2)) == 0

    def test_inverse_rational(self):
        inv = inverse_rational(IntMatrix.from_rows([[2, 0], [0, 3]]))
        assert inv == ((Fraction(1, 2), 0), (0, Fraction(1, 3)))


class TestSmithNormalForm:
    """Test Smith normal form and the operations built on it."""

    def test_known_example(self):
        a = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        assert check_smith(a) == (2, 6, 12)

    def test_zero_and_empty(self):
        assert check_smith(IntMatrix.zeros(2, 3)) == (0, 0)
        snf = smith_normal_form(IntMatrix.zeros(0, 0))
        assert snf.diagonal == ()

    def test_random_instances(self, rng):
        """Random matrices satisfy UAV = S, unimodularity and divisibility."""
        for _ in range(200):
            a = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
            check_smith(a)

    def test_congruence_invariance(self, rng):
        for _ in range(50):
            n = rng.randint(1, 3)
            a = random_matrix(rng, n, n)
            p, q = random_unimodular(rng, n), random_unimodular(rng, n)
            assert smith_normal_form(p @ a @ q).diagonal == smith_normal_form(a).diagonal


class TestCokernel:
    """Test cokernel invariant factors."""

    def test_cyclic(self):
        assert cokernel(IntMatrix.from_rows([[2, 0], [0, 3]])).invariant_factors == (6,)

    def test_free_summands_last(self):
        assert cokernel(IntMatrix.from_rows([[2], [0]])).invariant_factors == (2, 0)
        assert cokernel(IntMatrix.from_rows([[0]])).invariant_factors == (0,)

    def test_empty(self):
        assert cokernel(IntMatrix.zeros(0, 0)).invariant_factors == ()


class TestSolveInteger:
    """Test integer solving and kernels."""

    def test_solution(self):
        a = IntMatrix.from_rows([[2, 0], [0, 3]])
        assert solve_integer(a, [4, 9]) == (2, 3)

    def test_no_integer_solution(self):
        a = IntMatrix.from_rows([[2, 0], [0, 3]])
        with pytest.raises(NoSolutionError):
            solve_integer(a, [1, 0])

    def test_no_rational_solution(self):
        with pytest.raises(NoSolutionError):
            solve_integer(IntMatrix.from_rows([[1], [1]]), [1, 0])

    def test_wrong_length(self):
        with pytest.raises(ShapeMismatchError):
            solve_integer(IntMatrix.identity(2), [1])

    def test_random_consistency(self, rng):
        for _ in range(100):
            a = random_matrix(rng, rng.randint(1, 3), rng.randint(1, 3), k=3)
            x = [rng.randint(-3, 3) for _ in range(a.cols)]
            b = a.apply(x)
            assert a.apply(solve_integer(a, b)) == b

    def test_integer_kernel(self):
        k = integer_kernel(IntMatrix.from_rows([[1, 1]]))
        assert k.shape == (2, 1)
        assert sorted(abs(x) for x in k.column(0)) == [1, 1]
        assert IntMatrix.from_rows([[1, 1]]) @ k == IntMatrix.zeros(1, 1)
