"""
Tests for Laurent polynomials and the torsion of the Alexander module.
"""

from fractions import Fraction

import pytest
import sympy

from ribbon.exceptions import (
    ExactPathUnavailableError,
    GroupError,
    NotIsomorphicError,
    NotStabilizedError,
    PreconditionFailedError,
    ShapeMismatchError,
    TooLargeError,
)
from ribbon.groups import AbelianGroup, GroupHom
from ribbon.laurent import (
    ONE,
    T,
    FiniteLaurentModule,
    LaurentPoly,
    alexander_torsion,
    build_P,
    det_laurent,
    module_isomorphic,
    tau_invariants,
    window_torsion,
)
from ribbon.linalg import IntMatrix


def module(torsion, tau_rows):
    group = AbelianGroup(0, tuple(torsion))
    return FiniteLaurentModule(
        group, GroupHom(group, group, IntMatrix.from_rows(tau_rows, cols=group.ngens))
    )


class TestLaurentPoly:
    """Test Laurent polynomial arithmetic."""

    def test_arithmetic(self):
        assert (ONE - T) * (ONE + T) == ONE - T * T
        assert str(ONE - T) == "1 - t"
        assert str(LaurentPoly()) == "0"
        assert (T - T).is_zero()

    def test_negative_exponents(self):
        inverse = LaurentPoly.monomial(1, -1)
        assert inverse * T == ONE
        assert ONE.shift(-1) == inverse
        assert T.shift(-1) == ONE
        assert str(inverse) == "t^-1"
        assert inverse.evaluate(2) == Fraction(1, 2)
        assert (2 * T - 4).content() == 2

    def test_sympy_round_trip(self):
        p = LaurentPoly({-1: 3, 2: -1})
        assert LaurentPoly.from_sympy(p.to_sympy()) == p


class TestDeterminant:
    """Test det P(t) for the block matrix [[E, tA], [E, B]]."""

    def test_one_by_one(self):
        p = build_P(IntMatrix.from_rows([[2]]), IntMatrix.from_rows([[1]]))
        assert det_laurent(p) == ONE - 2 * T

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            build_P(IntMatrix.identity(2), IntMatrix.identity(1))

    def test_empty(self):
        assert det_laurent(build_P(IntMatrix.zeros(0, 0), IntMatrix.zeros(0, 0))) == ONE

    def test_matches_det_b_minus_ta(self, rng):
        """det P(t) = ±det(B - tA) on random pairs."""
        t = sympy.Symbol("t")
        for _ in range(60):
            n = rng.randint(1, 3)
            a = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
            b = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
            expected = LaurentPoly.from_sympy((b.to_sympy() - t * a.to_sympy()).det())
            assert det_laurent(build_P(a, b)) in (expected, -expected)


class TestModules:
    """Test module isomorphism and τ invariants."""

    def test_tau_invariants(self):
        inv = tau_invariants(module([3], [[2]]))
        assert inv.order == 2
        assert inv.group == AbelianGroup.cyclic(3)

    def test_identity_witness_first(self):
        m = module([2, 4], [[1, 0], [0, 3]])
        assert module_isomorphic(m, m) == GroupHom.identity(m.group)

    def test_non_isomorphic(self):
        with pytest.raises(NotIsomorphicError):
            module_isomorphic(module([3], [[1]]), module([3], [[2]]))
        with pytest.raises(NotIsomorphicError):
            module_isomorphic(module([5], [[2]]), module([5], [[3]]))

    def test_conjugate_transvections(self):
        m1 = module([2, 2], [[0, 1], [1, 0]])
        m2 = module([2, 2], [[1, 1], [0, 1]])
        f = module_isomorphic(m1, m2)
        assert f.compose(m1.tau) == m2.tau.compose(f)

    def test_too_large(self):
        m = module([1024], [[1]])
        with pytest.raises(TooLargeError):
            module_isomorphic(m, m, bound=512)

    def test_tau_must_be_automorphism(self):
        with pytest.raises(GroupError):
            module([4], [[2]])


class TestAlexanderTorsion:
    """Test the exact and window computations of the torsion module."""

    def test_trivial(self, trivial_bundle):
        m = alexander_torsion(trivial_bundle)
        assert m.group.is_trivial

    def test_z3_exact(self, z3_bundle):
        m = alexander_torsion(z3_bundle, method="exact")
        assert m.group == AbelianGroup.cyclic(3)
        assert m.tau.matrix.to_list() == [[2]]

    def test_z3_window_agrees(self, z3_bundle):
        exact = alexander_torsion(z3_bundle, method="exact")
        window = alexander_torsion(z3_bundle, method="window")
        assert module_isomorphic(exact, window)

    def test_window_torsion_single_window(self, z3_bundle):
        m = window_torsion(z3_bundle, 3)
        assert m is not None
        assert m.tau.matrix.to_list() == [[2]]

    def test_free_generator_kills_torsion(self, make_bundle):
        """With Y torsion, the image of a free V generator is divided out."""
        bundle = make_bundle(
            AbelianGroup(1, (3,)),
            AbelianGroup.cyclic(3),
            pos=[[1, 1]],
            neg=[[2, 0]],
            linking=[[3]],
        )
        assert alexander_torsion(bundle, method="exact").group.is_trivial
        assert alexander_torsion(bundle, method="window").group.is_trivial

    def test_free_parts_contribute_nothing(self, make_bundle):
        bundle = make_bundle(
            AbelianGroup(1, (5,)),
            AbelianGroup(1, (5,)),
            pos=[[1, 4], [0, 2]],
            neg=[[2, 0], [0, 1]],
            linking=[[5]],
        )
        exact = alexander_torsion(bundle, method="exact")
        assert exact.group == AbelianGroup.cyclic(5)
        assert exact.tau.matrix.to_list() == [[2]]
        assert module_isomorphic(exact, alexander_torsion(bundle, method="window"))

    def test_content_blocks_exact_path(self, make_bundle):
        """det(tA - B) = 2t has content 2: Z/2[t, t^-1] never stabilizes."""
        bundle = make_bundle(
            AbelianGroup.free(1), AbelianGroup.free(1), pos=[[2]], neg=[[0]], linking=[]
        )
        with pytest.raises(ExactPathUnavailableError):
            alexander_torsion(bundle, method="exact")
        with pytest.raises(NotStabilizedError):
            alexander_torsion(bundle, window_min=2, window_max=5)

    def test_precondition(self, make_bundle):
        bundle = make_bundle(
            AbelianGroup.free(1), AbelianGroup.free(1), pos=[[1]], neg=[[1]], linking=[]
        )
        with pytest.raises(PreconditionFailedError, match="det"):
            alexander_torsion(bundle)

    def test_unknown_method(self, z3_bundle):
        with pytest.raises(ValueError):
            alexander_torsion(z3_bundle, method="guess")
