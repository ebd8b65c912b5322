"""
Omega-signatures of equivariant Hermitian forms and the eta defect.

The characteristic polynomial of the form at ω^k is computed exactly in
Q[x]/Φ_e(x); its real coefficients get certified signs (exact zero test,
then an mpmath interval enclosure) and Descartes' rule of signs
counts positive and negative eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import mpmath
import sympy

from ribbon.config import config
from ribbon.exceptions import (
    FormError,
    InconsistentBoundingError,
    IncompatibleCharacterError,
    NotFreeError,
    RibbonError,
)
from ribbon.groups import AbelianGroup, GroupHom, QmodZ
from ribbon.linalg import IntMatrix
from ribbon.logging_config import get_logger
from ribbon.seifert import SeifertBundle

logger = get_logger(__name__)

_x = sympy.Symbol("x")
_lam = sympy.Symbol("lam")


@dataclass(frozen=True)
class Character:
    """A homomorphism from ``source`` to Z/d given on generators."""

    source: AbelianGroup
    modulus: int
    values: Tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise IncompatibleCharacterError(
                f"Character modulus must be at least 2, got {self.modulus}"
            )
        if len(self.values) != self.source.ngens:
            raise IncompatibleCharacterError(
                f"Character needs {self.source.ngens} values for {self.source}, "
                f"got {len(self.values)}"
            )
        values = tuple(int(v) % self.modulus for v in self.values)
        object.__setattr__(self, "values", values)
        for m, v in zip(self.source.torsion, values):
            if (m * v) % self.modulus:
                raise IncompatibleCharacterError(
                    f"Value {v} on a generator of order {m} is not defined mod {self.modulus}"
                )

    def as_hom(self) -> GroupHom:
        return GroupHom(
            self.source,
            AbelianGroup.cyclic(self.modulus),
            IntMatrix.from_rows([list(self.values)], cols=self.source.ngens),
        )

    def apply(self, coords: Sequence[int]) -> int:
        return sum(c * v for c, v in zip(coords, self.values)) % self.modulus


@dataclass(frozen=True)
class EquivariantHermitianForm:
    """
    n x n matrix over Z[Z/d]; entry (i, j) is a length-d coefficient tuple,
    coefficient k multiplying the k-th power of the deck generator.
    """

    size: int
    modulus: int
    entries: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def __post_init__(self):
        entries = tuple(
            tuple(tuple(int(c) for c in e) for e in row) for row in self.entries
        )
        object.__setattr__(self, "entries", entries)
        d, n = self.modulus, self.size
        if d < 1:
            raise FormError(f"Form modulus must be positive, got {d}")
        if len(entries) != n or any(len(row) != n for row in entries):
            raise FormError(f"Form must be {n}x{n}")
        if any(len(e) != d for row in entries for e in row):
            raise FormError(f"Every entry needs {d} coefficients")
        for i in range(n):
            for j in range(i, n):
                if entries[j][i] != _bar(entries[i][j]):
                    raise FormError(f"Form is not self-adjoint at ({i}, {j})")

    @classmethod
    def from_integer_matrix(cls, m: IntMatrix, modulus: int) -> "EquivariantHermitianForm":
        """Constant form: each integer entry placed on the trivial power."""
        return cls(
            m.rows,
            modulus,
            tuple(
                tuple((m[i, j],) + (0,) * (modulus - 1) for j in range(m.cols))
                for i in range(m.rows)
            ),
        )

    def coefficient_sums(self) -> IntMatrix:
        """The form at ω^0 = 1."""
        return IntMatrix.from_rows(
            [[sum(e) for e in row] for row in self.entries], cols=self.size
        )


def _bar(entry: Tuple[int, ...]) -> Tuple[int, ...]:
    d = len(entry)
    return tuple(entry[(-k) % d] for k in range(d))


def _sign_variations(signs: Sequence[int]) -> int:
    nonzero = [s for s in signs if s]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)


def _certified_sign(coeffs: Sequence[int], e: int) -> int:
    """
    Sign of Σ a_i cos(2π i / e), known to be a nonzero real number.

    The sum is enclosed with mpmath interval arithmetic; precision doubles
    from the configured start until the enclosure excludes zero.
    """
    digits = config.signature_start_digits
    while digits <= config.signature_max_digits:
        ctx = type(mpmath.iv)()
        ctx.dps = digits
        value = ctx.mpf(0)
        for i, c in enumerate(coeffs):
            if c:
                value += c * ctx.cos(2 * ctx.pi * i / e)
        if value.a > 0:
            return 1
        if value.b < 0:
            return -1
        logger.debug(f"Sign unresolved at {digits} digits, doubling precision")
        digits *= 2
    raise RibbonError(
        f"Could not certify a coefficient sign within {config.signature_max_digits} digits"
    )


def _cyclotomic_charpoly(form: EquivariantHermitianForm, k: int) -> Tuple[int, List[List[int]]]:
    """Characteristic polynomial of the form at ω^k with coefficients in Z[x]/Φ_e."""
    d = form.modulus
    g = math.gcd(d, k)
    e = d // g
    phi = sympy.Poly(sympy.cyclotomic_poly(e, _x), _x)

    # ω^k = ζ_e^(k/g), so the j-th power of the deck generator goes to x^(j*k/g)
    def entry(coeffs: Tuple[int, ...]):
        poly = sympy.Poly(
            sum((c * _x ** ((j * (k // g)) % e) for j, c in enumerate(coeffs)), sympy.Integer(0)),
            _x,
        )
        return poly.rem(phi).as_expr()

    m = sympy.Matrix(form.size, form.size, lambda i, j: entry(form.entries[i][j]))
    charpoly = m.charpoly(_lam)
    reduced = []
    for c in charpoly.all_coeffs():
        rem = sympy.Poly(sympy.expand(c), _x).rem(phi)
        reduced.append([int(a) for a in reversed(rem.all_coeffs())] if not rem.is_zero else [])
    return e, reduced


def omega_signature(form: EquivariantHermitianForm, k: int) -> int:
    """Signature of the Hermitian matrix obtained by substituting ω^k, ω = e^(2πi/d)."""
    if not 0 <= k < form.modulus:
        raise ValueError(f"k must lie in [0, {form.modulus}), got {k}")
    if form.size == 0:
        return 0
    e, coeffs = _cyclotomic_charpoly(form, k)
    signs = [_certified_sign(c, e) if c else 0 for c in coeffs]

    # leading coefficient first; zero eigenvalues are the trailing zeros
    while signs and signs[-1] == 0:
        signs.pop()
    degree = len(coeffs) - 1
    positive = _sign_variations(signs)
    negative = _sign_variations(
        [s * (-1) ** ((degree - i) % 2) for i, s in enumerate(signs)]
    )
    logger.debug(f"ω-signature at k={k}: +{positive} -{negative}")
    return positive - negative


@dataclass(frozen=True)
class BoundingData:
    """An equivariant intersection form of W with n*(M, ψ) = ∂(W, φ)."""

    form: EquivariantHermitianForm
    multiplicity: int
    sigma_w: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise InconsistentBoundingError(
                f"Multiplicity must be at least 1, got {self.multiplicity}"
            )
        untwisted = omega_signature(self.form, 0)
        if untwisted != self.sigma_w:
            raise InconsistentBoundingError(
                f"sigma_W = {self.sigma_w} but the form has signature {untwisted} at ω^0"
            )

    @property
    def modulus(self) -> int:
        return self.form.modulus


def eta_tilde(b: BoundingData, k: int) -> Fraction:
    """(σ̄ at ω^k − σ(W)) / n, exactly."""
    return Fraction(omega_signature(b.form, k) - b.sigma_w, b.multiplicity)


def _check_compatible(bundle: SeifertBundle, nu: Character, bounding: BoundingData) -> None:
    if nu.source != bundle.h1_v:
        raise IncompatibleCharacterError(
            f"Character is defined on {nu.source}, but H1(V) of {bundle.name} is {bundle.h1_v}"
        )
    if nu.modulus != bounding.modulus:
        raise IncompatibleCharacterError(
            f"Character modulus {nu.modulus} differs from the form modulus {bounding.modulus}"
        )


def eta_knot(
    bundle: SeifertBundle, nu: Character, bounding: BoundingData, k: int = 1
) -> QmodZ:
    """η̃(K, ν) at ω^k, reduced mod 1."""
    _check_compatible(bundle, nu, bounding)
    value = QmodZ.of(eta_tilde(bounding, k))
    logger.debug(f"eta of {bundle.name} at k={k}: {value}")
    return value


def eta_table(
    bundle: SeifertBundle, nu: Character, bounding: BoundingData
) -> List[Tuple[int, QmodZ]]:
    """η̃ mod 1 for every nontrivial eigenvalue index k = 1..d-1."""
    _check_compatible(bundle, nu, bounding)
    return [(k, eta_knot(bundle, nu, bounding, k)) for k in range(1, nu.modulus)]


def obstruction_vanishes(table: Sequence[Tuple[int, QmodZ]]) -> bool:
    return all(value.is_zero() for _, value in table)


def factor_character(nu: Character) -> Tuple[GroupHom, Character]:
    """Write ν on a free group as (reduction mod d) ∘ ζ with ζ to Z."""
    if nu.source.torsion:
        raise NotFreeError(f"Character source {nu.source} has torsion")
    integers = AbelianGroup.free(1)
    zeta = GroupHom(
        nu.source,
        integers,
        IntMatrix.from_rows([list(nu.values)], cols=nu.source.ngens),
    )
    return zeta, Character(integers, nu.modulus, (1,))


def bounding_through_circle(
    nu: Character, form: EquivariantHermitianForm
) -> BoundingData:
    """
    Bounding data with multiplicity 1 for a character that factors through Z.

    Raises NotFreeError when ν does not factor.
    """
    factor_character(nu)
    if form.modulus != nu.modulus:
        raise IncompatibleCharacterError(
            f"Form modulus {form.modulus} differs from the character modulus {nu.modulus}"
        )
    return BoundingData(form, 1, omega_signature(form, 0))