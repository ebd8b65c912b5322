"""
Custom exceptions for ribbon-invariants.
Provides structured error handling throughout the codebase.
"""

from typing import Any, Optional, Tuple


class RibbonError(Exception):
    """Base exception for all ribbon-invariants errors."""

    pass


class LinalgError(RibbonError):
    """Raised for exact linear algebra failures."""

    pass


class GroupError(RibbonError):
    """Raised for abelian group and homomorphism errors."""

    pass


class AlexanderError(RibbonError):
    """Raised when the Alexander torsion module cannot be computed."""

    pass


class PairingError(RibbonError):
    """Raised for torsion pairing errors."""

    pass


class CharacterError(RibbonError):
    """Raised for characters that cannot be used for an eta computation."""

    pass


class DocumentError(RibbonError):
    """Raised when a data document cannot be parsed or is malformed."""

    pass


# Specific error subclasses for more granular error handling


class NonSquareError(LinalgError):
    """Raised when a square matrix is required."""

    pass


class ShapeMismatchError(LinalgError):
    """Raised when matrix shapes are not conformable."""

    pass


class NoSolutionError(LinalgError):
    """Raised when a linear system has no integer solution."""

    pass


class InvalidHomomorphismError(GroupError):
    """Raised when a matrix does not define a homomorphism of the given groups."""

    pass


class TooLargeError(GroupError):
    """Raised when a group exceeds the automorphism enumeration bound."""

    def __init__(self, order: int, bound: int):
        super().__init__(
            f"Group of order {order} exceeds the automorphism bound {bound}"
        )
        self.order = order
        self.bound = bound


class NotIsomorphicError(GroupError):
    """Raised when an exhaustive search finds no module isomorphism."""

    pass


class NotStabilizedError(AlexanderError):
    """Raised when the window truncation never stabilizes."""

    pass


class PreconditionFailedError(AlexanderError):
    """Raised when det(B - A) vanishes on the free parts."""

    pass


class ExactPathUnavailableError(AlexanderError):
    """Raised when the closed-form torsion computation does not apply."""

    pass


class NoDescentError(PairingError):
    """Raised when a pairing does not factor through a quotient map."""

    def __init__(self, message: str, witness: Optional[Tuple[Any, Any]] = None):
        super().__init__(message)
        self.witness = witness


class NotSurjectiveError(PairingError):
    """Raised when iota fails to be onto the Alexander torsion group."""

    pass


class NotEquivalentError(PairingError):
    """Raised when an exhaustive search finds no pairing equivalence."""

    pass


class IncompatibleCharacterError(CharacterError):
    """Raised when a character does not factor through the bundle data."""

    pass


class NotFreeError(CharacterError):
    """Raised when a character source has torsion."""

    pass


class InconsistentBoundingError(RibbonError):
    """Raised when bounding data disagrees with its own signature."""

    pass


class InvalidDecorationError(RibbonError):
    """Raised when a pass-move decoration violates its constraints."""

    pass


class NoExtensionError(RibbonError):
    """Raised when requested circle-map periods cannot be realized."""

    pass


class FormError(RibbonError):
    """Raised when an equivariant form is malformed or not self-adjoint."""

    pass
