"""
Algebraic Seifert data: H1 of the hypersurface V and of the complement
piece Y, the two pushoff maps, and a symmetric matrix presenting the
torsion linking form of the closed-up hypersurface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional

from ribbon.exceptions import (
    DocumentError,
    InvalidHomomorphismError,
    NotSurjectiveError,
    PairingError,
    PreconditionFailedError,
)
from ribbon.groups import AbelianGroup, GroupHom, from_presentation
from ribbon.laurent import alexander_torsion, free_rank_condition
from ribbon.linalg import IntMatrix, determinant, inverse_rational
from ribbon.logging_config import get_logger
from ribbon.pairing import FarberLevineStructure, TorsionPairing, induce

logger = get_logger(__name__)


@dataclass(frozen=True)
class SeifertBundle:
    """
    Seifert data for one 2-knot.

    ``pushoff_pos`` (A) and ``pushoff_neg`` (B) are matrices from H1(V)
    generators to H1(Y) coordinates. ``iota`` maps coker(linking_matrix) to
    the Alexander torsion group; None means derive it.
    """

    name: str
    h1_v: AbelianGroup
    h1_y: AbelianGroup
    pushoff_pos: IntMatrix
    pushoff_neg: IntMatrix
    linking_matrix: IntMatrix
    iota: Optional[IntMatrix] = None
    description: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise DocumentError("Knot name must be nonempty")

    @cached_property
    def pos_hom(self) -> GroupHom:
        return GroupHom(self.h1_v, self.h1_y, self.pushoff_pos)

    @cached_property
    def neg_hom(self) -> GroupHom:
        return GroupHom(self.h1_v, self.h1_y, self.pushoff_neg)

    @classmethod
    def trivial(cls, name: str = "trivial") -> "SeifertBundle":
        g = AbelianGroup.trivial()
        empty = IntMatrix.zeros(0, 0)
        return cls(name, g, g, empty, empty, empty)


@dataclass
class ValidationReport:
    """Outcome of :func:`validate`; ``violations`` is empty for valid data."""

    name: str
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return f"{self.name}: valid"
        return f"{self.name}: " + "; ".join(self.violations)


def validate(bundle: SeifertBundle) -> ValidationReport:
    """Check every structural condition of a bundle and list the failures."""
    report = ValidationReport(bundle.name)
    homs_ok = True
    for label, attr in (("pushoff_pos", "pos_hom"), ("pushoff_neg", "neg_hom")):
        try:
            getattr(bundle, attr)
        except InvalidHomomorphismError as e:
            homs_ok = False
            report.violations.append(f"{label} is not a homomorphism: {e}")

    lam = bundle.linking_matrix
    if not lam.is_square:
        report.violations.append("linking matrix not square")
    else:
        if not lam.is_symmetric():
            report.violations.append("linking matrix not symmetric")
        if determinant(lam) == 0:
            report.violations.append("linking matrix is singular")
        else:
            presented, _ = from_presentation(lam)
            expected = bundle.h1_v.torsion_subgroup()
            if presented != expected:
                report.violations.append(
                    f"coker(linking matrix) is {presented}, expected Tor H1(V) = {expected}"
                )

    if bundle.h1_v.free_rank > bundle.h1_y.free_rank:
        report.violations.append("free rank of H1(V) exceeds free rank of H1(Y)")
    elif homs_ok and not free_rank_condition(bundle):
        report.violations.append("det(B−A)=0")

    if report.violations:
        logger.debug(f"Validation of {bundle.name}: {report}")
    return report


def linking_pairing(linking_matrix: IntMatrix) -> TorsionPairing:
    """
    Linking form on coker(Λ): λ(x, y) = xᵀ Λ⁻¹ y mod Z, evaluated on
    integer lifts of the canonical generators.
    """
    group, projection = from_presentation(linking_matrix)
    inverse = inverse_rational(linking_matrix)
    lifts = [projection.preimage(g).coords for g in group.generators()]
    n = linking_matrix.rows

    def form(x, y):
        return sum(x[i] * inverse[i][j] * y[j] for i in range(n) for j in range(n))

    return TorsionPairing(
        group, tuple(tuple(form(a, b) for b in lifts) for a in lifts)
    )


def derive_iota(bundle: SeifertBundle, torsion_group: AbelianGroup) -> GroupHom:
    """ι from coker(Λ) to the Alexander torsion, given or canonical."""
    source, _ = from_presentation(bundle.linking_matrix)
    if bundle.iota is not None:
        return GroupHom(source, torsion_group, bundle.iota)
    if source != torsion_group:
        raise PairingError(
            f"iota cannot be derived: coker(linking matrix) is {source} but the "
            f"Alexander torsion is {torsion_group}; supply it explicitly"
        )
    return GroupHom.identity(source)


def farber_levine(bundle: SeifertBundle, **torsion_options) -> FarberLevineStructure:
    """The Alexander torsion module with the pairing pushed forward along ι."""
    report = validate(bundle)
    if not report.ok:
        raise PreconditionFailedError("; ".join(report.violations))
    module = alexander_torsion(bundle, **torsion_options)
    iota = derive_iota(bundle, module.group)
    if not iota.is_surjective():
        raise NotSurjectiveError(
            f"iota is not onto the Alexander torsion group {module.group}"
        )
    pairing = induce(linking_pairing(bundle.linking_matrix), iota)
    structure = FarberLevineStructure(module, pairing)
    logger.info(f"Farber-Levine structure of {bundle.name}: {module.group}, {pairing}")
    return structure
