"""
Extending a circle-valued map over a cell complex.

A map to the circle is determined up to homotopy by an integer 1-cochain
whose value on every 2-cell boundary is zero; higher cells impose nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from ribbon.exceptions import DocumentError, NoExtensionError, NoSolutionError
from ribbon.linalg import IntMatrix, solve_integer, vstack
from ribbon.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class CellComplexData:
    """
    Cell counts, boundary maps and distinguished 1-cycles.

    ``boundary_1`` is c0 x c1 and ``boundary_2`` is c1 x c2. Counts beyond
    dimension 2 are kept but ignored.
    """

    cells: Tuple[int, ...]
    boundary_1: IntMatrix
    boundary_2: IntMatrix
    cycles: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        cells = tuple(int(c) for c in self.cells)
        cells = cells + (0,) * max(0, 3 - len(cells))
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "cycles", tuple(tuple(int(x) for x in z) for z in self.cycles))
        c0, c1, c2 = cells[:3]
        if self.boundary_1.shape != (c0, c1):
            raise DocumentError(f"boundary_1 must be {c0}x{c1}, got {self.boundary_1.shape}")
        if self.boundary_2.shape != (c1, c2):
            raise DocumentError(f"boundary_2 must be {c1}x{c2}, got {self.boundary_2.shape}")
        if not (self.boundary_1 @ self.boundary_2).is_zero():
            raise DocumentError("boundary_1 ∘ boundary_2 is not zero")
        for k, z in enumerate(self.cycles):
            if len(z) != c1:
                raise DocumentError(f"Cycle {k} needs {c1} coefficients, got {len(z)}")
            if any(self.boundary_1.apply(z)):
                raise DocumentError(f"Cycle {k} is not a cycle")

    @property
    def edges(self) -> int:
        return self.cells[1]


def _period(phi: Sequence[int], z: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(phi, z))


def extend_to_circle(c: CellComplexData, degrees: Sequence[int]) -> Tuple[int, ...]:
    """
    Integer 1-cochain vanishing on every 2-cell boundary with the requested
    period on each distinguished cycle.
    """
    degrees = [int(d) for d in degrees]
    if len(degrees) != len(c.cycles):
        raise NoExtensionError(
            f"{len(degrees)} degrees given for {len(c.cycles)} distinguished cycles"
        )
    system = vstack(
        c.boundary_2.transpose(),
        IntMatrix.from_rows(c.cycles, cols=c.edges),
    )
    rhs = [0] * c.boundary_2.cols + degrees
    try:
        phi = solve_integer(system, rhs)
    except NoSolutionError as e:
        raise NoExtensionError(f"Periods {tuple(degrees)} are not realizable: {e}") from e
    logger.debug(f"Extension found: φ = {phi}")
    return tuple(phi)


@dataclass
class CochainReport:
    """Offending 2-cells (empty when φ extends) and the period on each cycle."""

    bad_cells: List[int] = field(default_factory=list)
    periods: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.bad_cells


def verify_cochain(c: CellComplexData, phi: Sequence[int]) -> CochainReport:
    if len(phi) != c.edges:
        raise DocumentError(f"Cochain needs {c.edges} values, got {len(phi)}")
    report = CochainReport()
    for j in range(c.boundary_2.cols):
        if _period(phi, c.boundary_2.column(j)):
            report.bad_cells.append(j)
    report.periods = [_period(phi, z) for z in c.cycles]
    return report
