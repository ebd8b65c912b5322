"""
Q/Z-valued torsion pairings, their push-forward along quotient maps, and
equivalence testing of Farber-Levine structures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from ribbon.exceptions import (
    NoDescentError,
    NotEquivalentError,
    NotSurjectiveError,
    PairingError,
)
from ribbon.groups import AbelianGroup, GroupElement, GroupHom, QmodZ, automorphisms
from ribbon.laurent import FiniteLaurentModule, module_isomorphisms
from ribbon.logging_config import get_logger

logger = get_logger(__name__)

Table = Tuple[Tuple[QmodZ, ...], ...]


@dataclass(frozen=True)
class TorsionPairing:
    """A symmetric pairing stored by its values on generator pairs."""

    group: AbelianGroup
    table: Table

    def __post_init__(self):
        table = tuple(tuple(QmodZ.of(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        n = self.group.ngens
        if not self.group.is_finite:
            raise PairingError(f"Torsion pairings need a finite group, not {self.group}")
        if len(table) != n or any(len(row) != n for row in table):
            raise PairingError(f"Pairing table must be {n}x{n} for {self.group}")
        for i in range(n):
            for j in range(n):
                if table[i][j] != table[j][i]:
                    raise PairingError(f"Pairing table not symmetric at ({i}, {j})")
                if not table[i][j].scale(self.group.torsion[i]).is_zero():
                    raise PairingError(
                        f"Value {table[i][j]} at ({i}, {j}) is not killed by "
                        f"the generator order {self.group.torsion[i]}"
                    )

    @classmethod
    def zero(cls, group: AbelianGroup) -> "TorsionPairing":
        n = group.ngens
        return cls(group, tuple((QmodZ(),) * n for _ in range(n)))

    @classmethod
    def from_values(
        cls, group: AbelianGroup, values: Sequence[Sequence[object]]
    ) -> "TorsionPairing":
        """Build from a table of ``"p/q"`` strings, Fractions or QmodZ values."""
        return cls(
            group,
            tuple(
                tuple(QmodZ.parse(v) if isinstance(v, str) else QmodZ.of(v) for v in row)
                for row in values
            ),
        )

    def value(self, x: GroupElement, y: GroupElement) -> QmodZ:
        total = QmodZ()
        for i, xi in enumerate(x.coords):
            if not xi:
                continue
            for j, yj in enumerate(y.coords):
                if yj:
                    total = total + self.table[i][j].scale(xi * yj)
        return total

    def is_nondegenerate(self) -> bool:
        gens = self.group.generators()
        return all(
            any(not self.value(x, g).is_zero() for g in gens)
            for x in self.group.elements()
            if not x.is_zero()
        )

    def pullback(self, f: GroupHom) -> "TorsionPairing":
        """The pairing (x, y) -> self(f(x), f(y)) on the source of f."""
        if f.target != self.group:
            raise PairingError("Pullback map does not land in the pairing group")
        images = [f.apply(g) for g in f.source.generators()]
        return TorsionPairing(
            f.source, tuple(tuple(self.value(a, b) for b in images) for a in images)
        )

    def is_trivial(self) -> bool:
        return all(v.is_zero() for row in self.table for v in row)

    def __str__(self) -> str:
        if self.is_trivial():
            return "pairing trivial"
        if self.group.ngens == 1:
            return f"λ(g,g) = {self.table[0][0]}"
        rows = ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.table)
        return f"λ = [{rows}]"


@dataclass(frozen=True)
class FarberLevineStructure:
    """A torsion module with t-action together with a pairing on it."""

    module: FiniteLaurentModule
    pairing: TorsionPairing

    def __post_init__(self):
        if self.module.group != self.pairing.group:
            raise PairingError(
                f"Pairing group {self.pairing.group} differs from module group "
                f"{self.module.group}"
            )

    @property
    def group(self) -> AbelianGroup:
        return self.module.group

    @property
    def tau(self) -> GroupHom:
        return self.module.tau

    def is_tau_invariant(self) -> bool:
        """Whether λ(τx, τy) = λ(x, y) on all generator pairs."""
        return self.pairing.pullback(self.tau) == self.pairing


def induce(p: TorsionPairing, f: GroupHom) -> TorsionPairing:
    """
    Push ``p`` forward along a surjection.

    Raises NoDescentError with a witness (k, g), k in ker f and g a
    generator, when p(k, g) != 0.
    """
    if f.source != p.group:
        raise PairingError("Quotient map does not start at the pairing group")
    if not f.is_surjective():
        raise NotSurjectiveError(f"Map onto {f.target} is not surjective")
    gens = p.group.generators()
    for k in f.kernel_elements():
        for g in gens:
            if not p.value(k, g).is_zero():
                raise NoDescentError(
                    f"Pairing does not descend: λ({k}, {g}) = {p.value(k, g)} "
                    f"with {k} in the kernel",
                    witness=(k, g),
                )
    lifts = [f.preimage(h) for h in f.target.generators()]
    return TorsionPairing(
        f.target, tuple(tuple(p.value(a, b) for b in lifts) for a in lifts)
    )


def preserves_pairing(f: GroupHom, p1: TorsionPairing, p2: TorsionPairing) -> bool:
    """p2(f x, f y) = p1(x, y) for all generators x, y."""
    return p2.pullback(f) == p1


def fl_equivalences(
    f1: FarberLevineStructure, f2: FarberLevineStructure, bound: Optional[int] = None
) -> Iterator[GroupHom]:
    for f in module_isomorphisms(f1.module, f2.module, bound):
        if preserves_pairing(f, f1.pairing, f2.pairing):
            yield f


def fl_equivalent(
    f1: FarberLevineStructure, f2: FarberLevineStructure, bound: Optional[int] = None
) -> GroupHom:
    """First τ-equivariant isometry f1 -> f2, or NotEquivalentError."""
    for f in fl_equivalences(f1, f2, bound):
        logger.debug(f"Farber-Levine equivalence found: {f}")
        return f
    raise NotEquivalentError("No τ-equivariant isometry between the structures")


def pairings_equivalent(
    p1: TorsionPairing, p2: TorsionPairing, bound: Optional[int] = None
) -> GroupHom:
    """First isometry p1 -> p2 ignoring any module structure."""
    if p1.group == p2.group:
        for f in automorphisms(p1.group, bound):
            if preserves_pairing(f, p1, p2):
                return f
    raise NotEquivalentError("Pairings are not isometric")
