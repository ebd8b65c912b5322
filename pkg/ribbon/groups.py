"""
Finitely generated abelian groups in canonical (invariant-factor) form.

Coordinates list the torsion generators first, in divisibility order,
then the free generators. Homomorphisms are integer matrices of shape
target-generators x source-generators, reduced modulo the target moduli.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import DefaultDict, Iterator, List, Optional, Sequence, Tuple, Union

import sympy

from ribbon.cache import cached_automorphisms
from ribbon.config import config
from ribbon.exceptions import (
    GroupError,
    InvalidHomomorphismError,
    NoSolutionError,
    TooLargeError,
)
from ribbon.linalg import IntMatrix, cokernel, hstack, integer_kernel, solve_integer
from ribbon.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class AbelianGroup:
    """Z/d_1 + ... + Z/d_k + Z^r with d_i >= 2 and d_i | d_(i+1)."""

    free_rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        torsion = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", torsion)
        if self.free_rank < 0:
            raise GroupError(f"Free rank must be nonnegative, got {self.free_rank}")
        if any(d < 2 for d in torsion):
            raise GroupError(f"Torsion moduli must be at least 2, got {torsion}")
        if any(b % a for a, b in zip(torsion, torsion[1:])):
            raise GroupError(f"Torsion moduli {torsion} do not form a divisibility chain")

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls()

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls(0, (n,)) if n != 1 else cls()

    @classmethod
    def free(cls, rank: int) -> "AbelianGroup":
        return cls(rank, ())

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def moduli(self) -> Tuple[int, ...]:
        """Modulus per generator, 0 for free generators."""
        return self.torsion + (0,) * self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        if not self.is_finite:
            return None
        return math.prod(self.torsion)

    def torsion_subgroup(self) -> "AbelianGroup":
        return AbelianGroup(0, self.torsion)

    def relation_matrix(self) -> IntMatrix:
        """Diagonal presentation matrix of the group on its own generators."""
        return IntMatrix.diagonal(list(self.moduli))

    def reduce(self, coords: Sequence[int]) -> Tuple[int, ...]:
        if len(coords) != self.ngens:
            raise GroupError(
                f"Expected {self.ngens} coordinates for {self}, got {len(coords)}"
            )
        return tuple(c % d if d else int(c) for c, d in zip(coords, self.moduli))

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, self.reduce(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.ngens)

    def generators(self) -> List["GroupElement"]:
        return [
            GroupElement(self, tuple(int(i == j) for j in range(self.ngens)))
            for i in range(self.ngens)
        ]

    def elements(self) -> Iterator["GroupElement"]:
        """All elements of a finite group in lexicographic coordinate order."""
        if not self.is_finite:
            raise GroupError(f"Cannot enumerate the infinite group {self}")
        for coords in itertools.product(*(range(d) for d in self.torsion)):
            yield GroupElement(self, coords)

    def elementary_divisors(self) -> Tuple[int, ...]:
        """Prime powers of the primary decomposition of the torsion, sorted."""
        powers = []
        for d in self.torsion:
            powers.extend(p**e for p, e in sympy.factorint(d).items())
        return tuple(sorted(powers))

    @classmethod
    def from_elementary_divisors(
        cls, powers: Sequence[int], free_rank: int = 0
    ) -> "AbelianGroup":
        by_prime: DefaultDict[int, List[int]] = defaultdict(list)
        for q in powers:
            if q == 1:
                continue
            primes = sympy.factorint(q)
            if len(primes) != 1:
                raise GroupError(f"{q} is not a prime power")
            by_prime[next(iter(primes))].append(q)
        length = max((len(v) for v in by_prime.values()), default=0)
        factors = [1] * length
        for qs in by_prime.values():
            for i, q in enumerate(sorted(qs, reverse=True)):
                factors[i] *= q
        return cls(free_rank, tuple(reversed(factors)))

    def primes(self) -> List[int]:
        if not self.torsion:
            return []
        return sorted(sympy.factorint(self.torsion[-1]))

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElement:
    """An element in canonical coordinates (torsion coordinates reduced)."""

    group: AbelianGroup
    coords: Tuple[int, ...]

    @property
    def torsion_coords(self) -> Tuple[int, ...]:
        return self.coords[: len(self.group.torsion)]

    @property
    def free_coords(self) -> Tuple[int, ...]:
        return self.coords[len(self.group.torsion) :]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise GroupError(f"Elements of {self.group} and {other.group} cannot mix")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "GroupElement":
        return self.group.element([-a for a in self.coords])

    def __rmul__(self, k: int) -> "GroupElement":
        return self.group.element([k * a for a in self.coords])

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.coords)) + ")"


def order_of(x: GroupElement) -> Optional[int]:
    """Least n >= 1 with n*x = 0, or None for elements of infinite order."""
    if any(x.free_coords):
        return None
    n = 1
    for c, d in zip(x.torsion_coords, x.group.torsion):
        n = math.lcm(n, d // math.gcd(d, c))
    return n


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism between canonical groups, checked on construction."""

    source: AbelianGroup
    target: AbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        m = self.matrix
        if not isinstance(m, IntMatrix):
            m = IntMatrix.from_rows(m, cols=self.source.ngens)
        if m.shape != (self.target.ngens, self.source.ngens):
            raise InvalidHomomorphismError(
                f"Matrix shape {m.shape} does not fit {self.source} -> {self.target}"
            )
        for j, mj in enumerate(self.source.moduli):
            if not mj:
                continue
            for i, ni in enumerate(self.target.moduli):
                value = mj * m[i, j]
                if (ni and value % ni) or (not ni and value):
                    raise InvalidHomomorphismError(
                        f"Generator {j} of order {mj} in {self.source} cannot map to "
                        f"coordinate {i} value {m[i, j]} of {self.target}"
                    )
        reduced = IntMatrix.from_rows(
            [
                [x % ni if ni else x for x in m.row(i)]
                for i, ni in enumerate(self.target.moduli)
            ],
            cols=m.cols,
        )
        object.__setattr__(self, "matrix", reduced)

    @classmethod
    def identity(cls, group: AbelianGroup) -> "GroupHom":
        return cls(group, group, IntMatrix.identity(group.ngens))

    @classmethod
    def zero(cls, source: AbelianGroup, target: AbelianGroup) -> "GroupHom":
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens))

    @classmethod
    def scalar(cls, group: AbelianGroup, k: int) -> "GroupHom":
        return cls(group, group, IntMatrix.diagonal([k] * group.ngens))

    def apply(self, x: Union[GroupElement, Sequence[int]]) -> GroupElement:
        coords = x.coords if isinstance(x, GroupElement) else tuple(x)
        return self.target.element(self.matrix.apply(coords))

    __call__ = apply

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self ∘ inner."""
        if inner.target != self.source:
            raise GroupError(
                f"Cannot compose {inner.source} -> {inner.target} with "
                f"{self.source} -> {self.target}"
            )
        return GroupHom(inner.source, self.target, self.matrix @ inner.matrix)

    def image_presentation(self) -> IntMatrix:
        """Columns of the matrix followed by the target relations."""
        return hstack(self.matrix, self.target.relation_matrix())

    def is_surjective(self) -> bool:
        return not cokernel(self.image_presentation()).invariant_factors

    def kernel_lattice(self) -> List[Tuple[int, ...]]:
        """Integer vectors spanning the preimage of the target relations."""
        basis = integer_kernel(self.image_presentation())
        n = self.source.ngens
        return [col[:n] for col in basis.columns()]

    def is_injective(self) -> bool:
        return all(
            self.source.element(v).is_zero() for v in self.kernel_lattice()
        )

    def is_isomorphism(self) -> bool:
        return self.is_surjective() and self.is_injective()

    def kernel_elements(self) -> List[GroupElement]:
        return [x for x in self.source.elements() if self.apply(x).is_zero()]

    def image_elements(self) -> List[GroupElement]:
        seen = {}
        for x in self.source.elements():
            y = self.apply(x)
            seen.setdefault(y.coords, y)
        return list(seen.values())

    def preimage(self, y: Union[GroupElement, Sequence[int]]) -> GroupElement:
        """Some x with f(x) = y; raises NoSolutionError when y is not in the image."""
        coords = y.coords if isinstance(y, GroupElement) else tuple(y)
        z = solve_integer(self.image_presentation(), coords)
        return self.source.element(z[: self.source.ngens])

    def inverse(self) -> "GroupHom":
        if not self.is_injective():
            raise GroupError("Cannot invert a homomorphism with nontrivial kernel")
        try:
            columns = [self.preimage(g).coords for g in self.target.generators()]
        except NoSolutionError:
            raise GroupError("Cannot invert a non-surjective homomorphism")
        return GroupHom(
            self.target,
            self.source,
            IntMatrix.from_columns(columns, rows=self.source.ngens),
        )

    def descend(self, source_quotient: "GroupHom", target_quotient: "GroupHom") -> "GroupHom":
        """
        The map g with g ∘ source_quotient = target_quotient ∘ self.

        ``source_quotient`` must be surjective; raises GroupError when self does
        not carry its kernel into the kernel of ``target_quotient``.
        """
        columns = [
            target_quotient.apply(self.apply(source_quotient.preimage(e))).coords
            for e in source_quotient.target.generators()
        ]
        induced = GroupHom(
            source_quotient.target,
            target_quotient.target,
            IntMatrix.from_columns(columns, rows=target_quotient.target.ngens),
        )
        for g in self.source.generators():
            if induced.apply(source_quotient.apply(g)) != target_quotient.apply(
                self.apply(g)
            ):
                raise GroupError("Homomorphism does not descend to the quotients")
        return induced

    def restrict_to_layer(self, p: int) -> sympy.Matrix:
        """Induced endomorphism of G/pG as a sympy matrix over F_p."""
        idx = [i for i, d in enumerate(self.source.torsion) if d % p == 0]
        return sympy.Matrix(
            len(idx), len(idx), lambda a, b: self.matrix[idx[a], idx[b]] % p
        )

    def __str__(self) -> str:
        return str(self.matrix)


def from_presentation(relations: IntMatrix) -> Tuple[AbelianGroup, GroupHom]:
    """
    Group presented on ``relations.rows`` generators by the relation columns,
    with the projection from the free group Z^rows onto it.
    """
    coker = cokernel(relations)
    torsion = tuple(d for d in coker.invariant_factors if d)
    free_rank = sum(1 for d in coker.invariant_factors if d == 0)
    group = AbelianGroup(free_rank, torsion)
    projection = GroupHom(AbelianGroup.free(relations.rows), group, coker.projection)
    return group, projection


def quotient(group: AbelianGroup, generators: Sequence[GroupElement]) -> GroupHom:
    """Projection of ``group`` onto its quotient by the span of ``generators``."""
    rels = hstack(
        group.relation_matrix(),
        IntMatrix.from_columns([g.coords for g in generators], rows=group.ngens),
    )
    q, proj = from_presentation(rels)
    return GroupHom(group, q, proj.matrix)


def direct_sum(*groups: AbelianGroup) -> AbelianGroup:
    """Canonical form of the direct sum."""
    return AbelianGroup.from_elementary_divisors(
        [q for g in groups for q in g.elementary_divisors()],
        free_rank=sum(g.free_rank for g in groups),
    )


def torsion_square_check(first: AbelianGroup, second: AbelianGroup) -> Optional[AbelianGroup]:
    """
    The finite group G with Tor(first ⊕ second) ≅ G ⊕ G, or None.

    For first homology groups of Seifert hypersurfaces of two ribbon-move
    equivalent 2-knots such a G always exists.
    """
    counts = Counter(first.elementary_divisors() + second.elementary_divisors())
    if any(c % 2 for c in counts.values()):
        logger.debug(f"Tor({first} ⊕ {second}) has an unpaired summand")
        return None
    return AbelianGroup.from_elementary_divisors(
        [q for q, c in sorted(counts.items()) for _ in range(c // 2)]
    )


@dataclass(frozen=True, order=True)
class QmodZ:
    """An element of Q/Z, stored as a reduced fraction in [0, 1)."""

    numerator: int = 0
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError(f"Denominator must be positive, got {self.denominator}")
        frac = Fraction(self.numerator, self.denominator) % 1
        object.__setattr__(self, "numerator", frac.numerator)
        object.__setattr__(self, "denominator", frac.denominator)

    @classmethod
    def of(cls, value: Union[Fraction, int, "QmodZ"]) -> "QmodZ":
        if isinstance(value, QmodZ):
            return value
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @classmethod
    def parse(cls, text: str) -> "QmodZ":
        """Parse ``"p/q"`` or an integer string."""
        try:
            return cls.of(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Not a rational number: {text!r}") from e

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def is_zero(self) -> bool:
        return self.numerator == 0

    def __add__(self, other: "QmodZ") -> "QmodZ":
        return QmodZ.of(self.as_fraction() + QmodZ.of(other).as_fraction())

    def __sub__(self, other: "QmodZ") -> "QmodZ":
        return QmodZ.of(self.as_fraction() - QmodZ.of(other).as_fraction())

    def __neg__(self) -> "QmodZ":
        return QmodZ.of(-self.as_fraction())

    def scale(self, k: int) -> "QmodZ":
        return QmodZ.of(k * self.as_fraction())

    def __mul__(self, k: int) -> "QmodZ":
        if not isinstance(k, int):
            return NotImplemented
        return self.scale(k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "0" if self.numerator == 0 else f"{self.numerator}/{self.denominator}"


def qmodz_add(a: QmodZ, b: QmodZ) -> QmodZ:
    return a + b


def qmodz_scale(q: QmodZ, k: int) -> QmodZ:
    return q.scale(k)


def _rank_mod_p(rows: List[Tuple[int, ...]], p: int) -> int:
    work = [[x % p for x in r] for r in rows]
    rank, cols = 0, len(work[0]) if work else 0
    for c in range(cols):
        pivot = next((i for i in range(rank, len(work)) if work[i][c]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = pow(work[rank][c], -1, p)
        work[rank] = [x * inv % p for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][c]:
                k = work[i][c]
                work[i] = [(x - k * y) % p for x, y in zip(work[i], work[rank])]
        rank += 1
    return rank


@cached_automorphisms
def p_group_automorphisms(
    p: int, exponents: Tuple[int, ...]
) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """
    Automorphism matrices of Z/p^e_1 + ... + Z/p^e_k (e_i ascending).

    A choice of generator images is an automorphism exactly when each image
    has order dividing its generator's order and the images are independent
    modulo p.
    """
    k = len(exponents)
    moduli = [p**e for e in exponents]
    candidates = []
    for e in exponents:
        allowed = [
            [c for c in range(m) if (c * p**e) % m == 0] for m in moduli
        ]
        candidates.append(list(itertools.product(*allowed)))

    found: List[Tuple[Tuple[int, ...], ...]] = []

    def extend(chosen: List[Tuple[int, ...]]) -> None:
        i = len(chosen)
        if i == k:
            # columns are images; store row-major
            found.append(tuple(tuple(chosen[c][r] for c in range(k)) for r in range(k)))
            return
        for y in candidates[i]:
            reduced = chosen + [y]
            if _rank_mod_p(reduced, p) == i + 1:
                extend(reduced)

    extend([])
    logger.debug(f"Aut of p-group p={p} exponents={exponents}: {len(found)} maps")
    return tuple(found)


def automorphisms(group: AbelianGroup, bound: Optional[int] = None) -> Iterator[GroupHom]:
    """
    Every automorphism of a finite group exactly once, in a fixed order.

    Each call returns an independent generator.
    """
    bound = config.max_automorphisms if bound is None else bound
    order = group.order()
    if order is None:
        raise GroupError(f"Automorphisms are only enumerated for finite groups, not {group}")
    if order > bound:
        raise TooLargeError(order, bound)
    return _automorphism_stream(group)


def _automorphism_stream(group: AbelianGroup) -> Iterator[GroupHom]:
    torsion = group.torsion
    n = len(torsion)
    layers = []
    for p in group.primes():
        vals = [sympy.multiplicity(p, d) for d in torsion]
        idx = [i for i in range(n) if vals[i] > 0]
        exps = tuple(vals[i] for i in idx)
        # CRT weights: g_i = sum_p c_{p,i} h_{p,i} with h_{p,i} = (d_i / p^e) g_i
        cofactor = {i: torsion[i] // p ** vals[i] for i in idx}
        crt = {i: pow(cofactor[i], -1, p ** vals[i]) for i in idx}
        layers.append((idx, cofactor, crt, p_group_automorphisms(p, exps)))

    for choice in itertools.product(*(layer[3] for layer in layers)):
        m = [[0] * n for _ in range(n)]
        for (idx, cofactor, crt, _), local in zip(layers, choice):
            for a, j in enumerate(idx):
                for b, i in enumerate(idx):
                    m[j][i] += crt[i] * local[a][b] * cofactor[j]
        yield GroupHom(group, group, IntMatrix.from_rows(m, cols=n))
