"""
Laurent polynomial matrices and the torsion of the Alexander module.

The module presented by Seifert data is H1(Y)[t, t^-1] modulo the
relations t*A(v) - B(v) for v in H1(V). Its Z-torsion is a finite group
with the covering translation t acting as an automorphism tau.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, Iterator, List, Mapping, NamedTuple, Optional, Tuple

import sympy

from ribbon.config import config
from ribbon.exceptions import (
    ExactPathUnavailableError,
    GroupError,
    NonSquareError,
    NotIsomorphicError,
    NotStabilizedError,
    PreconditionFailedError,
    ShapeMismatchError,
    TooLargeError,
)
from ribbon.groups import (
    AbelianGroup,
    GroupHom,
    automorphisms,
    from_presentation,
    quotient,
)
from ribbon.linalg import IntMatrix, rank
from ribbon.logging_config import get_logger

if TYPE_CHECKING:
    from ribbon.seifert import SeifertBundle

logger = get_logger(__name__)

_t = sympy.Symbol("t")


class LaurentPoly:
    """Finitely supported integer coefficients indexed by integer exponents."""

    __slots__ = ("_terms",)

    def __init__(self, coeffs: Optional[Mapping[int, int]] = None):
        terms = {int(e): int(c) for e, c in (coeffs or {}).items() if c}
        self._terms: Tuple[Tuple[int, int], ...] = tuple(sorted(terms.items()))

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, c: int, e: int) -> "LaurentPoly":
        return cls({e: c})

    @classmethod
    def from_sympy(cls, expr) -> "LaurentPoly":
        """Convert a sympy expression in ``t`` (negative powers allowed)."""
        expr = sympy.expand(expr)
        coeffs: Dict[int, int] = {}
        for term in sympy.Add.make_args(expr):
            c, e = term.as_coeff_exponent(_t)
            if not (c.is_integer and e.is_integer):
                raise ValueError(f"Not an integral Laurent polynomial term: {term}")
            coeffs[int(e)] = coeffs.get(int(e), 0) + int(c)
        return cls(coeffs)

    @property
    def terms(self) -> Tuple[Tuple[int, int], ...]:
        return self._terms

    def coefficient(self, e: int) -> int:
        return dict(self._terms).get(e, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def degree_bounds(self) -> Optional[Tuple[int, int]]:
        if not self._terms:
            return None
        return (self._terms[0][0], self._terms[-1][0])

    def content(self) -> int:
        """gcd of the coefficients (0 for the zero polynomial)."""
        g = 0
        for _, c in self._terms:
            g = math.gcd(g, c)
        return g

    def evaluate(self, x):
        """Exact value at a nonzero integer or Fraction."""
        value = sum((c * Fraction(x) ** e for e, c in self._terms), Fraction(0))
        return int(value) if value.denominator == 1 else value

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self._terms})

    def to_sympy(self):
        return sum((c * _t**e for e, c in self._terms), sympy.Integer(0))

    def __add__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        coeffs = dict(self._terms)
        for e, c in other._terms:
            coeffs[e] = coeffs.get(e, 0) + c
        return LaurentPoly(coeffs)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._terms})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        coeffs: Dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                coeffs[e1 + e2] = coeffs.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(coeffs)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({dict(self._terms)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, (e, c) in enumerate(self._terms):
            if e == 0:
                mono = str(abs(c))
            else:
                power = "t" if e == 1 else f"t^{e}"
                mono = power if abs(c) == 1 else f"{abs(c)}{power}"
            if idx == 0:
                pieces.append(("-" if c < 0 else "") + mono)
            else:
                pieces.append((" - " if c < 0 else " + ") + mono)
        return "".join(pieces)


T = LaurentPoly({1: 1})
ONE = LaurentPoly({0: 1})


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.constant(x)
    raise TypeError(f"Cannot use {type(x).__name__} as a Laurent polynomial")


@dataclass(frozen=True)
class LaurentMatrix:
    """Rectangular matrix of Laurent polynomials."""

    rows: int
    cols: int
    entries: Tuple[Tuple[LaurentPoly, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(_coerce(x) for x in r) for r in self.entries)
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise ShapeMismatchError(
                f"Entry table does not match declared shape {self.rows}x{self.cols}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_int(cls, m: IntMatrix) -> "LaurentMatrix":
        return cls(m.rows, m.cols, m.entries)

    @classmethod
    def linear(cls, a: IntMatrix, b: IntMatrix) -> "LaurentMatrix":
        """t*A - B."""
        if a.shape != b.shape:
            raise ShapeMismatchError(f"Shapes {a.shape} and {b.shape} differ")
        return cls(
            a.rows,
            a.cols,
            tuple(
                tuple(LaurentPoly({1: a[i, j], 0: -b[i, j]}) for j in range(a.cols))
                for i in range(a.rows)
            ),
        )

    def __getitem__(self, index: Tuple[int, int]) -> LaurentPoly:
        i, j = index
        return self.entries[i][j]

    def evaluate(self, x: int) -> IntMatrix:
        return IntMatrix.from_rows(
            [[p.evaluate(x) for p in r] for r in self.entries], cols=self.cols
        )

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.entries) + "]"


def build_P(a: IntMatrix, b: IntMatrix) -> LaurentMatrix:
    """The block matrix [[E, t*A], [E, B]] with E the identity."""
    if a.shape != b.shape or not a.is_square:
        raise ShapeMismatchError(
            f"build_P needs square blocks of equal shape, got {a.shape} and {b.shape}"
        )
    n = a.rows
    top = [
        [ONE if i == j else LaurentPoly() for j in range(n)]
        + [LaurentPoly.monomial(a[i, j], 1) for j in range(n)]
        for i in range(n)
    ]
    bottom = [
        [ONE if i == j else LaurentPoly() for j in range(n)]
        + [LaurentPoly.constant(b[i, j]) for j in range(n)]
        for i in range(n)
    ]
    return LaurentMatrix(2 * n, 2 * n, tuple(tuple(r) for r in top + bottom))


def det_laurent(m: LaurentMatrix) -> LaurentPoly:
    """Exact determinant; rows are shifted to polynomials before expansion."""
    if m.rows != m.cols:
        raise NonSquareError(f"Determinant needs a square matrix, got {m.rows}x{m.cols}")
    if m.rows == 0:
        return ONE
    shifts = []
    rows = []
    for r in m.entries:
        lows = [p.degree_bounds()[0] for p in r if not p.is_zero()]
        low = min(lows) if lows else 0
        shifts.append(low)
        rows.append([p.shift(-low).to_sympy() for p in r])
    det = sympy.Matrix(rows).det(method="berkowitz")
    return LaurentPoly.from_sympy(det).shift(sum(shifts))


@dataclass(frozen=True)
class FiniteLaurentModule:
    """A finite abelian group with an automorphism tau (the action of t)."""

    group: AbelianGroup
    tau: GroupHom

    def __post_init__(self):
        if not self.group.is_finite:
            raise GroupError(f"Module group {self.group} is not finite")
        if self.tau.source != self.group or self.tau.target != self.group:
            raise GroupError("tau must be an endomorphism of the module group")
        if not self.tau.is_isomorphism():
            raise GroupError(f"tau = {self.tau} is not an automorphism of {self.group}")

    @classmethod
    def trivial(cls) -> "FiniteLaurentModule":
        g = AbelianGroup.trivial()
        return cls(g, GroupHom.identity(g))

    def __str__(self) -> str:
        return f"({self.group}, τ = {self.tau})"


class TauInvariants(NamedTuple):
    group: AbelianGroup
    order: int
    layer_charpolys: Tuple[Tuple[int, Tuple[int, ...]], ...]


def tau_order(tau: GroupHom) -> int:
    identity = GroupHom.identity(tau.source)
    power, n = tau, 1
    while power != identity:
        power = tau.compose(power)
        n += 1
    return n


def tau_invariants(module: FiniteLaurentModule) -> TauInvariants:
    """Conjugacy invariants of tau: group, order, char. polynomial on each G/pG."""
    x = sympy.Symbol("x")
    layers = []
    for p in module.group.primes():
        layer = module.tau.restrict_to_layer(p)
        coeffs = layer.charpoly(x).all_coeffs()
        layers.append((p, tuple(int(c) % p for c in coeffs)))
    return TauInvariants(module.group, tau_order(module.tau), tuple(layers))


def module_isomorphisms(
    m1: FiniteLaurentModule, m2: FiniteLaurentModule, bound: Optional[int] = None
) -> Iterator[GroupHom]:
    """All f with f∘tau1 = tau2∘f, identity first when it qualifies."""
    bound = config.max_automorphisms if bound is None else bound
    for g in (m1.group, m2.group):
        if g.order() > bound:
            raise TooLargeError(g.order(), bound)
    if m1.group != m2.group or tau_invariants(m1) != tau_invariants(m2):
        return
    identity = GroupHom.identity(m1.group)
    if m1.tau == m2.tau:
        yield identity
    for f in automorphisms(m1.group, bound):
        if f == identity:
            continue
        if f.compose(m1.tau) == m2.tau.compose(f):
            yield f


def module_isomorphic(
    m1: FiniteLaurentModule, m2: FiniteLaurentModule, bound: Optional[int] = None
) -> GroupHom:
    """First witness of module_isomorphisms, or NotIsomorphicError."""
    for f in module_isomorphisms(m1, m2, bound):
        logger.debug(f"Module isomorphism found: {f}")
        return f
    raise NotIsomorphicError(f"{m1} and {m2} are not isomorphic as Z[t,t^-1]-modules")


class HomBlocks(NamedTuple):
    tt: IntMatrix
    tf: IntMatrix
    ff: IntMatrix


def hom_blocks(hom: GroupHom) -> HomBlocks:
    """Torsion->torsion, free->torsion and free->free blocks of a matrix."""
    sv, sy = len(hom.source.torsion), len(hom.target.torsion)
    rv, ry = hom.source.free_rank, hom.target.free_rank
    m = hom.matrix
    return HomBlocks(
        m.submatrix(range(sy), range(sv)),
        m.submatrix(range(sy), range(sv, sv + rv)),
        m.submatrix(range(sy, sy + ry), range(sv, sv + rv)),
    )


def free_rank_condition(bundle: "SeifertBundle") -> bool:
    """(B - A) on the free parts is rationally injective: rank equals rank H1(V)."""
    a = hom_blocks(bundle.pos_hom).ff
    b = hom_blocks(bundle.neg_hom).ff
    return rank(b - a) == a.cols


def exact_torsion(bundle: "SeifertBundle") -> FiniteLaurentModule:
    """Closed-form torsion when the torsion blocks are invertible."""
    h1v, h1y = bundle.h1_v, bundle.h1_y
    if h1v.torsion != h1y.torsion:
        raise ExactPathUnavailableError("torsion groups of V and Y differ")
    t_y = h1y.torsion_subgroup()
    a, b = hom_blocks(bundle.pos_hom), hom_blocks(bundle.neg_hom)
    a_tt, b_tt = GroupHom(t_y, t_y, a.tt), GroupHom(t_y, t_y, b.tt)
    if not (a_tt.is_isomorphism() and b_tt.is_isomorphism()):
        raise ExactPathUnavailableError("torsion pushoff blocks are not invertible")
    tau = b_tt.compose(a_tt.inverse())

    if h1y.free_rank == 0:
        order = tau_order(tau)
        spanning = []
        for j in range(h1v.free_rank):
            w = tau.apply(a.tf.column(j)) - t_y.element(b.tf.column(j))
            for _ in range(order):
                spanning.append(w)
                w = tau.apply(w)
        proj = quotient(t_y, spanning)
        return FiniteLaurentModule(proj.target, tau.descend(proj, proj))

    if h1v.free_rank == h1y.free_rank:
        delta = det_laurent(LaurentMatrix.linear(a.ff, b.ff))
        if delta.is_zero() or delta.content() != 1:
            raise ExactPathUnavailableError(
                f"det(tA - B) on free parts is {delta}, content is not 1"
            )
        return FiniteLaurentModule(t_y, tau)

    raise ExactPathUnavailableError("free ranks of V and Y differ and Y is not torsion")


@dataclass(frozen=True)
class WindowPresentation:
    """H1(Y) copies at levels lo..hi with the relations that fit inside."""

    lo: int
    hi: int
    relations: IntMatrix
    group: AbelianGroup
    projection: GroupHom
    ny: int

    def index(self, level: int, i: int) -> int:
        return (level - self.lo) * self.ny + i


def window_presentation(bundle: "SeifertBundle", lo: int, hi: int) -> WindowPresentation:
    h1y = bundle.h1_y
    ny, levels = h1y.ngens, hi - lo + 1
    size = levels * ny
    columns: List[List[int]] = []
    for k in range(levels):
        for i, d in enumerate(h1y.torsion):
            col = [0] * size
            col[k * ny + i] = d
            columns.append(col)
    a, b = bundle.pos_hom.matrix, bundle.neg_hom.matrix
    for k in range(levels - 1):
        for j in range(bundle.h1_v.ngens):
            col = [0] * size
            for i in range(ny):
                col[(k + 1) * ny + i] += a[i, j]
                col[k * ny + i] -= b[i, j]
            columns.append(col)
    relations = IntMatrix.from_columns(columns, rows=size)
    group, projection = from_presentation(relations)
    return WindowPresentation(lo, hi, relations, group, projection, ny)


def _level_map(src: WindowPresentation, dst: WindowPresentation, shift: int) -> GroupHom:
    rows = [[0] * (src.hi - src.lo + 1) * src.ny for _ in range((dst.hi - dst.lo + 1) * dst.ny)]
    for level in range(src.lo, src.hi + 1):
        for i in range(src.ny):
            rows[dst.index(level + shift, i)][src.index(level, i)] = 1
    free_src = src.projection.source
    free_dst = dst.projection.source
    return GroupHom(free_src, free_dst, IntMatrix.from_rows(rows, cols=free_src.ngens))


def _torsion_part(hom: GroupHom) -> GroupHom:
    ts, tt = len(hom.source.torsion), len(hom.target.torsion)
    return GroupHom(
        hom.source.torsion_subgroup(),
        hom.target.torsion_subgroup(),
        hom.matrix.submatrix(range(tt), range(ts)),
    )


def window_torsion(bundle: "SeifertBundle", n: int) -> Optional[FiniteLaurentModule]:
    """
    Torsion of the window -n..n with tau = shift ∘ inclusion^-1.

    Returns None when the inclusion of the window -n..n-1 is not an
    isomorphism on torsion.
    """
    big = window_presentation(bundle, -n, n)
    small = window_presentation(bundle, -n, n - 1)
    inclusion = _torsion_part(
        _level_map(small, big, 0).descend(small.projection, big.projection)
    )
    shift = _torsion_part(
        _level_map(small, big, 1).descend(small.projection, big.projection)
    )
    if not inclusion.is_isomorphism():
        logger.debug(f"Window {n}: inclusion is not an isomorphism on torsion")
        return None
    tau = shift.compose(inclusion.inverse())
    if not tau.is_isomorphism():
        logger.debug(f"Window {n}: shift is not invertible on torsion")
        return None
    return FiniteLaurentModule(tau.source, tau)


def stabilized_torsion(
    bundle: "SeifertBundle",
    window_min: Optional[int] = None,
    window_max: Optional[int] = None,
    stable_windows: Optional[int] = None,
) -> FiniteLaurentModule:
    """Window path: accept once consecutive windows agree on tau invariants."""
    window_min = config.window_min if window_min is None else window_min
    window_max = config.window_max if window_max is None else window_max
    stable_windows = config.stable_windows if stable_windows is None else stable_windows

    run: List[Tuple[int, TauInvariants, FiniteLaurentModule]] = []
    for n in range(window_min, window_max + 1):
        module = window_torsion(bundle, n)
        if module is None:
            run = []
            continue
        inv = tau_invariants(module)
        if run and run[-1][1] != inv:
            run = []
        run.append((n, inv, module))
        logger.debug(f"Window {n}: {module.group}, tau order {inv.order}")
        if len(run) >= stable_windows:
            logger.debug(f"Window path accepted at N = {n}")
            return module
    raise NotStabilizedError(
        f"Torsion did not stabilize over windows {window_min}..{window_max}"
    )


def alexander_torsion(
    bundle: "SeifertBundle", method: str = "auto", **window_options
) -> FiniteLaurentModule:
    """
    Torsion of the Alexander module with its t-action.

    ``method`` is "exact", "window" or "auto" (exact when it applies).
    """
    if not free_rank_condition(bundle):
        raise PreconditionFailedError("det(B−A)=0 on the free parts")
    if method not in ("auto", "exact", "window"):
        raise ValueError(f"Unknown method {method!r}")
    if method in ("auto", "exact"):
        try:
            module = exact_torsion(bundle)
            logger.debug(f"Exact path for {bundle.name}: {module}")
            return module
        except ExactPathUnavailableError:
            if method == "exact":
                raise
            logger.debug(f"Exact path unavailable for {bundle.name}, using windows")
    module = stabilized_torsion(bundle, **window_options)
    logger.info(f"Alexander torsion of {bundle.name}: {module.group}")
    return module
