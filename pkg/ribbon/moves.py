"""
Algebraic model of one (1,2)-pass-move.

A move triple is a middle Seifert datum and two children, each obtained by
attaching one 1-handle to V (a new free generator of H1(V) with chosen
pushoff images) and one 3-handle to Y (H1(Y) unchanged).
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from ribbon.config import config
from ribbon.exceptions import (
    GroupError,
    InvalidDecorationError,
    NotEquivalentError,
    NotIsomorphicError,
    PreconditionFailedError,
    RibbonError,
)
from ribbon.groups import AbelianGroup, GroupHom, automorphisms, from_presentation, quotient
from ribbon.laurent import (
    FiniteLaurentModule,
    WindowPresentation,
    alexander_torsion,
    det_laurent,
    build_P,
    hom_blocks,
    module_isomorphic,
    window_presentation,
    window_torsion,
)
from ribbon.linalg import (
    IntMatrix,
    block_diagonal,
    determinant,
    hstack,
    random_unimodular,
    rank,
    vstack,
)
from ribbon.logging_config import get_logger
from ribbon.pairing import fl_equivalent
from ribbon.seifert import SeifertBundle, farber_levine, validate

logger = get_logger(__name__)

TORSION_CHOICES: Tuple[Tuple[int, ...], ...] = (
    (2,), (3,), (4,), (5,), (6,), (7,), (8,), (9,), (2, 2), (2, 4), (3, 3),
)


@dataclass(frozen=True)
class MoveDecoration:
    """Images of the new 1-handle generator under A and B in each child."""

    pos_gt: Tuple[int, ...]
    neg_gt: Tuple[int, ...]
    pos_lt: Tuple[int, ...]
    neg_lt: Tuple[int, ...]

    def __post_init__(self):
        for name in ("pos_gt", "neg_gt", "pos_lt", "neg_lt"):
            object.__setattr__(self, name, tuple(int(x) for x in getattr(self, name)))

    @classmethod
    def zero(cls, length: int) -> "MoveDecoration":
        z = (0,) * length
        return cls(z, z, z, z)


@dataclass(frozen=True)
class MoveTriple:
    middle: SeifertBundle
    child_gt: SeifertBundle
    child_lt: SeifertBundle
    decoration: MoveDecoration

    @property
    def name(self) -> str:
        return self.middle.name


def _check_decoration(middle: SeifertBundle, dec: MoveDecoration) -> None:
    h1y = middle.h1_y
    for label in ("pos_gt", "neg_gt", "pos_lt", "neg_lt"):
        if len(getattr(dec, label)) != h1y.ngens:
            raise InvalidDecorationError(
                f"{label} has {len(getattr(dec, label))} entries, H1(Y) has {h1y.ngens} generators"
            )
    s = len(h1y.torsion)
    for gt, lt, label in ((dec.pos_gt, dec.pos_lt, "A"), (dec.neg_gt, dec.neg_lt, "B")):
        if h1y.reduce(gt)[:s] != h1y.reduce(lt)[:s]:
            raise InvalidDecorationError(
                f"torsion components of the new {label}-column differ between children"
            )


def _child(middle: SeifertBundle, pos: Sequence[int], neg: Sequence[int], tag: str) -> SeifertBundle:
    h1v = AbelianGroup(middle.h1_v.free_rank + 1, middle.h1_v.torsion)
    return SeifertBundle(
        name=f"{middle.name}{tag}",
        h1_v=h1v,
        h1_y=middle.h1_y,
        pushoff_pos=hstack(middle.pushoff_pos, IntMatrix.from_columns([pos], rows=len(pos))),
        pushoff_neg=hstack(middle.pushoff_neg, IntMatrix.from_columns([neg], rows=len(neg))),
        linking_matrix=middle.linking_matrix,
        iota=middle.iota,
        description=f"pass-move child '{tag}' of {middle.name}",
    )


def apply_pass_move(middle: SeifertBundle, dec: MoveDecoration) -> MoveTriple:
    """Attach the decorated 1-handle to build both children."""
    report = validate(middle)
    if not report.ok:
        raise PreconditionFailedError("; ".join(report.violations))
    _check_decoration(middle, dec)
    child_gt = _child(middle, dec.pos_gt, dec.neg_gt, ">")
    child_lt = _child(middle, dec.pos_lt, dec.neg_lt, "<")
    for child in (child_gt, child_lt):
        child_report = validate(child)
        if not child_report.ok:
            raise InvalidDecorationError(
                f"child {child.name} is invalid: " + "; ".join(child_report.violations)
            )
    return MoveTriple(middle, child_gt, child_lt, dec)


@dataclass
class TheoremReport:
    """Witnesses relating the two children of a move (None when not found)."""

    name: str
    module_witness: Optional[GroupHom] = None
    pairing_witness: Optional[GroupHom] = None
    module_lt: Optional[FiniteLaurentModule] = None
    module_gt: Optional[FiniteLaurentModule] = None

    @property
    def modules_ok(self) -> bool:
        return self.module_witness is not None

    @property
    def pairings_ok(self) -> bool:
        return self.pairing_witness is not None

    @property
    def is_counterexample(self) -> bool:
        return not (self.modules_ok and self.pairings_ok)


def verify_theorem_2_1(triple: MoveTriple, bound: Optional[int] = None) -> TheoremReport:
    """
    Look for a module isomorphism and a pairing equivalence between the
    children. A failed search is recorded in the report, not raised.
    """
    fl_lt = farber_levine(triple.child_lt)
    fl_gt = farber_levine(triple.child_gt)
    report = TheoremReport(triple.name, module_lt=fl_lt.module, module_gt=fl_gt.module)
    try:
        report.module_witness = module_isomorphic(fl_lt.module, fl_gt.module, bound)
    except NotIsomorphicError:
        logger.warning(f"{triple.name}: children have non-isomorphic torsion modules")
    try:
        report.pairing_witness = fl_equivalent(fl_lt, fl_gt, bound)
    except NotEquivalentError:
        logger.warning(f"{triple.name}: children have inequivalent pairings")
    return report


@dataclass
class ClaimReport:
    """Exactness checks on the window -N..N presentation of one bundle."""

    name: str
    window: int
    surjective: bool
    image_in_kernel: bool
    kernel_in_image: bool
    rationally_injective: bool
    agrees_with_torsion: Optional[bool] = None
    det_p: Optional[str] = None

    @property
    def passed(self) -> bool:
        return (
            self.surjective
            and self.image_in_kernel
            and self.kernel_in_image
            and self.rationally_injective
            and self.agrees_with_torsion is not False
        )


def window_exactness(bundle: SeifertBundle, window: WindowPresentation) -> Tuple[bool, bool]:
    """
    Exactness of Tor(V x {±1}) -> Tor(V x [-1,1]) + Tor(Y) -> window group
    at the middle term, over the levels of ``window``.

    V copies sit at levels lo..hi-1, Y copies at lo..hi. f̃ sends x at level
    k on the + side to (x, -A(x) at k+1) and on the - side to (x, -B(x) at k);
    g̃ sends V at level k through B and Y copies to themselves. Returns
    (g̃ ∘ f̃ = 0, ker g̃ ⊆ im f̃).
    """
    levels = window.hi - window.lo + 1
    tv, ty = len(bundle.h1_v.torsion), len(bundle.h1_y.torsion)
    ny = window.ny
    a_tt, b_tt = hom_blocks(bundle.pos_hom).tt, hom_blocks(bundle.neg_hom).tt
    b = bundle.neg_hom.matrix
    v_offset = (levels - 1) * tv
    size = v_offset + levels * ty

    def v_index(k: int, j: int) -> int:
        return k * tv + j

    def y_index(k: int, i: int) -> int:
        return v_offset + k * ty + i

    moduli = list(bundle.h1_v.torsion) * (levels - 1) + list(bundle.h1_y.torsion) * levels
    middle, middle_proj = from_presentation(IntMatrix.diagonal(moduli))

    f_columns = []
    for k in range(levels - 1):
        for j in range(tv):
            for target_level, block in ((k + 1, a_tt), (k, b_tt)):
                col = [0] * size
                col[v_index(k, j)] = 1
                for i in range(ty):
                    col[y_index(target_level, i)] -= block[i, j]
                f_columns.append(col)

    g_columns = []
    for k in range(levels - 1):
        for j in range(tv):
            col = [0] * (levels * ny)
            for i in range(ny):
                col[k * ny + i] = b[i, j]
            g_columns.append(col)
    for k in range(levels):
        for i in range(ty):
            col = [0] * (levels * ny)
            col[k * ny + i] = 1
            g_columns.append(col)
    g_free = GroupHom(
        AbelianGroup.free(size),
        window.group,
        window.projection.matrix @ IntMatrix.from_columns(g_columns, rows=levels * ny),
    )

    composite_zero = all(g_free.apply(col).is_zero() for col in f_columns)
    identity = GroupHom.identity(window.group)
    try:
        g_tor = g_free.descend(middle_proj, identity)
        cokernel_f = quotient(middle, [middle_proj.apply(col) for col in f_columns])
        kernel_in_image = g_tor.descend(cokernel_f, identity).is_injective()
    except GroupError as e:
        logger.debug(f"{bundle.name}: g̃ does not factor through the cokernel of f̃: {e}")
        kernel_in_image = False
    return composite_zero, kernel_in_image


def check_claim_exactness(bundle: SeifertBundle, n: int = 4) -> ClaimReport:
    """
    (a) torsion H1(Y) copies span the window torsion, (b) the window chain
    maps compose to zero and are exact on torsion, (c) [[E, A], [E, B]] on
    the free parts is rationally injective, (d) the window torsion matches
    alexander_torsion.
    """
    h1y = bundle.h1_y
    window = window_presentation(bundle, -n, n)
    proj = window.projection
    group = window.group
    s = len(group.torsion)
    torsion_group = group.torsion_subgroup()

    images = []
    for level in range(-n, n + 1):
        for i in range(len(h1y.torsion)):
            coords = proj.apply(_unit(proj.source.ngens, window.index(level, i))).coords
            images.append(coords)
    surjective = all(not any(c[s:]) for c in images) and GroupHom(
        AbelianGroup.free(len(images)),
        torsion_group,
        IntMatrix.from_columns([c[:s] for c in images], rows=s),
    ).is_surjective()

    image_in_kernel, kernel_in_image = window_exactness(bundle, window)

    a_ff, b_ff = hom_blocks(bundle.pos_hom).ff, hom_blocks(bundle.neg_hom).ff
    e = IntMatrix.identity(a_ff.rows)
    p_at_one = vstack(hstack(e, a_ff), hstack(e, b_ff))
    rationally_injective = rank(p_at_one) == p_at_one.cols
    det_p = str(det_laurent(build_P(a_ff, b_ff))) if a_ff.is_square else None

    agrees: Optional[bool]
    try:
        expected = alexander_torsion(bundle)
    except PreconditionFailedError:
        agrees = None
    else:
        observed = window_torsion(bundle, n)
        try:
            agrees = observed is not None and bool(module_isomorphic(observed, expected))
        except NotIsomorphicError:
            agrees = False

    report = ClaimReport(
        bundle.name,
        n,
        surjective=surjective,
        image_in_kernel=image_in_kernel,
        kernel_in_image=kernel_in_image,
        rationally_injective=rationally_injective,
        agrees_with_torsion=agrees,
        det_p=det_p,
    )
    if not report.passed:
        logger.warning(f"Exactness check failed for {bundle.name}: {report}")
    return report


def _unit(n: int, i: int) -> Tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


@dataclass(frozen=True)
class CorpusBounds:
    """Size limits for randomly generated move triples."""

    max_free_rank: int = 3
    max_entry: int = 2
    torsion_choices: Tuple[Tuple[int, ...], ...] = TORSION_CHOICES

    def __post_init__(self):
        if self.max_free_rank < 1:
            raise ValueError(f"max_free_rank must be at least 1, got {self.max_free_rank}")
        # B - A must be nonsingular, which needs a nonzero entry to draw from
        if self.max_entry < 1:
            raise ValueError(f"max_entry must be at least 1, got {self.max_entry}")
        if not self.torsion_choices:
            raise ValueError("torsion_choices must not be empty")


def _linking_block(rng: random.Random, d: int) -> IntMatrix:
    options = [IntMatrix.from_rows([[d]]), IntMatrix.from_rows([[-d]])]
    for a in (-2, -1, 1, 2):
        for target in (d + 1, 1 - d):
            if target % a == 0:
                options.append(IntMatrix.from_rows([[a, 1], [1, target // a]]))
    return rng.choice(options)


def _random_linking_matrix(rng: random.Random, torsion: Sequence[int]) -> IntMatrix:
    lam = block_diagonal(*(_linking_block(rng, d) for d in torsion))
    w = random_unimodular(rng, lam.rows, steps=3)
    return w.transpose() @ lam @ w


def random_move_corpus(
    seed: int, count: int, bounds: Optional[CorpusBounds] = None
) -> List[MoveTriple]:
    """Deterministic list of valid move triples for a seed."""
    bounds = bounds or CorpusBounds()
    rng = random.Random(seed)
    triples = []
    for index in range(count):
        triples.append(_random_triple(rng, f"corpus-{seed}-{index}", bounds))
    logger.debug(f"Generated {count} move triples for seed {seed}")
    return triples


def _random_triple(rng: random.Random, name: str, bounds: CorpusBounds) -> MoveTriple:
    torsion = rng.choice(bounds.torsion_choices)
    t = AbelianGroup(0, torsion)
    auts = list(automorphisms(t))
    a_tt, b_tt = rng.choice(auts).matrix, rng.choice(auts).matrix
    s = len(torsion)
    r = rng.randint(0, bounds.max_free_rank - 1)
    k = bounds.max_entry

    def rand_column(length: int) -> List[int]:
        return [rng.randint(-k, k) for _ in range(length)]

    def rand_torsion(cols: int) -> IntMatrix:
        return IntMatrix.from_rows(
            [[rng.randrange(d) for _ in range(cols)] for d in torsion], cols=cols
        )

    # A unimodular keeps det(tA - B) monic; B - A = N is only required to be nonsingular
    a_full = random_unimodular(rng, r + 1)
    n_full = IntMatrix.zeros(r + 1, r + 1)
    while determinant(n_full) == 0:
        n_full = IntMatrix.from_columns([rand_column(r + 1) for _ in range(r + 1)], rows=r + 1)
    b_full = a_full + n_full
    tf_a, tf_b = rand_torsion(r + 1), rand_torsion(r + 1)

    def middle_matrix(tt: IntMatrix, tf: IntMatrix, full: IntMatrix) -> IntMatrix:
        first = list(range(r))
        return vstack(
            hstack(tt, tf.submatrix(range(s), first)),
            hstack(IntMatrix.zeros(r + 1, s), full.submatrix(range(r + 1), first)),
        )

    middle = SeifertBundle(
        name=name,
        h1_v=AbelianGroup(r, torsion),
        h1_y=AbelianGroup(r + 1, torsion),
        pushoff_pos=middle_matrix(a_tt, tf_a, a_full),
        pushoff_neg=middle_matrix(b_tt, tf_b, b_full),
        linking_matrix=_random_linking_matrix(rng, torsion),
    )

    # the second child replaces the last column of A by another unimodular
    # completion and draws its own column of N
    n_mid = n_full.submatrix(range(r + 1), range(r))
    gt = (a_full.column(r), b_full.column(r))
    lt = gt
    while lt == gt:
        sign = rng.choice((-1, 1))
        alt_a = [sign * x for x in a_full.column(r)]
        for j in range(r):
            c = rng.randint(-1, 1)
            alt_a = [x + c * y for x, y in zip(alt_a, a_full.column(j))]
        alt_n = rand_column(r + 1)
        while determinant(hstack(n_mid, IntMatrix.from_columns([alt_n], rows=r + 1))) == 0:
            alt_n = rand_column(r + 1)
        lt = (tuple(alt_a), tuple(x + y for x, y in zip(alt_a, alt_n)))

    new_a_tor, new_b_tor = tf_a.column(r), tf_b.column(r)
    dec = MoveDecoration(
        pos_gt=new_a_tor + gt[0],
        neg_gt=new_b_tor + gt[1],
        pos_lt=new_a_tor + lt[0],
        neg_lt=new_b_tor + lt[1],
    )
    return apply_pass_move(middle, dec)


@dataclass
class TripleVerification:
    """Theorem and exactness results for one triple, or the error that stopped it."""

    triple: MoveTriple
    theorem: Optional[TheoremReport] = None
    claims: List[ClaimReport] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return (
            self.error is None
            and self.theorem is not None
            and not self.theorem.is_counterexample
            and all(c.passed for c in self.claims)
        )


def verify_triple(
    triple: MoveTriple, window: int = 4, bound: Optional[int] = None
) -> TripleVerification:
    result = TripleVerification(triple)
    try:
        result.theorem = verify_theorem_2_1(triple, bound)
        result.claims = [
            check_claim_exactness(b, window)
            for b in (triple.middle, triple.child_gt, triple.child_lt)
        ]
    except RibbonError as e:
        logger.warning(f"{triple.name}: verification stopped: {e}")
        result.error = f"{type(e).__name__}: {e}"
    return result


def verify_corpus(
    triples: Sequence[MoveTriple],
    workers: Optional[int] = None,
    window: int = 4,
    bound: Optional[int] = None,
) -> List[TripleVerification]:
    """Verify every triple; results come back in input order."""
    workers = workers or config.corpus_workers
    if workers <= 1:
        results = [verify_triple(t, window, bound) for t in triples]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: verify_triple(t, window, bound), triples))
    passed = sum(1 for r in results if r.passed)
    logger.info(f"Corpus verification: {passed}/{len(results)} passed")
    return results
