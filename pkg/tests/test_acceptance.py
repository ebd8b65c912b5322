"""
Large randomized suites: the move corpus, path cross-checks, exact linear
algebra, pairing laws and the eta invariant over a circle.

Run with ``pytest -m slow``; these take minutes.
"""

import itertools

import pytest
import sympy

from ribbon.eta import (
    BoundingData,
    Character,
    EquivariantHermitianForm,
    bounding_through_circle,
    eta_table,
    obstruction_vanishes,
)
from ribbon.groups import AbelianGroup, GroupHom, automorphisms
from ribbon.laurent import (
    FiniteLaurentModule,
    LaurentPoly,
    alexander_torsion,
    build_P,
    det_laurent,
    module_isomorphic,
)
from ribbon.linalg import (
    IntMatrix,
    block_diagonal,
    determinant,
    random_unimodular,
    smith_normal_form,
)
from ribbon.moves import TORSION_CHOICES, check_claim_exactness, random_move_corpus, verify_corpus
from ribbon.pairing import pairings_equivalent
from ribbon.seifert import SeifertBundle, linking_pairing

pytestmark = pytest.mark.slow


def random_matrix(rng, rows, cols, k):
    return IntMatrix.from_rows(
        [[rng.randint(-k, k) for _ in range(cols)] for _ in range(rows)], cols=cols
    )


def random_torsion_bundle(rng, index):
    """T_V = T_Y = T with random invertible torsion blocks and extra free V generators."""
    torsion = rng.choice(TORSION_CHOICES)
    t = AbelianGroup(0, torsion)
    auts = list(automorphisms(t))
    a_tt, b_tt = rng.choice(auts).matrix.to_list(), rng.choice(auts).matrix.to_list()
    r = rng.choice((0, 0, 1, 2))
    pos = [row + [rng.randrange(d) for _ in range(r)] for row, d in zip(a_tt, torsion)]
    neg = [row + [rng.randrange(d) for _ in range(r)] for row, d in zip(b_tt, torsion)]
    return SeifertBundle(
        name=f"cross-{index}",
        h1_v=AbelianGroup(r, torsion),
        h1_y=t,
        pushoff_pos=IntMatrix.from_rows(pos, cols=len(torsion) + r),
        pushoff_neg=IntMatrix.from_rows(neg, cols=len(torsion) + r),
        linking_matrix=block_diagonal(*(IntMatrix.from_rows([[d]]) for d in torsion)),
    )


def random_linking_matrix(rng):
    while True:
        m = random_matrix(rng, 2, 2, 8)
        m = IntMatrix.from_rows([[m[0, 0], m[0, 1]], [m[0, 1], m[1, 1]]])
        if 2 <= abs(determinant(m)) <= 64:
            return m


class TestMoveCorpus:
    """Both children of every corpus triple carry the same invariants."""

    @pytest.fixture(scope="class")
    def results(self):
        return verify_corpus(random_move_corpus(seed=0, count=200), workers=4)

    def test_corpus_shape(self, results):
        assert len(results) == 200
        for r in results:
            middle = r.triple.middle
            assert middle.h1_y.torsion_subgroup().order() <= 9
            assert middle.h1_y.free_rank <= 3

    def test_module_witnesses(self, results):
        failures = [r.triple.name for r in results if r.error or not r.theorem.modules_ok]
        assert failures == []

    def test_pairing_witnesses(self, results):
        failures = [r.triple.name for r in results if r.error or not r.theorem.pairings_ok]
        assert failures == []

    def test_exactness_on_every_bundle(self, results):
        failures = [c.name for r in results for c in r.claims if not c.passed]
        assert failures == []
        assert all(len(r.claims) == 3 for r in results)

    def test_curated_bundles(self, corpus_dir, load_corpus):
        for path in sorted(corpus_dir.glob("*.json")):
            obj = load_corpus(path.stem)
            if isinstance(obj, SeifertBundle):
                assert check_claim_exactness(obj).passed, path.name


class TestPathAgreement:
    """Exact and window computations of the torsion module agree."""

    def test_cross_oracle(self, rng):
        compared = 0
        for index in range(120):
            bundle = random_torsion_bundle(rng, index)
            exact = alexander_torsion(bundle, method="exact")
            window = alexander_torsion(bundle, method="window")
            assert module_isomorphic(exact, window), bundle.name
            compared += 1
        assert compared >= 100

    def test_module_isomorphism_is_an_equivalence(self, rng):
        for _ in range(40):
            t = AbelianGroup(0, rng.choice(TORSION_CHOICES))
            auts = list(automorphisms(t))
            m1 = FiniteLaurentModule(t, rng.choice(auts))
            f, h = rng.choice(auts), rng.choice(auts)
            m2 = FiniteLaurentModule(t, f.compose(m1.tau).compose(f.inverse()))
            m3 = FiniteLaurentModule(t, h.compose(m2.tau).compose(h.inverse()))

            assert module_isomorphic(m1, m1)
            g12 = module_isomorphic(m1, m2)
            g21 = g12.inverse()
            assert g21.compose(m2.tau) == m1.tau.compose(g21)
            g23 = module_isomorphic(m2, m3)
            g13 = g23.compose(g12)
            assert g13.compose(m1.tau) == m3.tau.compose(g13)


class TestExactLinearAlgebra:
    """Smith forms and Laurent determinants on random inputs."""

    def test_smith_normal_form(self, rng):
        for _ in range(1000):
            a = random_matrix(rng, rng.randint(1, 8), rng.randint(1, 8), 9)
            snf = smith_normal_form(a)
            assert snf.U @ a @ snf.V == snf.S
            assert abs(determinant(snf.U)) == 1
            assert abs(determinant(snf.V)) == 1
            diag = snf.diagonal
            for i, j in itertools.product(range(a.rows), range(a.cols)):
                if i != j:
                    assert snf.S[i, j] == 0
            assert all(d >= 0 for d in diag)
            for x, y in zip(diag, diag[1:]):
                assert (y == 0) or (x != 0 and y % x == 0)

            u = random_unimodular(rng, a.rows)
            v = random_unimodular(rng, a.cols)
            assert smith_normal_form(u @ a @ v).S == snf.S

    def test_det_laurent(self, rng):
        t = sympy.Symbol("t")
        for _ in range(500):
            n = rng.randint(1, 3)
            a = random_matrix(rng, n, n, 3)
            b = random_matrix(rng, n, n, 3)
            expected = LaurentPoly.from_sympy(sympy.expand((b.to_sympy() - t * a.to_sympy()).det()))
            assert det_laurent(build_P(a, b)) in (expected, -expected)


class TestPairingLaws:
    """Linking forms checked element by element on groups of order at most 64."""

    def test_brute_force(self, rng):
        for _ in range(25):
            lam = random_linking_matrix(rng)
            p = linking_pairing(lam)
            group = p.group
            assert group.order() == abs(determinant(lam))
            elements = list(group.elements())

            for x in elements:
                for y in elements:
                    assert p.value(x, y) == p.value(y, x)
                if not x.is_zero():
                    assert any(not p.value(x, y).is_zero() for y in elements)

            for _ in range(200):
                x, y, z = (rng.choice(elements) for _ in range(3))
                assert p.value(x + y, z) == p.value(x, z) + p.value(y, z)

            w = random_unimodular(rng, 2)
            q = linking_pairing(w.transpose() @ lam @ w)
            f = pairings_equivalent(p, q, bound=5000)
            assert isinstance(f, GroupHom) and f.is_isomorphism()


class TestEtaThroughCircle:
    """Characters factoring through Z bound over the circle and give η̃ = 0."""

    def test_all_moduli(self, rng):
        for rank in (1, 2):
            h1_v = AbelianGroup.free(rank)
            bundle = SeifertBundle(
                name=f"free-{rank}",
                h1_v=h1_v,
                h1_y=AbelianGroup.free(rank),
                pushoff_pos=IntMatrix.zeros(rank, rank),
                pushoff_neg=IntMatrix.identity(rank),
                linking_matrix=IntMatrix.zeros(0, 0),
            )
            for d in range(2, 7):
                for _ in range(4):
                    nu = Character(h1_v, d, tuple(rng.randrange(d) for _ in range(rank)))
                    m = random_matrix(rng, 2, 2, 3)
                    sym = IntMatrix.from_rows([[m[0, 0], m[0, 1]], [m[0, 1], m[1, 1]]])
                    form = EquivariantHermitianForm.from_integer_matrix(sym, d)
                    bounding = bounding_through_circle(nu, form)
                    assert obstruction_vanishes(eta_table(bundle, nu, bounding))

    def test_trivial_knot(self, trivial_bundle):
        for d in range(2, 7):
            nu = Character(trivial_bundle.h1_v, d, ())
            bounding = bounding_through_circle(nu, EquivariantHermitianForm(0, d, ()))
            assert obstruction_vanishes(eta_table(trivial_bundle, nu, bounding))

    def test_z3_obstruction(self, z3_bundle, load_corpus):
        bounding = load_corpus("z3-bounding")
        assert isinstance(bounding, BoundingData)
        table = eta_table(z3_bundle, Character(z3_bundle.h1_v, 3, (1,)), bounding)
        assert not obstruction_vanishes(table)
