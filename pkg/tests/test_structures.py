import random

import pytest

from algsurgery.chains import ChainComplex, ChainMap, check_chain_map, is_chain_equivalence, reduce_complex
from algsurgery.fixtures import sphere
from algsurgery.forms import hyperbolic, form_complex
from algsurgery.rings import ZZ, Matrix, cyclic
from algsurgery.sampling import random_pair, random_quadratic, random_symmetric
from algsurgery.structures import (QUAD, SYM, T, QuadraticComplex, StructuredComplex, StructuredPair,
                                   StructureError, SymmetricComplex, check_pair, check_quadratic, check_structure,
                                   check_symmetric, is_poincare, one_plus_T, skew_suspension, symmetrize,
                                   transport)

from oracles import structure_violations


def one(x, R=ZZ):
    return Matrix(R, 1, 1, [[x]])


def middle(psi, n=2, R=ZZ):
    ranks = [0] * (n + 1)
    ranks[n // 2] = psi.nrows
    return QuadraticComplex(ChainComplex(R, 0, ranks), n, {(0, n // 2): psi})


def test_zero_structures_are_valid():
    C = ChainComplex(ZZ, 0, [1, 1], {1: one(2)})
    assert check_symmetric(SymmetricComplex(C, 1)).ok
    assert check_quadratic(QuadraticComplex(C, 1)).ok


@pytest.mark.parametrize("n", range(0, 7))
def test_spheres_are_symmetric_poincare(n):
    X = sphere(n)
    assert check_symmetric(X).ok and is_poincare(X).ok


def test_flipping_a_sign_breaks_symmetry():
    X = sphere(2)
    maps = dict(X.maps)
    maps[(0, 0)] = one(-1)
    rep = check_symmetric(SymmetricComplex(X.C, 2, maps))
    assert not rep.ok
    assert all(f.startswith("s=1") for f in rep.failures)


def test_quadratic_examples():
    for a in (-3, 0, 1, 5):
        assert check_quadratic(middle(one(a))).ok
    # psi_1 = [1] on C^1 -> C_1 with n = 3 leaves psi_1 - T psi_1 = 2
    X = QuadraticComplex(ChainComplex(ZZ, 0, [1, 1]), 3, {(1, 1): one(1)})
    assert not check_quadratic(X).ok


def test_wrong_kind_is_refused():
    with pytest.raises(StructureError):
        check_symmetric(middle(one(1)))
    with pytest.raises(StructureError):
        symmetrize(sphere(1))


def test_symmetrize_examples():
    assert symmetrize(middle(one(1), n=4)).comp(0, 2) == one(2)
    hyp = Matrix(ZZ, 2, 2, [[0, 1], [0, 0]])
    assert symmetrize(middle(hyp, n=2)).comp(0, 1).tolist() == [[0, 1], [-1, 0]]
    assert symmetrize(middle(Matrix.zeros(ZZ, 1, 1))).maps == {}


@pytest.mark.parametrize("R", [ZZ, cyclic(2)], ids=["Z", "ZC2"])
def test_symmetrization_is_symmetric(R):
    rng = random.Random(3)
    for _ in range(25):
        X = random_quadratic(R, rng, rng.randint(0, 4))
        assert check_quadratic(X).ok
        S = symmetrize(X)
        assert check_symmetric(S).ok
        assert is_poincare(S).ok == is_poincare(X).ok


@pytest.mark.parametrize("R", [ZZ, cyclic(2)], ids=["Z", "ZC2"])
def test_s1_relation_restated(R):
    # phi_0 - T phi_0 = +-(d phi_1 + phi_1 d^*) degreewise
    rng = random.Random(4)
    for _ in range(25):
        X = random_symmetric(R, rng, rng.randint(1, 4))
        C, n = X.C, X.n
        for r in C.degrees():
            p = n - r
            mismatch = X.comp(0, r) - T(X.comp(0, p), r, p)
            q = n - r
            homot = C.d(r + 1) @ X.comp(1, r + 1) + (X.comp(1, r) @ C.d(q + 1).star()).scale((-1) ** (r % 2))
            assert mismatch == homot or mismatch == -homot


def test_poincare_examples():
    assert not is_poincare(middle(one(1), n=4)).ok     # (1+T) psi_0 = [2]
    for i in (0, 1):
        assert is_poincare(form_complex(hyperbolic(1, i), 2 * (i + 2))).ok
    X = sphere(3)
    assert not is_poincare(SymmetricComplex(X.C, 3, {})).ok


@pytest.mark.parametrize("kind", [SYM, QUAD])
def test_validator_agrees_with_oracle(kind):
    rng = random.Random(5)
    for _ in range(40):
        R = ZZ if rng.random() < 0.5 else cyclic(3)
        X = random_symmetric(R, rng, 2) if kind == SYM else random_quadratic(R, rng, 3)
        assert structure_violations(X) == 0
        entries = [kv for kv in X.maps.items() if kv[1].nrows and kv[1].ncols]
        if not entries:
            continue
        (s, r), m = rng.choice(entries)
        Y = StructuredComplex(kind, X.C, X.n, {**X.maps, (s, r): m.with_entry(0, 0, m[0, 0] + R.one)})
        assert check_structure(Y).ok == (structure_violations(Y) == 0)


def test_skew_suspension_keeps_everything():
    rng = random.Random(6)
    for _ in range(15):
        X = random_quadratic(ZZ, rng, rng.randint(1, 4))
        Y = skew_suspension(X)
        assert Y.n == X.n + 4 and Y.C.lo == X.C.lo + 2
        assert check_structure(Y).ok and is_poincare(Y).ok
        Z = random_symmetric(ZZ, rng, 2)
        assert check_structure(skew_suspension(Z, 2)).ok


def test_poincare_invariant_under_reduction():
    rng = random.Random(7)
    for _ in range(20):
        X = random_symmetric(ZZ, rng, rng.randint(0, 3))
        red = reduce_complex(X.C)
        Y = transport(X, red.proj)
        assert check_symmetric(Y).ok
        assert is_poincare(Y).ok == is_poincare(X).ok


def test_one_plus_T_is_a_chain_map():
    rng = random.Random(8)
    for _ in range(15):
        X = random_quadratic(cyclic(2), rng, rng.randint(1, 4))
        assert check_chain_map(X.phi0_map()).ok
        assert X.phi0_map()[X.C.lo] == one_plus_T(X, X.C.lo)


def test_empty_pair_is_poincare():
    C = ChainComplex(ZZ, 0, [])
    X = SymmetricComplex(C, 1)
    P = StructuredPair(ChainMap(C, ChainComplex(ZZ, 0, []), {}), X, {})
    assert check_pair(P, poincare=True).ok


@pytest.mark.parametrize("kind", [SYM, QUAD])
def test_random_pairs_are_valid(kind):
    rng = random.Random(9)
    found = 0
    while found < 10:
        X = random_symmetric(ZZ, rng, 2) if kind == SYM else random_quadratic(ZZ, rng, 2)
        P = random_pair(X, rng)
        if P is None:
            continue
        found += 1
        assert check_pair(P).ok


def test_zeroed_relative_structure_fails_poincare():
    from algsurgery.surgery import trace
    from algsurgery.fixtures import double_cover_surgery

    G = trace(double_cover_surgery("orientable")).trace
    assert check_pair(G, poincare=True).ok
    X = sphere(1)
    # the disk with cells in degrees 0, 1, 2 and d e2 = e1; duality needs delta phi_0
    D = ChainComplex(ZZ, 0, [1, 1, 1], {2: one(1)})
    j = ChainMap(X.C, D, {0: one(1), 1: one(1)})
    disk = StructuredPair(j, X, {(0, 0): one(1), (0, 2): one(1)})
    assert check_pair(disk, poincare=True).ok
    assert not check_pair(StructuredPair(j, X, {}), poincare=True).ok
    assert is_chain_equivalence(ChainMap(D, D, {0: one(1)})).ok
