import random

import pytest

from algsurgery.chains import ChainComplex, ChainMap, homology, is_chain_equivalence, reduce_complex, sphere_complex
from algsurgery.fixtures import double_cover_surgery, hyperbolic_complex, quadratic_sphere, sphere
from algsurgery.forms import form_complex, hyperbolic, instant_obstruction, witt_class_Z
from algsurgery.rings import ZZ, Matrix, cyclic
from algsurgery.sampling import random_composite_cobordism, random_pair, random_quadratic, random_symmetric, random_trace
from algsurgery.structures import (QUAD, SYM, QuadraticComplex, StructuredPair, SymmetricComplex, check_pair,
                                   check_structure, direct_sum_structure, is_poincare)
from algsurgery.surgery import (SurgeryError, cobordism_to_data, glue, highly_connected_data, surgery_effect,
                                surgery_effect_quad, surgery_effect_sym, trace, trace_quad, trace_sym)


def H(C):
    return {h.degree: str(h) for h in homology(C) if not h.is_zero()}


def empty_data(X):
    D = ChainComplex(X.ring, 0, [])
    return StructuredPair(ChainMap(X.C, D, {}), X, {})


def reduced_ranks(C):
    red = reduce_complex(C).complex
    return {r: red.rank(r) for r in red.degrees() if red.rank(r)}


@pytest.mark.parametrize("kind", [SYM, QUAD])
def test_empty_data_is_the_identity(kind):
    rng = random.Random(1)
    for _ in range(15):
        R = ZZ if rng.random() < 0.5 else cyclic(2)
        X = random_symmetric(R, rng, rng.randint(0, 3)) if kind == SYM else random_quadratic(R, rng, rng.randint(1, 3))
        E = surgery_effect(empty_data(X))
        assert E == X
        out = trace(empty_data(X))
        assert out.trace.D == X.C
        assert all(out.f[r] == out.f_prime[r] == Matrix.identity(R, X.C.rank(r)) for r in X.C.degrees())


def test_symmetric_double_cover():
    X = sphere(1)
    P = StructuredPair(ChainMap(X.C, sphere_complex(ZZ, 1), {0: Matrix.zeros(ZZ, 0, 1), 1: Matrix.zeros(ZZ, 1, 1)}),
                       X, {})
    out = trace_sym(P)
    assert H(out.effect.C) == {0: "Z^2", 1: "Z^2"}
    # pair of pants
    assert H(out.trace.D) == {0: "Z", 1: "Z^2"}
    assert check_pair(out.trace, poincare=True).ok


def test_quadratic_double_cover_trace_is_a_pair_of_pants():
    out = trace_quad(double_cover_surgery("orientable"))
    assert H(out.trace.D) == {0: "Z", 1: "Z^2"}


def test_surgery_on_nothing_in_dimension_zero():
    C = ChainComplex(ZZ, 0, [])
    X = SymmetricComplex(C, 0)
    D = ChainComplex(ZZ, 1, [1])
    P = StructuredPair(ChainMap(C, D, {}), X, {})
    E = surgery_effect_sym(P)
    assert [E.C.rank(r) for r in E.C.degrees() if E.C.rank(r)] == [2]
    assert check_structure(E).ok and is_poincare(E).ok


@pytest.mark.parametrize("i", [1, 2])
def test_rank_one_data_on_nothing_gives_a_hyperbolic_form(i):
    n = 2 * i
    X = QuadraticComplex(ChainComplex(ZZ, 0, [0] * (n + 1)), n)
    D = ChainComplex(ZZ, i + 1, [1])
    E = surgery_effect_quad(StructuredPair(ChainMap(X.C, D, {}), X, {}))
    assert {r: E.C.rank(r) for r in E.C.degrees() if E.C.rank(r)} == {i: 2}
    q = instant_obstruction(E)
    eps = -1 if i % 2 else 1
    assert q.lam.tolist() in ([[0, 1], [eps, 0]], [[0, eps], [1, 0]])
    assert all(c.is_zero() for c in q.mu)
    assert witt_class_Z(q).value == 0


@pytest.mark.parametrize("i", [1, 2])
def test_killing_a_lagrangian(i):
    X = hyperbolic_complex(1, 2 * i)
    D = sphere_complex(ZZ, i)
    j = ChainMap(X.C, D, {i: Matrix(ZZ, 1, 2, [[1, 0]])})
    P = StructuredPair(j, X, {})
    assert check_pair(P).ok
    out = trace_quad(P)
    assert reduce_complex(out.effect.C).complex.is_zero()
    assert check_pair(out.trace, poincare=True).ok


def test_invalid_data_is_rejected():
    X = hyperbolic_complex(1, 2)
    D = sphere_complex(ZZ, 1)
    # the generator e + f has mu = 1: not a valid surgery on Z
    j = ChainMap(X.C, D, {1: Matrix(ZZ, 1, 2, [[1, 1]])})
    P = StructuredPair(j, X, {})
    assert not check_pair(P).ok
    with pytest.raises(SurgeryError):
        surgery_effect(P)
    with pytest.raises(SurgeryError):
        trace_sym(P)


@pytest.mark.parametrize("R", [ZZ, cyclic(2)], ids=["Z", "ZC2"])
@pytest.mark.parametrize("kind", [SYM, QUAD])
def test_surgery_closure(R, kind):
    rng = random.Random(2)
    done = 0
    while done < 12:
        X = random_symmetric(R, rng, rng.randint(0, 3)) if kind == SYM else random_quadratic(R, rng, rng.randint(1, 3))
        P = random_pair(X, rng)
        if P is None:
            continue
        done += 1
        out = trace(P)
        assert check_structure(out.effect).ok and is_poincare(out.effect).ok
        assert check_pair(out.trace, poincare=True).ok


def test_trivial_trace_round_trip():
    X = sphere(2)
    rt = cobordism_to_data(trace(empty_data(X)).trace)
    assert rt.verdict.ok
    assert reduced_ranks(rt.outcome.effect.C) == reduced_ranks(X.C)


def test_pair_of_pants_round_trip():
    G = trace(double_cover_surgery("nonorientable")).trace
    rt = cobordism_to_data(G)
    assert rt.verdict.ok
    assert H(rt.outcome.effect.C) == H(G.right.C) == {0: "Z", 1: "Z"}
    assert check_pair(rt.data).ok


@pytest.mark.parametrize("R", [ZZ, cyclic(2)], ids=["Z", "ZC2"])
@pytest.mark.parametrize("kind", [SYM, QUAD])
def test_round_trip_on_random_traces(R, kind):
    rng = random.Random(3)
    done = 0
    while done < 6:
        X = random_symmetric(R, rng, rng.randint(0, 3)) if kind == SYM else random_quadratic(R, rng, rng.randint(1, 3))
        G = random_trace(X, rng)
        if G is None:
            continue
        done += 1
        rt = cobordism_to_data(G)
        assert rt.verdict.ok
        assert check_pair(rt.data).ok


def test_round_trip_rejects_non_poincare_input():
    X = sphere(1)
    G = trace(empty_data(X)).trace
    from algsurgery.surgery import make_cobordism

    broken = make_cobordism(G.f, G.f_prime, {}, X, SymmetricComplex(X.C, 1, {}))
    with pytest.raises(SurgeryError):
        cobordism_to_data(broken)


@pytest.mark.parametrize("kind", [SYM, QUAD])
def test_glued_cobordisms_are_poincare(kind):
    rng = random.Random(4)
    for t in range(4):
        R = ZZ if t % 2 else cyclic(2)
        G = random_composite_cobordism(R, rng, rng.randint(1, 3), kind)
        assert check_pair(G, poincare=True).ok
        assert cobordism_to_data(G).verdict.ok


def test_glue_needs_matching_ends():
    A = trace(empty_data(sphere(1))).trace
    B = trace(empty_data(sphere(2))).trace
    with pytest.raises(SurgeryError):
        glue(A, B)


def test_highly_connected_examples():
    # already highly connected: nothing above the middle
    X = hyperbolic_complex(2, 4)
    P = highly_connected_data(X)
    assert P.D.total_rank() == 0
    assert reduced_ranks(surgery_effect(P).C) == {2: 4}
    # sphere plus hyperbolic: ranks (1, 2, 1)
    Y = direct_sum_structure(quadratic_sphere(2), hyperbolic_complex(1, 2))
    assert [Y.C.rank(r) for r in range(3)] == [1, 2, 1]
    E = surgery_effect(highly_connected_data(Y))
    assert set(reduced_ranks(E.C)) <= {1}
    assert witt_class_Z(instant_obstruction(E)) == witt_class_Z(instant_obstruction(Y))
    Z = QuadraticComplex(ChainComplex(ZZ, 0, [0, 0, 0]), 2)
    assert surgery_effect(highly_connected_data(Z)).C.total_rank() == 0


def test_highly_connected_data_needs_quadratic_input():
    with pytest.raises(SurgeryError):
        highly_connected_data(sphere(2))


def test_effect_keeps_the_witt_class_of_e8():
    from algsurgery.fixtures import e8_form

    rng = random.Random(5)
    X = form_complex(e8_form(), 4)
    done = 0
    while done < 3:
        P = random_pair(random_quadratic(ZZ, rng, 4, seed=X), rng)
        if P is None:
            continue
        done += 1
        assert witt_class_Z(instant_obstruction(surgery_effect(P))).value == 1
    assert witt_class_Z(instant_obstruction(form_complex(hyperbolic(3, 0), 4))).value == 0
