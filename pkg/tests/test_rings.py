from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from algsurgery.rings import (QQ, ZZ, CyclicElem, Matrix, MatrixError, RingError, cyclic, parse_ring, q_reduce,
                              ring_from_json)

coeffs = st.lists(st.integers(-5, 5), min_size=3, max_size=3)


@given(coeffs, coeffs, coeffs)
def test_group_ring_axioms(a, b, c):
    R = cyclic(3)
    x, y, z = CyclicElem(a), CyclicElem(b), CyclicElem(c)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert R.involute(x * y) == R.involute(y) * R.involute(x)
    assert R.involute(R.involute(x)) == x
    assert R.involute(x + y) == R.involute(x) + R.involute(y)


def test_group_elements():
    R = cyclic(4)
    g = R.g()
    assert g * g * g * g == R.one
    assert R.involute(g) == R.g(3)
    assert R.inverse(-R.g(1)) == -R.g(3)
    with pytest.raises(RingError):
        R.inverse(R.one + g)


def test_mixing_orders_is_an_error():
    with pytest.raises(RingError):
        cyclic(2).one + cyclic(3).one


def test_coercion():
    assert QQ.coerce("3/4") == Fraction(3, 4)
    assert cyclic(2).coerce([1, -2]) == CyclicElem((1, -2))
    with pytest.raises(RingError):
        cyclic(2).coerce([1, 2, 3])
    with pytest.raises(RingError):
        ZZ.coerce(Fraction(1, 2))


def test_ring_names_round_trip():
    for R in (ZZ, QQ, cyclic(5)):
        assert ring_from_json(R.to_json()) is R
    assert parse_ring("ZC3") is cyclic(3)
    with pytest.raises(RingError):
        parse_ring("F2")


def test_q_groups_of_integers():
    # Q_{+1}(Z) = Z, Q_{-1}(Z) = Z/2
    assert q_reduce(ZZ, 7, 0).rep == 7
    assert q_reduce(ZZ, 7, 1).rep == q_reduce(ZZ, 1, 1).rep
    assert q_reduce(ZZ, 4, 1).is_zero()


@given(coeffs)
def test_q_reduce_kills_exactly_the_symmetrization(a):
    R = cyclic(3)
    x = CyclicElem(a)
    for parity, eps in ((0, 1), (1, -1)):
        assert q_reduce(R, x - R.involute(x) * eps, parity).is_zero()
        c = q_reduce(R, x, parity)
        assert q_reduce(R, c.rep, parity) == c


def test_matrix_arithmetic():
    A = Matrix(ZZ, 2, 3, [[1, 2, 3], [4, 5, 6]])
    B = Matrix(ZZ, 3, 1, [[1], [0], [-1]])
    assert (A @ B).tolist() == [[-2], [-2]]
    assert A.star().shape == (3, 2)
    assert (A + A).tolist() == A.scale(2).tolist()
    with pytest.raises(MatrixError):
        A @ A


def test_star_applies_the_involution():
    R = cyclic(3)
    A = Matrix(R, 1, 2, [[R.g(1), R.one + R.g(2)]])
    assert A.star()[0, 0] == R.g(2)
    assert A.star()[1, 0] == R.one + R.g(1)


def test_block_assembly():
    I = Matrix.identity(ZZ, 2)
    M = Matrix.block(ZZ, [[I, 0], [0, Matrix(ZZ, 1, 1, [[5]])]], [2, 1], [2, 1])
    assert M.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 5]]
