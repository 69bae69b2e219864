import os
import random
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import kmatrix  # noqa: E402
from cmfield import QuadraticField  # noqa: E402
from errors import MathDomainError, ShapeError  # noqa: E402

K = QuadraticField(1)


def random_matrix(rng, n):
    return kmatrix.as_matrix([[K(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)])


def test_identity_product():
    a = kmatrix.from_rationals([[1, 2], [3, 4]], 1)
    assert kmatrix.mul(a, kmatrix.identity(2, 1)) == a
    assert kmatrix.mul(kmatrix.identity(2, 1), a) == a


def test_det_and_inverse_2x2():
    a = kmatrix.as_matrix([[K(1), K.omega], [K(0, -1), K(2)]])
    # 2 - w * (-w) = 2 + w^2 = 1
    assert kmatrix.det(a) == K.one
    assert kmatrix.mul(a, kmatrix.inverse(a)) == kmatrix.identity(2, 1)


def test_singular_inverse():
    with pytest.raises(MathDomainError):
        kmatrix.inverse(kmatrix.from_rationals([[1, 2], [2, 4]], 1))
    assert kmatrix.det(kmatrix.from_rationals([[1, 2], [2, 4]], 1)) == K.zero


def test_shape_errors():
    with pytest.raises(ShapeError):
        kmatrix.as_matrix([[K.one], [K.one, K.one]])
    with pytest.raises(ShapeError):
        kmatrix.det(kmatrix.from_rationals([[1, 2]], 1))


def test_conj_transpose_and_trace():
    a = kmatrix.as_matrix([[K(1, 1), K(2)], [K(0, 3), K(4, -1)]])
    ct = kmatrix.conj_transpose(a)
    assert ct[0][1] == K(0, -3)
    assert ct[1][1] == K(4, 1)
    assert kmatrix.trace(a) == K(5, 0)


def test_minors():
    a = kmatrix.from_rationals([[2, 1, 0], [1, 2, 1], [0, 1, 2]], 1)
    assert kmatrix.leading_minors(a) == [K(2), K(3), K(4)]
    assert len(kmatrix.principal_minors(a)) == 7


def test_blocks_round_trip():
    a = kmatrix.from_rationals([[1, 2, 3, 4], [5, 6, 7, 8], [9, 10, 11, 12], [13, 14, 15, 16]], 1)
    parts = [kmatrix.block(a, r, c, 2) for r in (0, 2) for c in (0, 2)]
    assert kmatrix.from_blocks(*parts) == a


def test_pairs_round_trip():
    a = kmatrix.as_matrix([[K(1, -1), K(0)], [K(2, 3), K(-1)]])
    assert kmatrix.from_pairs(kmatrix.to_pairs(a), 1) == a


def test_det_multiplicative():
    rng = random.Random(7)
    for _ in range(30):
        a, b = random_matrix(rng, 3), random_matrix(rng, 3)
        assert kmatrix.det(kmatrix.mul(a, b)) == kmatrix.det(a) * kmatrix.det(b)
