import os
import random
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import kmatrix  # noqa: E402
from cmfield import QuadraticField  # noqa: E402
from errors import MathDomainError, ParameterError, ShapeError  # noqa: E402
from weights import (  # noqa: E402
    HighestWeight,
    TensorCoefficient,
    check_word,
    dimension,
    highest_weight_index,
    rho_matrix,
    symmetrize_embed,
    transform_frame,
    weight_basis,
)

K = QuadraticField(1)


def random_invertible(rng, n):
    while True:
        m = kmatrix.as_matrix([[K(rng.randint(-3, 3), rng.randint(-1, 1)) for _ in range(n)] for _ in range(n)])
        if kmatrix.det(m):
            return m


class TestTensorCoefficient:
    def test_zero_values_dropped(self):
        t = TensorCoefficient({((1,), (2,)): K.zero, ((1,), (1,)): K.one}, 1)
        assert len(t) == 1

    def test_degree(self):
        assert TensorCoefficient.single((1, 2), (1,), K.one).degree() == (2, 1)
        assert TensorCoefficient.zero(1).degree() is None
        mixed = TensorCoefficient.single((1,), (), K.one) + TensorCoefficient.single((), (), K.one)
        with pytest.raises(ShapeError):
            mixed.degree()

    def test_append_and_tensor(self):
        t = TensorCoefficient.single((1,), (2,), K(3))
        assert t.append((2,), (1,)) == TensorCoefficient.single((1, 2), (2, 1), K(3))
        assert t.tensor(t) == TensorCoefficient.single((1, 1), (2, 2), K(9))

    def test_commutative_quotient(self):
        t = TensorCoefficient.single((2, 1), (), K.one) + TensorCoefficient.single((1, 2), (), K.one)
        assert t.commutative() == TensorCoefficient.single((1, 2), (), K(2))
        assert t.commutative().is_commutative_normal()

    def test_total(self):
        t = TensorCoefficient.single((1,), (1,), K(2)) + TensorCoefficient.single((2,), (2,), K(0, 1))
        assert t.total() == K(2, 1)

    def test_check_word(self):
        assert check_word([1, 2], 2) == (1, 2)
        with pytest.raises(ParameterError):
            check_word([3], 2)


class TestHighestWeights:
    def test_not_decreasing(self):
        with pytest.raises(ParameterError):
            HighestWeight((0, 1))

    def test_dimensions(self):
        assert dimension(HighestWeight((2, 0))) == 3
        assert dimension(HighestWeight((1, 1))) == 1
        assert dimension(HighestWeight((1, 0, 0))) == 3
        assert dimension(HighestWeight((2, 1))) == 2
        # st (x) wedge^2 st, not the 8-dimensional irreducible
        assert dimension(HighestWeight((2, 1, 0))) == 9

    def test_standard_representation(self):
        g = kmatrix.as_matrix([[K(1), K(2)], [K(0, 1), K(3)]])
        assert rho_matrix(HighestWeight((1, 0)), g) == g

    def test_top_wedge(self):
        g = kmatrix.as_matrix([[K(1), K(2)], [K(0, 1), K(3)]])
        assert rho_matrix(HighestWeight((1, 1)), g) == ((kmatrix.det(g),),)

    def test_highest_weight_eigenvalue(self):
        weight = HighestWeight((2, 1))
        t1, t2 = K(3), K(Fraction(1, 2), 1)
        m = rho_matrix(weight, kmatrix.as_matrix([[t1, K.zero], [K.zero, t2]]))
        i = highest_weight_index(weight)
        column = [row[i] for row in m]
        assert column[i] == t1 * t1 * t2
        assert all(not c for j, c in enumerate(column) if j != i)

    def test_negative_det_power(self):
        weight = HighestWeight((1, -1))
        g = kmatrix.from_rationals([[2, 0], [0, 1]], 1)
        m = rho_matrix(weight, g)
        assert len(m) == dimension(weight) == len(weight_basis(weight))
        with pytest.raises(MathDomainError):
            rho_matrix(weight, kmatrix.from_rationals([[1, 1], [1, 1]], 1))

    @pytest.mark.slow
    @pytest.mark.parametrize("lam", [(1, 0), (2, 0), (1, 1), (2, 1), (1, -1), (2, 1, 0)])
    def test_multiplicative(self, lam):
        weight = HighestWeight(lam)
        rng = random.Random(hash(lam) & 0xFFFF)
        for _ in range(15):
            g, h = random_invertible(rng, weight.n), random_invertible(rng, weight.n)
            assert rho_matrix(weight, kmatrix.mul(g, h)) == kmatrix.mul(rho_matrix(weight, g), rho_matrix(weight, h))


class TestSymmetrize:
    def test_single_letter(self):
        assert symmetrize_embed([1], 1) == TensorCoefficient.single((1,), (), K.one)

    def test_two_letters(self):
        expected = TensorCoefficient.single((1, 2), (), K.one) + TensorCoefficient.single((2, 1), (), K.one)
        assert symmetrize_embed([1, 2], 1) == expected

    def test_repeated_letter(self):
        assert symmetrize_embed([1, 1], 1) == TensorCoefficient.single((1, 1), (), K(2))

    def test_plus_side(self):
        assert symmetrize_embed([2], 1, side="plus") == TensorCoefficient.single((), (2,), K.one)


class TestTransformFrame:
    def test_identity(self):
        v = TensorCoefficient.single((1, 2), (2,), K(5))
        ident = kmatrix.identity(2, 1)
        assert transform_frame((2, 1), (ident, ident), v) == v

    def test_scalar_case(self):
        c = K(2, 1)
        v = TensorCoefficient.single((1,), (), K.one)
        out = transform_frame((1, 0), (((c,),), ((K.one,),)), v)
        assert out == TensorCoefficient.single((1,), (), c.inverse())

    def test_composition(self):
        rng = random.Random(11)
        v = TensorCoefficient.single((1, 2), (2,), K(1, 1)) + TensorCoefficient.single((2, 2), (1,), K(3))
        for _ in range(10):
            a = (random_invertible(rng, 2), random_invertible(rng, 2))
            b = (random_invertible(rng, 2), random_invertible(rng, 2))
            ab = (kmatrix.mul(a[0], b[0]), kmatrix.mul(a[1], b[1]))
            assert transform_frame((2, 1), a, transform_frame((2, 1), b, v)) == transform_frame((2, 1), ab, v)

    def test_tagged_weights(self):
        weight = HighestWeight((2, 0))
        g = kmatrix.from_rationals([[1, 1], [0, 1]], 1)
        v = TensorCoefficient.single((1,), (3,), K.one)
        ident = kmatrix.identity(2, 1)
        assert transform_frame((weight, weight), (ident, ident), v) == v
        assert transform_frame((weight, weight), (g, ident), v).degree() == (1, 1)

    def test_singular(self):
        v = TensorCoefficient.single((1,), (), K.one)
        singular = kmatrix.from_rationals([[1, 1], [1, 1]], 1)
        with pytest.raises(MathDomainError):
            transform_frame((1, 0), (singular, kmatrix.identity(2, 1)), v)

    def test_degree_mismatch(self):
        ident = kmatrix.identity(2, 1)
        with pytest.raises(ShapeError):
            transform_frame((2, 0), (ident, ident), TensorCoefficient.single((1,), (), K.one))
