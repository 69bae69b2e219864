import os
import random
import sys
from fractions import Fraction

import pytest
from sympy import divisor_sigma

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from cmfield import QuadraticField  # noqa: E402
from errors import ParameterError, ShapeError  # noqa: E402
from hermidx import HermitianIndex  # noqa: E402
from invariant_suites import random_qexpansion, theta_oracle  # noqa: E402
from models import QExpansionFile  # noqa: E402
from qexp import QExpansion, add_scale, frobenius, multiply, scalar_series  # noqa: E402
from theta import (  # noqa: E402
    Projector,
    ProjectorKind,
    block_basis,
    theta,
    theta_power,
    theta_via_derivations,
    theta_Z,
)
from weights import TensorCoefficient  # noqa: E402

K = QuadraticField(1)
FIXTURES = os.path.join(os.path.dirname(__file__), '..', 'fixtures')


def single(wm, wp, c=1):
    return TensorCoefficient.single(wm, wp, K(c))


class TestTheta:
    def test_constant_is_killed(self):
        assert theta(QExpansion.constant(K(7), 2, 3)).is_zero()

    def test_q(self):
        g = theta(scalar_series({1: 1}, 1, 3))
        assert g.degree == (1, 1)
        assert g.coefficient(HermitianIndex.diag([1], 1)) == single((1,), (1,))

    def test_n2_diagonal(self):
        h = HermitianIndex.diag([1, 2], 1)
        g = theta(QExpansion.from_scalars(2, 1, 3, {h: K.one}))
        assert g.coefficient(h) == single((1,), (1,)) + single((2,), (2,), 2)

    def test_off_diagonal_letter_order(self):
        half = K(Fraction(1, 2), Fraction(1, 2))
        h = HermitianIndex(2, ((K(1), half), (half.conj(), K(1))))
        g = theta(QExpansion.from_scalars(2, 1, 2, {h: K.one}))
        c = g.coefficient(h)
        # h_12 appends T_2 on the minus word and T_1 on the plus word
        assert c.terms[((2,), (1,))] == half
        assert c.terms[((1,), (2,))] == half.conj()

    def test_power(self):
        assert theta_power(scalar_series({1: 1}, 1, 3), 2).coefficient(HermitianIndex.diag([1], 1)) == \
            single((1, 1), (1, 1))
        assert theta_power(scalar_series({2: 1}, 1, 3), 2).coefficient(HermitianIndex.diag([2], 1)) == \
            single((1, 1), (1, 1), 4)
        with pytest.raises(ParameterError):
            theta_power(scalar_series({2: 1}, 1, 3), 0)

    def test_ramanujan_e4(self):
        with open(os.path.join(FIXTURES, "e4.json"), "r", encoding="utf-8") as f:
            e4 = QExpansion.from_file_model(QExpansionFile.model_validate_json(f.read())).truncate(20)
        g = theta(e4)
        for m in range(1, 21):
            assert g.coefficient(HermitianIndex.diag([m], 1)) == single((1,), (1,), 240 * m * int(divisor_sigma(m, 3)))

    def test_matches_oracle(self):
        rng = random.Random(3)
        for _ in range(20):
            f = random_qexpansion(rng, rng.choice([1, 2]), rng.choice([1, 2]), 3, (1, 0))
            assert theta(f).coefficients == theta_oracle(f)

    def test_via_derivations(self):
        rng = random.Random(5)
        for _ in range(10):
            f = random_qexpansion(rng, 2, rng.choice([1, 3]), 3)
            assert theta_via_derivations(f) == theta(f)

    def test_derivation_law(self):
        f = scalar_series({0: 1, 1: 2, 2: -1}, 1, 4, commutative=True)
        g = scalar_series({0: 3, 1: 1}, 1, 4, commutative=True)
        lhs = theta(multiply(f, g))
        rhs = add_scale(multiply(theta(f), g), multiply(f, theta(g)), K.one)
        assert lhs == rhs

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_frobenius_interplay(self, p):
        f = scalar_series({0: 1, 1: 2, 3: 5}, 1, 3)
        left = theta(frobenius(f, p))
        right = frobenius(theta(f), p)
        assert left == add_scale(QExpansion.zero(1, 1, right.trace_bound, right.degree), right, K(p))


class TestProjectors:
    def test_block_basis(self):
        basis = block_basis(2, 1)
        assert basis == [((1,), (1,)), ((1,), (2,)), ((2,), (1,)), ((2,), (2,))]

    def test_symmetrize_two_slots(self):
        c = single((1, 2), (2, 1))
        out = Projector.symmetrize(2).apply(c)
        assert out == single((1, 2), (2, 1), Fraction(1, 2)) + single((2, 1), (1, 2), Fraction(1, 2))

    def test_det_kills_repeated_letters(self):
        assert Projector.det(2).apply(single((1, 1), (1, 2))).is_zero()

    def test_det_antisymmetrizes(self):
        out = Projector.det(2).apply(single((1, 2), (1, 2)))
        q = Fraction(1, 4)
        expected = (single((1, 2), (1, 2), q) - single((2, 1), (1, 2), q)
                    - single((1, 2), (2, 1), q) + single((2, 1), (2, 1), q))
        assert out == expected

    @pytest.mark.parametrize("kind", [ProjectorKind.SYMMETRIZE, ProjectorKind.DET])
    def test_builtin_idempotent(self, kind):
        proj = Projector.symmetrize(2) if kind == ProjectorKind.SYMMETRIZE else Projector.det(2)
        proj.check_idempotent(2)

    def test_only_last_slots(self):
        c = single((2, 1, 2), (1, 2, 1))
        out = Projector.symmetrize(2).apply(c)
        assert all(wm[0] == 2 and wp[0] == 1 for wm, wp in out.terms)

    def test_block_too_long(self):
        with pytest.raises(ShapeError):
            Projector.symmetrize(2).apply(single((1,), (1,)))

    def test_user_projector(self):
        # projection onto the first basis word of the n=1, e=1 block
        proj = Projector.from_matrix(1, 1, {(0, 0): K.one})
        assert proj.apply(single((1,), (1,), 3)) == single((1,), (1,), 3)

    def test_user_projector_not_idempotent(self):
        with pytest.raises(ParameterError):
            Projector.from_matrix(1, 1, {(0, 0): K(2)})

    def test_user_projector_out_of_range(self):
        with pytest.raises(ShapeError):
            Projector.from_matrix(1, 1, {(0, 1): K.one})


class TestThetaZ:
    def test_identity(self):
        f = QExpansion.from_scalars(2, 1, 3, {HermitianIndex.diag([1, 2], 1): K.one})
        assert theta_Z(f, 2, Projector.identity(2)) == theta_power(f, 2)

    def test_det_on_diagonal_index(self):
        # every word of theta^2 q^diag(1,2) has repeated or paired letters on both sides
        f = QExpansion.from_scalars(2, 1, 3, {HermitianIndex.diag([1, 2], 1): K.one})
        out = theta_Z(f, 2, Projector.det(2))
        c = out.coefficient(HermitianIndex.diag([1, 2], 1))
        assert out.degree == (2, 2)
        assert c.total() == K.zero

    def test_block_mismatch(self):
        f = scalar_series({1: 1}, 1, 2)
        with pytest.raises(ShapeError):
            theta_Z(f, 2, Projector.symmetrize(3))

    @pytest.mark.parametrize("seed", range(5))
    def test_commutative_input_keeps_projected_words(self, seed):
        f = random_qexpansion(random.Random(seed), 2, 1, 3)
        out = theta_Z(f.with_flag(True), 2, Projector.det(2))
        assert out.commutative is False
        assert out.coefficients == theta_Z(f, 2, Projector.det(2)).coefficients
