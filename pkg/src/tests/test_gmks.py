import json
import os
import random
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import kmatrix  # noqa: E402
from cmfield import QuadraticField  # noqa: E402
from errors import MathDomainError, ParameterError, ShapeError  # noqa: E402
from gmks import (  # noqa: E402
    PointFrame,
    PointOfHn,
    SymbolicSection,
    D_operator,
    D_thexpl,
    b_minus,
    b_plus,
    coordinate_ring,
    du,
    du_bar,
    format_label,
    gauss_manin,
    gauss_manin_then_inject,
    ks_image,
    ks_kernel_check,
    ks_table,
    vecdui_check,
)
from invariant_suites import expected_ks, random_point, random_polynomial, random_word  # noqa: E402

K = QuadraticField(1)
FIXTURES = os.path.join(os.path.dirname(__file__), '..', 'fixtures')


def load_point(name):
    with open(os.path.join(FIXTURES, f"{name}.json"), "r", encoding="utf-8") as f:
        data = json.load(f)
    return PointOfHn.from_pairs(data["matrix"], data["d"])


class TestCoordinateRing:
    def test_w_squared(self):
        coords = coordinate_ring(1, 3)
        assert coords.mul(coords.w, coords.w) == coords.const(-3)

    def test_evaluate(self):
        coords = coordinate_ring(1, 1)
        z = kmatrix.as_matrix([[K(2, 1)]])
        p = coords.z(1, 1) * coords.zbar(1, 1)
        assert coords.evaluate(p, z) == K(5)
        assert coords.evaluate(coords.w, z) == K.omega

    def test_holomorphic(self):
        coords = coordinate_ring(2, 1)
        assert coords.is_holomorphic(coords.z(1, 2) * coords.w)
        assert not coords.is_holomorphic(coords.zbar(2, 1))

    def test_cached(self):
        assert coordinate_ring(2, 2) is coordinate_ring(2, 2)


class TestPoints:
    def test_fixture_points(self):
        assert load_point("point_n1").n == 1
        assert load_point("point_n2").n == 2

    def test_real_point_rejected(self):
        with pytest.raises(MathDomainError):
            PointOfHn(kmatrix.as_matrix([[K(1)]]))

    def test_lower_half_plane_rejected(self):
        with pytest.raises(MathDomainError):
            PointOfHn(kmatrix.as_matrix([[-K.omega]]))

    def test_non_square_rejected(self):
        with pytest.raises(ParameterError):
            PointOfHn(((K(1), K(2)),))


class TestGaussManin:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_frame(self, n):
        coords = coordinate_ring(n, 1)
        for i in range(1, n + 1):
            assert gauss_manin(du(coords, i)) == [(b_minus(coords, j), (i, j)) for j in range(1, n + 1)]
            assert gauss_manin(du(coords, n + i)) == [(b_plus(coords, j), (j, i)) for j in range(1, n + 1)]
            assert gauss_manin(du_bar(coords, i)) == []

    def test_du_index_range(self):
        with pytest.raises(ParameterError):
            du(coordinate_ring(1, 1), 3)


class TestKodairaSpencer:
    def test_n1_table(self):
        assert ks_table(load_point("point_n1")) == [[None, (1, 1)], [(1, 1), None]]

    def test_n2_table(self):
        table = ks_table(load_point("point_n2"))
        for i in range(1, 5):
            for j in range(1, 5):
                assert table[i - 1][j - 1] == expected_ks(i, j, 2)

    def test_du1_dw3(self):
        frame = PointFrame(load_point("point_n2"))
        assert ks_image({(1, 3): K.one}, frame) == {(1, 1): K.one}
        assert format_label((1, 1)) == "dz_11"

    def test_kernel(self):
        assert ks_kernel_check(2, load_point("point_n2"))
        with pytest.raises(ShapeError):
            ks_kernel_check(1, load_point("point_n2"))

    @pytest.mark.parametrize("d", [1, 2, 7])
    def test_random_points(self, d):
        rng = random.Random(d)
        z = random_point(rng, 2, d)
        assert ks_kernel_check(2, z)
        assert vecdui_check(PointFrame(z))


class TestOperatorD:
    def test_scalar(self):
        coords = coordinate_ring(1, 1)
        s = SymbolicSection.scalar(coords, coords.z(1, 1) ** 2)
        out = D_thexpl(s)
        expected = du(coords, 2).tensor(du(coords, 1)).scale(2 * coords.z(1, 1))
        assert out == expected
        assert out.degree == 2

    def test_constant_killed(self):
        coords = coordinate_ring(2, 1)
        assert D_thexpl(SymbolicSection.scalar(coords, coords.one)).is_zero()

    def test_agrees_with_gauss_manin(self):
        rng = random.Random(17)
        for _ in range(10):
            n = rng.choice([1, 2])
            coords = coordinate_ring(n, rng.choice([1, 2]))
            s = SymbolicSection.monomial(coords, random_word(rng, n, rng.randint(0, 2)), random_polynomial(coords, rng))
            assert D_thexpl(s) == gauss_manin_then_inject(s)

    def test_sum_needs_operator(self):
        coords = coordinate_ring(1, 1)
        s = du(coords, 1)
        with pytest.raises(ShapeError):
            D_thexpl(s)
        assert D_operator(s) == gauss_manin_then_inject(s)
