import os
import random
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import kmatrix  # noqa: E402
from cmfield import QuadraticField  # noqa: E402
from errors import ParameterError, ShapeError  # noqa: E402
from gmks import PointOfHn, coordinate_ring  # noqa: E402
from invariant_suites import (  # noqa: E402
    random_nearly_holomorphic,
    random_point,
    random_qexpansion,
    random_weight_data,
)
from maass import (  # noqa: E402
    DeterminantWeightData,
    NearlyHoloForm,
    StandardWeightData,
    SymmetricWeightData,
    delta,
    delta_iterate,
    holomorphic_part,
    shimura_closed_formula,
    shimura_composite,
)
from models import canonical_json  # noqa: E402
from qexp import scalar_series  # noqa: E402
from theta import theta  # noqa: E402

K = QuadraticField(1)


def form(k, terms, bound=5):
    return NearlyHoloForm(k, bound, {key: K(c) for key, c in terms.items()})


class TestDelta:
    def test_constant(self):
        assert delta(form(4, {(0, 0): 1})) == form(6, {(1, 0): 4})

    def test_q_weight_two(self):
        assert delta(form(2, {(0, 1): 1})) == form(4, {(0, 1): 1, (1, 1): 2})

    def test_second_iterate(self):
        assert delta_iterate(form(2, {(0, 0): 1}), 2) == form(6, {(2, 0): 6})

    def test_weight_zero_constant_killed(self):
        assert delta(form(0, {(0, 0): 3})).coeffs == {}

    def test_second_iterate_of_q_from_weight_zero(self):
        # delta_0(q) = q, then delta_2(q) = q + 2Yq
        assert delta_iterate(form(0, {(0, 1): 1}), 2) == form(4, {(0, 1): 1, (1, 1): 2})

    def test_iterate_needs_positive(self):
        with pytest.raises(ParameterError):
            delta_iterate(form(2, {(0, 0): 1}), 0)

    def test_leibniz(self):
        rng = random.Random(4)
        for _ in range(20):
            f = random_nearly_holomorphic(rng, rng.randint(-2, 6), 6)
            g = random_nearly_holomorphic(rng, rng.randint(-2, 6), 6)
            assert delta(f * g) == delta(f) * g + f * delta(g)


class TestHolomorphicPart:
    def test_y_terms_dropped(self):
        assert holomorphic_part(form(2, {(1, 1): 3})).is_zero()

    def test_matches_theta(self):
        rng = random.Random(9)
        for bound in (0, 3, 12):
            f = random_qexpansion(rng, 1, 1, bound)
            g = holomorphic_part(delta(NearlyHoloForm.from_qexpansion(f, 4)))
            assert g.series() == theta(f).series()

    def test_e4(self):
        f = scalar_series({0: 1, 1: 240, 2: 2160}, 1, 2)
        assert holomorphic_part(delta(NearlyHoloForm.from_qexpansion(f, 4))).series() == {1: K(240), 2: K(4320)}


class TestNearlyHoloForm:
    def test_weight_mismatch(self):
        with pytest.raises(ShapeError):
            form(2, {(0, 0): 1}) + form(4, {(0, 0): 1})

    def test_negative_exponent(self):
        with pytest.raises(ParameterError):
            form(2, {(-1, 0): 1})

    def test_terms_above_bound_dropped(self):
        assert form(2, {(0, 7): 1}, bound=5).coeffs == {}

    def test_file_model(self):
        f = form(4, {(0, 0): 1, (1, 2): -3})
        model = f.to_file_model()
        assert NearlyHoloForm.from_file_model(model) == f
        assert canonical_json(model).endswith("\n")


class TestClosedFormulas:
    def test_standard_n1(self):
        coords = coordinate_ring(1, 1)
        data = StandardWeightData(1, 1, {(1, 1): coords.z(1, 1)})
        z = random_point(random.Random(1), 1, 1)
        assert shimura_closed_formula(data, z) == shimura_composite(data, z)

    @pytest.mark.parametrize("tag", ["st", "sym", "det"])
    @pytest.mark.parametrize("n", [1, 2])
    def test_agree_with_composite(self, tag, n):
        rng = random.Random(f"{tag}{n}")
        d = rng.choice([1, 2])
        z = random_point(rng, n, d)
        data = random_weight_data(rng, tag, n, d)
        assert shimura_closed_formula(data, z) == shimura_composite(data, z)

    def test_det_constant_weight(self):
        coords = coordinate_ring(2, 1)
        data = DeterminantWeightData(2, 1, 1, 0, coords.one)
        z = random_point(random.Random(3), 2, 1)
        value = shimura_closed_formula(data, z)
        assert value
        assert all(len(word) == 4 for word in value)

    def test_det_weight_n1_reduction(self):
        # df/dz + 2k (z - zbar)^-1 f for f = z^2, k = 2 at z = 1 + 2w: (2 + 4i) + (4 + 3i)
        coords = coordinate_ring(1, 1)
        z = PointOfHn(kmatrix.as_matrix([[K(1, 2)]]))
        data = DeterminantWeightData(1, 1, 2, 2, coords.z(1, 1) * coords.z(1, 1))
        expected = {(1, 1, 2, 2, 2, 1): K(6, 7)}
        assert shimura_closed_formula(data, z) == expected
        assert shimura_composite(data, z) == expected

    @pytest.mark.parametrize("n", [1, 2])
    def test_det_weight_zero_constant(self, n):
        coords = coordinate_ring(n, 1)
        data = DeterminantWeightData(n, 1, 0, 0, coords.one + coords.one)
        z = random_point(random.Random(n), n, 1)
        assert shimura_closed_formula(data, z) == {}
        assert shimura_composite(data, z) == {}

    def test_bad_symmetric_exponents(self):
        coords = coordinate_ring(2, 1)
        with pytest.raises(ShapeError):
            SymmetricWeightData(2, 1, 2, 1, {((1, 0), (1, 0)): coords.one})

    def test_negative_det_power(self):
        with pytest.raises(ParameterError):
            DeterminantWeightData(1, 1, -1, 0, coordinate_ring(1, 1).one)

    def test_point_mismatch(self):
        coords = coordinate_ring(2, 1)
        data = StandardWeightData(2, 1, {(1, 1): coords.one})
        with pytest.raises(ShapeError):
            shimura_closed_formula(data, random_point(random.Random(0), 1, 1))
        with pytest.raises(ParameterError):
            shimura_closed_formula(data, random_point(random.Random(0), 2, 2))
