"""Tests of the connection, curvature and Ricci formulas"""

import numpy as np
import pytest

from ricciode.exceptions import InvalidJetError
from ricciode.frame_curvature import (
    JetPoint,
    connection_matrix,
    curvature_coeffs,
    ricci_from_curvature,
    ricci_from_jet,
    scalar_curvature,
    structure_residual,
)


def random_jet(rng, size=None):
    a1, a2 = rng.uniform(0.2, 3.0, (2,) + (() if size is None else (size,)))
    rest = rng.uniform(-2.0, 2.0, (4,) + (() if size is None else (size,)))
    return JetPoint(a1, rest[0], rest[1], a2, rest[2], rest[3])


class TestJetPoint:
    @pytest.mark.parametrize(["a1", "a2"], [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0), (np.nan, 1.0)])
    def test_nonpositive_coefficients_rejected(self, a1, a2):
        with pytest.raises(InvalidJetError):
            JetPoint(a1, 0.0, 0.0, a2, 0.0, 0.0)

    def test_array_with_one_bad_member_rejected(self):
        with pytest.raises(InvalidJetError):
            JetPoint(np.array([1.0, 0.0]), 0.0, 0.0, np.array([1.0, 1.0]), 0.0, 0.0)


class TestConnection:
    def test_antisymmetric(self, rng):
        assert connection_matrix(random_jet(rng)).is_antisymmetric()

    def test_entries(self):
        jet = JetPoint(2.0, 3.0, 0.0, 4.0, 5.0, 0.0)
        omega = connection_matrix(jet)
        assert omega.entry(0, 1) == pytest.approx(3.0 / 2.0)
        assert omega.entry(0, 2) == pytest.approx(5.0 / 4.0)
        assert omega.entry(1, 2) == pytest.approx(-2.0 / 16.0)
        assert omega.entry(1, 3) == pytest.approx(2.0 / 16.0)
        assert omega.entry(2, 3) == pytest.approx((4.0 - 32.0) / 32.0)
        # one nonzero component per entry
        assert np.count_nonzero(omega.one_form(2, 3)) == 1

    def test_first_structure_equation(self, rng):
        for _ in range(20):
            assert structure_residual(random_jet(rng)) < 1e-12


class TestRicci:
    @pytest.mark.parametrize(
        ["jet", "expected"],
        [
            # round S^3 of radius 1 times a line
            ((1.0, 0.0, 0.0, 1.0, 0.0, 0.0), (0.0, 4.0, 4.0, 12.0)),
            # flat cone A1 = A2 = t at t = 5
            ((5.0, 1.0, 0.0, 5.0, 1.0, 0.0), (0.0, 0.0, 0.0, 0.0)),
        ],
    )
    def test_known_values(self, jet, expected):
        ric = ricci_from_jet(JetPoint(*jet))
        assert (ric.ric00, ric.ric11, ric.ric22, ric.scalar) == pytest.approx(
            expected, abs=1e-12
        )
        assert scalar_curvature(JetPoint(*jet)) == pytest.approx(expected[3], abs=1e-12)

    def test_closed_formula_matches_curvature_contraction(self, rng):
        a1, a2 = rng.uniform(0.1, 10.0, (2, 1000))
        rest = rng.uniform(-2.0, 2.0, (4, 1000))
        jets = JetPoint(a1, rest[0], rest[1], a2, rest[2], rest[3])
        direct = ricci_from_jet(jets)
        contracted = ricci_from_curvature(jets)
        # size of the largest term in either sum
        scale = (
            np.abs(rest[1] / a1)
            + np.abs(rest[3] / a2)
            + np.abs(rest[0] * rest[2] / (a1 * a2))
            + a1**2 / a2**4
            + (1 + rest[2] ** 2) / a2**2
        )
        for got, want in [
            (contracted.ric00, direct.ric00),
            (contracted.ric11, direct.ric11),
            (contracted.ric22, direct.ric22),
        ]:
            assert np.all(np.abs(got - want) <= 1e-12 * np.abs(want) + 1e-13 * scale)

    def test_two_three_symmetry(self, rng):
        coeffs = curvature_coeffs(random_jet(rng))
        assert coeffs.omega03 == coeffs.omega02
        assert coeffs.omega13 == coeffs.omega12

    def test_broadcasts_over_arrays(self, rng):
        jets = random_jet(rng, size=7)
        ric = ricci_from_jet(jets)
        assert np.shape(ric.ric11) == (7,)
        for i in range(7):
            single = JetPoint(*(v[i] for v in jets.as_tuple()))
            assert ricci_from_jet(single).ric11 == pytest.approx(ric.ric11[i])

    def test_to_dict(self):
        d = ricci_from_jet(JetPoint(1.0, 0.0, 0.0, 1.0, 0.0, 0.0)).to_dict()
        assert d == {"ric00": 0.0, "ric11": 4.0, "ric22": 4.0, "scalar": 12.0}
