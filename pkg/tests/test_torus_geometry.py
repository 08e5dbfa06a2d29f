import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import classes, unit_coords
from langlands_abelian.errors import ImaginaryPartNotPositiveDefinite, NotSymmetric
from langlands_abelian.torus_geometry import (
    CohomologyClass,
    aj_elliptic,
    aj_line_integral,
    load_period_matrix,
    period_pairing,
    random_period_matrix,
    reduce_point,
    solve_harmonic,
    torus_distance,
    validate_period_matrix,
)
from langlands_abelian.abelian_hecke import elliptic_harmonic_closed_form

I = validate_period_matrix(1j)
T = validate_period_matrix(0.3 + 1.2j)


def st_by_hand(z, tau):
    # z = s + tau t with real s, t
    t = z.imag / tau.imag
    return z.real - t * tau.real, t


class TestValidate:
    def test_examples(self):
        assert I.genus == 1 and I.tau == 1j
        assert T.tau == 0.3 + 1.2j

    def test_real_tau_rejected(self):
        with pytest.raises(ImaginaryPartNotPositiveDefinite):
            validate_period_matrix(1)

    def test_lower_half_plane_rejected(self):
        with pytest.raises(ImaginaryPartNotPositiveDefinite):
            validate_period_matrix(0.2 - 1j)

    def test_asymmetric_rejected(self):
        with pytest.raises(NotSymmetric):
            validate_period_matrix([[1j, 0.1], [0.2, 1j]])

    def test_indefinite_imaginary_part(self):
        with pytest.raises(ImaginaryPartNotPositiveDefinite):
            validate_period_matrix([[1j, 2j], [2j, 1j]])

    def test_json_round_trip(self, genus2, tmp_path):
        path = tmp_path / "omega.json"
        path.write_text(json.dumps(genus2.to_json()))
        again = load_period_matrix(path)
        assert np.array_equal(again.omega, genus2.omega)

    def test_json_schema(self):
        lat = load_period_matrix({"genus": 1, "omega": [[{"re": 0.3, "im": 1.2}]]})
        assert lat.tau == 0.3 + 1.2j

    def test_json_genus_mismatch(self):
        with pytest.raises(ValueError):
            load_period_matrix({"genus": 2, "omega": [[{"re": 0, "im": 1}]]})


class TestReduce:
    @pytest.mark.parametrize(
        "v, expected", [(1 + 1j, 0), (0.25, 0.25), (1.75 - 0.5j, 0.75 + 0.5j)]
    )
    def test_examples(self, v, expected):
        assert abs(reduce_point(v, I).coords[0] - expected) < 1e-14

    @given(st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False))
    def test_canonical_box(self, v):
        for lat in (I, T):
            s, t = st_by_hand(reduce_point(v, lat).coords[0], lat.tau)
            assert -1e-12 <= s < 1 + 1e-12 and -1e-12 <= t < 1 + 1e-12
            assert torus_distance(reduce_point(v, lat).coords, v, lat) < 1e-9

    @given(
        st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
        st.integers(-10, 10),
        st.integers(-10, 10),
    )
    def test_idempotent_and_translation_invariant(self, v, n, m):
        for lat in (I, T):
            r = reduce_point(v, lat)
            assert np.allclose(reduce_point(r.coords, lat).coords, r.coords, atol=1e-12)
            shifted = reduce_point(v + n + m * lat.tau, lat)
            assert torus_distance(shifted.coords, r.coords, lat) < 1e-10

    def test_genus2_translation(self, genus2):
        rng = np.random.default_rng(0)
        for _ in range(50):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            n, m = rng.integers(-10, 11, size=2), rng.integers(-10, 11, size=2)
            a = reduce_point(v, genus2).coords
            b = reduce_point(v + n + genus2.omega @ m, genus2).coords
            assert np.max(np.abs(a - b)) < 1e-10

    def test_wrong_shape(self, genus2):
        with pytest.raises(ValueError):
            reduce_point([0.1, 0.2, 0.3], genus2)


class TestSolveHarmonic:
    def test_examples(self):
        assert abs(solve_harmonic(CohomologyClass((1,), (0,)), I).u[0] - 0.5) < 1e-15
        assert abs(solve_harmonic(CohomologyClass((0,), (1,)), I).u[0] + 0.5j) < 1e-15
        assert np.all(solve_harmonic(CohomologyClass.zero(2), random_period_matrix(2, np.random.default_rng(1))).u == 0)

    def test_elliptic_by_hand(self):
        # u + conj(u) = m, tau u + conj(tau u) = n  =>  Re u = m/2, Im u = (m Re tau - n)/(2 Im tau)
        for tau in (1j, 0.3 + 1.2j, -0.45 + 0.9j):
            lat = validate_period_matrix(tau)
            for m, n in [(1, 0), (0, 1), (2, -3), (-5, 4)]:
                u = solve_harmonic(CohomologyClass((m,), (n,)), lat).u[0]
                expected = m / 2 + 1j * (m * tau.real - n) / (2 * tau.imag)
                assert abs(u - expected) < 1e-13

    @given(classes(2), classes(2))
    def test_linearity(self, g1, g2):
        lat = random_period_matrix(2, np.random.default_rng(7))
        lhs = solve_harmonic(g1 + g2, lat).u
        rhs = solve_harmonic(g1, lat).u + solve_harmonic(g2, lat).u
        assert np.max(np.abs(lhs - rhs)) <= 1e-10

    @given(classes(2))
    def test_invariants_and_period_integrality(self, gamma):
        lat = random_period_matrix(2, np.random.default_rng(11))
        form = solve_harmonic(gamma, lat)
        assert max(form.residuals()) <= 1e-10
        for k, cycle in enumerate(np.eye(4, dtype=int)):
            assert abs(period_pairing(form, cycle) - gamma.flat()[k]) <= 1e-10

    def test_genus_mismatch(self):
        with pytest.raises(ValueError):
            solve_harmonic(CohomologyClass((1, 0), (0, 0)), I)

    def test_non_integer_class(self):
        with pytest.raises(TypeError):
            CohomologyClass((0.5,), (0,))


class TestPeriodsAndAJ:
    def test_period_examples(self):
        assert abs(period_pairing(solve_harmonic(CohomologyClass((1,), (0,)), I), (1, 0)) - 1) < 1e-14
        assert abs(period_pairing(solve_harmonic(CohomologyClass((0,), (1,)), I), (1, 0))) < 1e-14
        assert abs(period_pairing(solve_harmonic(CohomologyClass((2,), (3,)), T), (1, 1)) - 5) <= 1e-10

    @pytest.mark.parametrize("p, expected", [(0, 0), (0.25 + 0.5j, 0.25 + 0.5j), (2 + 3j, 0)])
    def test_aj_elliptic(self, p, expected):
        assert abs(aj_elliptic(p, I).coords[0] - expected) < 1e-14

    def test_line_integral_examples(self):
        f10 = solve_harmonic(CohomologyClass((1,), (0,)), I)
        f01 = solve_harmonic(CohomologyClass((0,), (1,)), I)
        assert abs(aj_line_integral(f10, reduce_point(0.25, I)) - 0.25) < 1e-15
        assert abs(aj_line_integral(f01, reduce_point(0.5j, I)) - 0.5) < 1e-15
        assert aj_line_integral(f10, reduce_point(0, I)) == 0

    @given(st.integers(-5, 5), st.integers(-5, 5), unit_coords(1))
    def test_harmonic_matches_closed_form(self, m, n, st_):
        for lat in (I, T):
            z = lat.from_st([st_[0]], [st_[1]])[0]
            form = solve_harmonic(CohomologyClass((m,), (n,)), lat)
            ours = np.exp(2j * np.pi * aj_line_integral(form, np.array([z])))
            assert abs(ours - elliptic_harmonic_closed_form(m, n, lat.tau, z)) <= 1e-12
