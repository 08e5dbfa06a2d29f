import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import classes, unit_coords
from langlands_abelian.abelian_hecke import GridFunction, Harmonic, grid_nodes, harmonic_eval, hecke_apply, hecke_eigenvalue
from langlands_abelian.errors import ShapeMismatch
from langlands_abelian.torus_geometry import CohomologyClass, reduce_point, validate_period_matrix
from langlands_abelian.torus_groups import (
    BunTPoint,
    TCohomologyClass,
    TorusData,
    integer_determinant,
    load_torus_data,
    t_gram_matrix,
    t_harmonic_eval,
    t_hecke_apply,
    t_hecke_eigenvalue,
    t_monodromy_generators,
    t_shift,
    verify_t_eigenfunction,
)

I = validate_period_matrix(1j)
T = validate_period_matrix(0.3 + 1.2j)
SKEW = TorusData(2, ((2, 1), (1, 1)))
GL1 = TorusData.split(1)
SPLIT2 = TorusData.split(2)


def cls(m, n):
    return CohomologyClass((m,), (n,))


def tclasses(rank, bound=3):
    return st.lists(classes(1, bound), min_size=rank, max_size=rank).map(lambda c: TCohomologyClass(tuple(c)))


def pt(st_):
    return reduce_point(T.from_st([st_[0]], [st_[1]]), T)


mus = st.lists(st.integers(-4, 4), min_size=2, max_size=2).map(tuple)


class TestTorusData:
    def test_determinant(self):
        assert integer_determinant([[2, 1], [1, 1]]) == 1
        assert integer_determinant([[0, 1], [1, 0]]) == -1
        assert integer_determinant([[2, 0], [0, 3]]) == 6

    def test_not_unimodular(self):
        with pytest.raises(ValueError):
            TorusData(2, ((2, 0), (0, 1)))

    def test_shape(self):
        with pytest.raises(ShapeMismatch):
            TorusData(2, ((1, 0),))

    def test_json(self):
        assert load_torus_data(json.dumps(SKEW.to_json())) == SKEW


class TestHarmonics:
    def test_gl1_reduction(self):
        rng = np.random.default_rng(0)
        for m, n in [(1, 0), (2, -3), (0, 4)]:
            p = pt(rng.random(2))
            ours = t_harmonic_eval(TCohomologyClass((cls(m, n),)), BunTPoint((p,)), GL1, T)
            assert abs(ours - harmonic_eval(Harmonic.from_class(cls(m, n), T), p)) < 1e-15

    def test_zero(self):
        zero = TCohomologyClass((cls(0, 0), cls(0, 0)))
        assert t_harmonic_eval(zero, BunTPoint.from_coords([0.2, 0.3j], I), SKEW, I) == 1

    def test_example(self):
        gamma = TCohomologyClass((cls(1, 0), cls(0, 1)))
        value = t_harmonic_eval(gamma, BunTPoint.from_coords([0.25, 0.5j], I), SPLIT2, I)
        assert abs(value + 1j) < 1e-14
        # same value through the general-pairing code path
        coords = np.array([[0.25], [0.5j]])
        assert abs(t_harmonic_eval(gamma, coords, SPLIT2, I) + 1j) < 1e-14

    def test_rank_mismatch(self):
        with pytest.raises(ShapeMismatch):
            t_harmonic_eval(TCohomologyClass((cls(1, 0),)), BunTPoint.from_coords([0.1, 0.2], I), SPLIT2, I)


class TestHecke:
    def test_shift_example(self):
        p = reduce_point(0.2 + 0.3j, I)
        moved = t_shift(BunTPoint.from_coords([0, 0], I), p, (1, -1), I)
        assert np.allclose(moved.components[0].coords, p.coords)
        assert np.allclose(moved.components[1].coords, reduce_point(-p.coords, I).coords)

    def test_zero_mu_is_identity(self):
        f = lambda c: np.sum(np.real(c), axis=(-1, -2))
        grid = np.array([[[0.1 + 0.2j], [0.3 + 0.4j]]])
        assert np.allclose(t_hecke_apply(f, reduce_point(0.4 + 0.1j, I), (0, 0), I)(grid), f(grid))

    def test_rank_one_apply_matches_gl1(self):
        gamma = cls(2, -1)
        p = reduce_point(0.37 + 0.61j, T)
        g = GridFunction.from_harmonic(Harmonic.from_class(gamma, T), 8)
        nodes = grid_nodes(T, 8)[:, 0]
        f = lambda c: t_harmonic_eval(TCohomologyClass((gamma,)), c, GL1, T)
        ours = t_hecke_apply(f, p, (1,), T)(nodes[:, None, None])
        assert np.max(np.abs(ours - hecke_apply(g, p).flat())) < 1e-12

    def test_eigenvalue_examples(self):
        gamma = TCohomologyClass((cls(1, 2), cls(-1, 0)))
        p = reduce_point(0.3 + 0.2j, T)
        assert t_hecke_eigenvalue(gamma, (0, 0), p, T, SKEW) == 1
        assert t_hecke_eigenvalue(gamma, (2, 1), reduce_point(0, T), T, SKEW) == 1
        single = TCohomologyClass((cls(1, 2),))
        assert abs(t_hecke_eigenvalue(single, (1,), p, T, GL1) - hecke_eigenvalue(cls(1, 2), p, T).value) < 1e-15

    @given(tclasses(2), mus, mus, unit_coords(1))
    def test_multiplicative_in_mu(self, gamma, mu, nu, st_):
        p = pt(st_)
        both = tuple(a + b for a, b in zip(mu, nu))
        lhs = t_hecke_eigenvalue(gamma, both, p, T, SKEW)
        assert abs(lhs - t_hecke_eigenvalue(gamma, mu, p, T, SKEW) * t_hecke_eigenvalue(gamma, nu, p, T, SKEW)) <= 1e-10

    @given(tclasses(2), tclasses(2), mus, unit_coords(1))
    def test_multiplicative_in_gamma(self, g1, g2, mu, st_):
        p = pt(st_)
        lhs = t_hecke_eigenvalue(g1 + g2, mu, p, T, SKEW)
        assert abs(lhs - t_hecke_eigenvalue(g1, mu, p, T, SKEW) * t_hecke_eigenvalue(g2, mu, p, T, SKEW)) <= 1e-10

    @given(tclasses(2), mus, unit_coords(1), unit_coords(1))
    def test_multiplicative_in_p(self, gamma, mu, a, b):
        p, q = pt(a), pt(b)
        pq = reduce_point(p.coords + q.coords, T)
        lhs = t_hecke_eigenvalue(gamma, mu, pq, T, SKEW)
        assert abs(lhs - t_hecke_eigenvalue(gamma, mu, p, T, SKEW) * t_hecke_eigenvalue(gamma, mu, q, T, SKEW)) <= 1e-10

    @given(tclasses(2, 2), mus, unit_coords(1))
    def test_eigenfunction(self, gamma, mu, st_):
        assert verify_t_eigenfunction(gamma, mu, pt(st_), T, SKEW, 3) <= 1e-10


class TestOrthogonalityAndMonodromy:
    def test_gram_identity(self):
        import itertools

        box = [cls(m, n) for m in range(-2, 3) for n in range(-2, 3)]
        classes_ = [TCohomologyClass(c) for c in itertools.product(box, repeat=2)]
        gram = t_gram_matrix(classes_, SKEW, I, 16)
        assert np.max(np.abs(gram - np.eye(len(classes_)))) <= 1e-12

    @given(tclasses(2, 5))
    def test_trivial_monodromy(self, gamma):
        for comp in t_monodromy_generators(gamma, T):
            assert max(abs(w - 1) for w in comp) <= 1e-10
