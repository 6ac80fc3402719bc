import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankeltrunc.trigpoly import (
    Grid,
    TrigPoly,
    cauchy_projection,
    dilate2,
    eval_grid,
    eval_half_grid,
    evaluate,
    flip,
    from_grid,
    hilbert,
    max_coeff_diff,
    multiply,
    to_conjugate_variable,
)
from hankeltrunc.spaces import lp_norm

TOL = 1e-12


def dft_coeff(samples, n):
    """Plain O(M) DFT sum for a single coefficient."""
    M = len(samples)
    return sum(s * cmath.exp(-2j * math.pi * n * j / M) for j, s in enumerate(samples)) / M


def brute_eval(f, x):
    return sum(c * cmath.exp(1j * n * x) for n, c in f.coeffs.items())


coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@st.composite
def polys(draw, lo=-8, hi=8):
    freqs = draw(st.lists(st.integers(lo, hi), max_size=6, unique=True))
    return TrigPoly({n: draw(coef) for n in freqs})


# -- eval_grid -----------------------------------------------------------------


def test_eval_grid_zero():
    assert np.array_equal(eval_grid(TrigPoly(), 8), np.zeros(8))


def test_eval_grid_constant():
    np.testing.assert_allclose(eval_grid(TrigPoly.constant(1), 4), [1, 1, 1, 1], atol=TOL)


def test_eval_grid_roots_of_unity():
    np.testing.assert_allclose(eval_grid(TrigPoly.monomial(1), 4), [1, 1j, -1, -1j], atol=TOL)


@settings(max_examples=50, deadline=None)
@given(polys(-20, 20), st.integers(1, 40))
def test_eval_grid_matches_direct_sum(f, M):
    # aliasing is folded in, so any M agrees with pointwise evaluation
    xs = [2 * math.pi * j / M for j in range(M)]
    np.testing.assert_allclose(eval_grid(f, M), [brute_eval(f, x) for x in xs], atol=1e-9)


def test_eval_half_grid_points():
    f = TrigPoly({-3: 1 + 2j, 2: 0.5, 5: -1j})
    M = 16
    x = (np.arange(M) + 0.5) * 2 * np.pi / M
    np.testing.assert_allclose(eval_half_grid(f, M), evaluate(f, x), atol=1e-12)


# -- from_grid -----------------------------------------------------------------


def test_from_grid_single_mode():
    f = from_grid(eval_grid(TrigPoly.monomial(1), 8), band=1)
    assert f.allclose(TrigPoly.monomial(1), TOL)


def test_from_grid_constant():
    assert from_grid(np.ones(5), band=0).allclose(TrigPoly.constant(1), TOL)


def test_from_grid_against_dft_oracle():
    samples = [1 + 2 * cmath.exp(1j * x) + cmath.exp(2j * x) for x in np.arange(8) * 2 * math.pi / 8]
    expected = {n: dft_coeff(samples, n) for n in range(-2, 3)}
    assert [round(abs(expected[n]), 12) for n in (0, 1, 2)] == [1, 2, 1]
    got = from_grid(samples, band=2)
    assert got.allclose(TrigPoly({0: 1, 1: 2, 2: 1}), TOL)
    assert max(abs(got[n] - expected[n]) for n in expected) <= TOL


def test_from_grid_rejects_unresolved_band():
    with pytest.raises(ValueError):
        from_grid(np.ones(4), band=2)


@settings(max_examples=50, deadline=None)
@given(polys(-10, 10), st.integers(0, 12))
def test_from_grid_inverts_eval_grid(f, extra):
    band = max(f.degree, 0)
    M = 2 * band + 1 + extra
    assert max_coeff_diff(from_grid(eval_grid(f, M), band), f) <= 1e-10


# -- multiply ------------------------------------------------------------------


def test_multiply_binomial():
    one_z = TrigPoly({0: 1, 1: 1})
    assert multiply(one_z, one_z).allclose(TrigPoly({0: 1, 1: 2, 2: 1}), TOL)


def test_multiply_by_zero():
    assert multiply(TrigPoly({0: 1, 3: 2}), TrigPoly()).is_zero


def test_multiply_cubed_against_convolution_oracle():
    one_z = TrigPoly({0: 1, 1: 1})
    got = multiply(multiply(one_z, one_z), one_z)
    # explicit double loop
    sq = {}
    for i, a in one_z.coeffs.items():
        for j, b in one_z.coeffs.items():
            sq[i + j] = sq.get(i + j, 0) + a * b
    cube = {}
    for i, a in sq.items():
        for j, b in one_z.coeffs.items():
            cube[i + j] = cube.get(i + j, 0) + a * b
    assert got.allclose(TrigPoly(cube), TOL)
    assert got.allclose(TrigPoly({0: 1, 1: 3, 2: 3, 3: 1}), TOL)


@settings(max_examples=50, deadline=None)
@given(polys(), polys(), polys())
def test_multiply_commutative_associative(f, g, h):
    assert max_coeff_diff(multiply(f, g), multiply(g, f)) <= TOL * 1e3
    lhs = multiply(multiply(f, g), h)
    rhs = multiply(f, multiply(g, h))
    assert max_coeff_diff(lhs, rhs) <= 1e-9


# -- flip / projection / hilbert / dilation -------------------------------------


def test_flip_examples():
    assert flip(TrigPoly.monomial(1)) == TrigPoly({-1: 1})
    assert flip(TrigPoly.constant(1)) == TrigPoly.constant(1)


@given(polys())
def test_flip_involution(f):
    assert flip(flip(f)) == f


@settings(max_examples=30, deadline=None)
@given(polys())
def test_flip_preserves_l2(f):
    assert lp_norm(flip(f), 2, 64) == pytest.approx(lp_norm(f, 2, 64), rel=1e-12, abs=1e-14)


def test_cauchy_projection_examples():
    f = TrigPoly({-1: 1, 0: 2, 1: 1})
    assert cauchy_projection(f) == TrigPoly({0: 2, 1: 1})
    g = TrigPoly({0: 1, 4: 2})
    assert cauchy_projection(g) == g


def test_cauchy_projection_hankel_example():
    b = TrigPoly.from_dense([1, 2, 3])
    f = TrigPoly.from_dense([1, 1])
    assert cauchy_projection(multiply(b, flip(f))).allclose(TrigPoly({0: 3, 1: 5, 2: 3}), TOL)


@given(polys())
def test_cauchy_projection_is_projection(f):
    p = cauchy_projection(f)
    assert cauchy_projection(p) == p
    rest = f - p
    assert not set(p.support()) & set(rest.support())
    assert max_coeff_diff(p + rest, f) == 0


def test_hilbert_examples():
    assert hilbert(TrigPoly.monomial(1)).allclose(TrigPoly({1: -1j}), TOL)
    assert hilbert(TrigPoly.constant(1)).is_zero
    cos = TrigPoly({1: 0.5, -1: 0.5})
    sin = TrigPoly({1: -0.5j, -1: 0.5j})
    assert hilbert(cos).allclose(sin, TOL)


@given(polys())
def test_hilbert_squared(f):
    assert max_coeff_diff(hilbert(hilbert(f)), -(f - TrigPoly.constant(f[0]))) <= 1e-12


def test_dilate2_examples():
    assert dilate2(TrigPoly.monomial(1)) == TrigPoly.monomial(2)
    assert dilate2(TrigPoly.constant(1)) == TrigPoly.constant(1)
    M = 32
    x = np.arange(M) * 2 * np.pi / M
    np.testing.assert_allclose(eval_grid(dilate2(TrigPoly({0: 1, 1: 1})), M), 1 + np.exp(2j * x), atol=TOL)


@settings(max_examples=30, deadline=None)
@given(polys(), st.sampled_from([1, 1.5, 2, 3]))
def test_dilate2_preserves_lp_on_even_grids(f, p):
    # samples of f(2x) on M points are two copies of f on M/2 points
    assert lp_norm(dilate2(f), p, 64) == pytest.approx(lp_norm(f, p, 32), rel=1e-10, abs=1e-12)


def test_to_conjugate_variable():
    assert to_conjugate_variable(TrigPoly.monomial(1)) == TrigPoly({-1: 1})
    assert to_conjugate_variable(TrigPoly.constant(1)) == TrigPoly.constant(1)
    with pytest.raises(ValueError):
        to_conjugate_variable(TrigPoly({-1: 1}))


@pytest.mark.parametrize("q", [1, 2])
def test_to_conjugate_variable_norms(q):
    rng = np.random.default_rng(5)
    for _ in range(10):
        f = TrigPoly.from_dense(rng.standard_normal(12) + 1j * rng.standard_normal(12))
        F = to_conjugate_variable(f)
        assert lp_norm(F, q, 128) == pytest.approx(lp_norm(f, q, 128), rel=1e-12)


# -- misc ------------------------------------------------------------------------


def test_zero_amplitudes_dropped():
    assert TrigPoly({0: 0, 3: 1}) == TrigPoly({3: 1})
    assert TrigPoly({5: 0}).is_zero


def test_json_round_trip():
    f = TrigPoly({-2: 1 + 1j, 0: 0.25, 7: -3j})
    assert TrigPoly.from_json_obj(f.to_json_obj()) == f


def test_grid_type():
    g = Grid(8)
    assert g.points[1] == pytest.approx(np.pi / 4)
    assert g.resolves(TrigPoly.monomial(3))
    assert not g.resolves(TrigPoly.monomial(4))
    with pytest.raises(ValueError):
        Grid(0)
