import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankeltrunc.atoms import (
    MOMENT_TOL,
    Atom,
    check_atom,
    constant_atom,
    dyadic_atom_family,
    make_atom,
    moment_order,
)


def riemann_moment(a, j):
    """Moment by an explicit loop over the cells."""
    h = 2 * math.pi / a.grid_size
    total = 0.0
    for i, v in enumerate(a.samples):
        if v:
            t = (i + 0.5) * h
            off = (t - a.center + math.pi) % (2 * math.pi) - math.pi
            total += v * off**j * h
    return total


def test_moment_order():
    assert moment_order(1) == 0
    assert moment_order(2 / 3) == 0
    assert moment_order(0.5) == 1
    assert moment_order(1 / 3) == 2
    with pytest.raises(ValueError):
        moment_order(1.5)


def test_q1_atom_mean_zero():
    a = make_atom(1.0, 2.0, 0.3, seed=1)
    assert a.m == 0
    assert abs(riemann_moment(a, 0)) <= 1e-10
    assert check_atom(a).passed


def test_q23_atom_normalization():
    a = make_atom(2 / 3, 1.0, 0.2, seed=2)
    assert a.m == 0
    assert a.sup_norm == pytest.approx((2 * 0.2) ** -1.5, rel=1e-12)
    assert check_atom(a).passed


def test_q12_atom_two_moments():
    a = make_atom(0.5, 5.0, 0.4, seed=3)
    assert a.m == 1
    for j in (0, 1):
        assert abs(riemann_moment(a, j)) <= 1e-10
    assert check_atom(a).passed


def test_atom_wraps_around_zero():
    a = make_atom(1.0, 0.05, 0.3, seed=4)
    assert check_atom(a).passed
    assert a.samples[-1] != 0 and a.samples[0] != 0


def test_atom_support():
    a = make_atom(1.0, 3.0, 0.25, seed=5)
    x = a.nodes
    outside = np.abs(x - 3.0) > 0.25
    assert np.all(a.samples[outside] == 0)


def test_check_atom_failures():
    a = make_atom(1.0, 1.0, 0.3, seed=6)
    doubled = check_atom(a.with_samples(2 * a.samples))
    assert not doubled.passed
    assert doubled.sup_excess == pytest.approx(a.size_bound, rel=1e-10)
    bumped = a.samples.copy()
    bumped[a.inside()] += 1e-6
    rep = check_atom(a.with_samples(bumped))
    assert not rep.passed
    inside_len = a.inside().sum() * a.cell
    assert rep.moment_residual == pytest.approx(1e-6 * inside_len, rel=1e-6)
    assert inside_len == pytest.approx(a.length, rel=0.02)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(1e-3, 1e3))
def test_moment_residual_linear_in_perturbation(seed, eps):
    a = make_atom(0.5, 1.0, 0.3, seed=seed, grid_size=1024)
    bump = np.where(a.inside(), 1.0, 0.0)
    r1 = check_atom(a.with_samples(a.samples + 1e-6 * bump)).moment_residual
    r2 = check_atom(a.with_samples(a.samples + 1e-6 * eps * bump)).moment_residual
    assert r2 == pytest.approx(eps * r1, rel=1e-4)


def test_constant_atom():
    a = constant_atom()
    assert check_atom(a).passed
    assert a.l1() == pytest.approx(2 * math.pi)


def test_family():
    fam = dyadic_atom_family(1.0, [np.pi / 8, np.pi / 16, np.pi / 32], seeds=range(3))
    assert len(fam) == 9
    assert all(check_atom(a).passed for a in fam)
    for a in fam:
        assert a.sup_norm == pytest.approx((2 * a.radius) ** -1.0, rel=1e-12)
    again = dyadic_atom_family(1.0, [np.pi / 8, np.pi / 16, np.pi / 32], seeds=range(3))
    assert all(np.array_equal(x.samples, y.samples) and x.center == y.center for x, y in zip(fam, again))


@pytest.mark.parametrize("q", [1.0, 2 / 3, 0.5])
def test_scaling_law(q):
    a = make_atom(q, 2.0, 0.4, seed=7)
    b = make_atom(q, 2.0, 0.2, seed=7)
    assert b.sup_norm / a.sup_norm == pytest.approx(2 ** (1 / q), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    st.sampled_from([1.0, 2 / 3, 0.5]),
    st.floats(0, 2 * math.pi),
    st.floats(0.02, 0.78),
    st.integers(0, 10_000),
)
def test_atom_invariants(q, center, radius, seed):
    a = make_atom(q, center, radius, seed=seed, grid_size=2048)
    rep = check_atom(a)
    assert rep.passed
    assert rep.moment_residual <= MOMENT_TOL
    assert a.l1() <= a.length ** (1 - 1 / q) * (1 + 1e-12)


def test_make_atom_rejects_bad_parameters():
    with pytest.raises(ValueError):
        make_atom(1.2, 0, 0.1, seed=0)
    with pytest.raises(ValueError):
        make_atom(1.0, 0, 1.0, seed=0)
    with pytest.raises(ValueError):
        make_atom(0.5, 0, 1e-4, seed=0, grid_size=64)


def test_json_round_trip():
    a = make_atom(0.5, 1.0, 0.3, seed=8, grid_size=256)
    obj = json.loads(a.dumps())
    assert set(obj) >= {"q", "center", "radius", "samples"}
    back = Atom.from_json_obj(obj)
    assert np.array_equal(back.samples, a.samples)
    assert (back.q, back.center, back.radius) == (a.q, a.center, a.radius)


def test_evaluate_is_step_lookup():
    a = make_atom(1.0, 1.0, 0.3, seed=9, grid_size=512)
    np.testing.assert_array_equal(a.evaluate(a.nodes), a.samples)
    np.testing.assert_array_equal(a.evaluate(a.nodes + 2 * np.pi), a.samples)
