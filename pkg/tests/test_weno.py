from __future__ import annotations

from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfweno.errors import ConfigurationError
from gfweno.models import BurgersModel, ShallowWaterModel
from gfweno.weno import (
    WenoOrder,
    interface_flux,
    interface_fluxes,
    reconstruct_with_weights,
    smoothness_indicators,
    split_with_matrix,
    weno_reconstruct_left,
    weno_reconstruct_right,
    weno_tables,
    weno_weights,
)


def test_order_validation():
    assert WenoOrder(5).k == 2
    with pytest.raises(ConfigurationError):
        WenoOrder(4)


@pytest.mark.parametrize(
    "k, linear",
    [
        (1, [Fr(1, 3), Fr(2, 3)]),
        (2, [Fr(1, 10), Fr(3, 5), Fr(3, 10)]),
        (3, [Fr(1, 35), Fr(12, 35), Fr(18, 35), Fr(4, 35)]),
    ],
)
def test_linear_weights(k, linear):
    assert list(weno_tables(k).exact_linear) == linear


def test_weno5_tables_classical():
    tab = weno_tables(2)
    assert list(tab.exact_coeffs[0]) == [Fr(1, 3), Fr(-7, 6), Fr(11, 6)]
    assert list(tab.exact_coeffs[1]) == [Fr(-1, 6), Fr(5, 6), Fr(1, 3)]
    assert list(tab.exact_coeffs[2]) == [Fr(1, 3), Fr(5, 6), Fr(-1, 6)]
    # beta_0 = 13/12 (a - 2b + c)^2 + 1/4 (a - 4b + 3c)^2 has a^2 coefficient 4/3
    assert tab.exact_indicators[0][0][0] == Fr(4, 3)
    v = np.array([1.0, 2.5, -0.5])
    expected = 13 / 12 * (v[0] - 2 * v[1] + v[2]) ** 2 + 0.25 * (v[0] - 4 * v[1] + 3 * v[2]) ** 2
    stencil = np.concatenate([v, [0.0, 0.0]])
    assert smoothness_indicators(stencil, 5)[0] == pytest.approx(expected)


def test_weno3_linear_data():
    beta = smoothness_indicators(np.array([0.0, 1.0, 2.0]), 3)
    np.testing.assert_allclose(beta, [1.0, 1.0])
    w = weno_weights(np.array([0.0, 1.0, 2.0]), 3)
    np.testing.assert_allclose(w, [1 / 3, 2 / 3])


@pytest.mark.parametrize("p", [3, 5, 7])
@given(c=st.floats(-1e3, 1e3, allow_subnormal=False))
@settings(max_examples=30, deadline=None)
def test_constants_reproduced_bitwise(p, c):
    stencil = np.full(p, c)
    assert weno_reconstruct_left(stencil, p) == c
    assert weno_reconstruct_right(stencil, p) == c


@pytest.mark.parametrize("p", [3, 5, 7])
def test_reflection_symmetry(p):
    rng = np.random.default_rng(p)
    v = rng.normal(size=(10, p))
    np.testing.assert_array_equal(weno_reconstruct_right(v, p), weno_reconstruct_left(v[:, ::-1], p))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_weights_sum_to_one_and_frozen_reconstruction(p):
    rng = np.random.default_rng(1)
    v = rng.normal(size=(50, p))
    w = weno_weights(v, p)
    np.testing.assert_allclose(w.sum(axis=-1), 1.0)
    np.testing.assert_allclose(reconstruct_with_weights(v, w, p), weno_reconstruct_left(v, p))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_smooth_reconstruction_order(p):
    """Cell averages of exp reconstruct exp at the right face with order p."""
    errors = []
    k = (p - 1) // 2
    offs = np.arange(-k, k + 1)
    for n in (10, 20, 40):
        dx = 1.0 / n
        x = np.arange(n) * dx
        factor = np.sinh(dx / 2) / (dx / 2)
        stencils = np.exp(x[:, None] + offs[None, :] * dx) * factor
        approx = weno_reconstruct_left(stencils, p)
        errors.append(np.max(np.abs(approx - np.exp(x + dx / 2))))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert orders[-1] > p - 0.5


def test_split_with_matrix_sums_to_flux():
    F = np.random.default_rng(0).normal(size=(4, 6, 2))
    P = np.tile(np.array([[0.2, 0.5], [0.1, -0.3]]), (4, 1, 1))
    s = split_with_matrix(F, P)
    np.testing.assert_allclose(s.plus + s.minus, F)


@pytest.mark.parametrize("p", [3, 5, 7])
@given(c0=st.floats(-5, 5), c1=st.floats(-5, 5))
@settings(max_examples=20, deadline=None)
def test_constant_modified_flux_preserved(p, c0, c1):
    """A constant nodal flux gives the same interface flux everywhere, hence zero RHS."""
    m = ShallowWaterModel()
    rng = np.random.default_rng(7)
    n = 30
    U = np.stack([rng.uniform(1.0, 2.0, n), rng.uniform(-1.0, 1.0, n)], axis=-1)
    F = np.tile([c0, c1], (n, 1))
    k = (p - 1) // 2
    out = interface_fluxes(F, U, m, p, k, n - k - 2)
    np.testing.assert_allclose(out, np.broadcast_to(F[0], out.shape), rtol=0, atol=1e-14 * max(1.0, abs(c0), abs(c1)))


def test_vectorized_matches_single():
    m = BurgersModel()
    x = np.linspace(0, 2, 25)
    U = (1.5 + np.sin(3 * x))[:, None]
    F = m.flux(U)
    vec = interface_fluxes(F, U, m, 5, 2, 21)
    for i in range(2, 22):
        np.testing.assert_allclose(vec[i - 2], interface_flux(F, U, m, 5, i), rtol=1e-14)
    with pytest.raises(IndexError):
        interface_flux(F, U, m, 5, 1)
