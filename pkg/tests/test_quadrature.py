from __future__ import annotations

from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfweno.errors import ConfigurationError
from gfweno.models import (
    BurgersModel,
    FrictionKind,
    FrictionLaw,
    Geometry,
    GhostedState,
    Grid,
    ShallowWaterModel,
    State,
)
from gfweno.quadrature import (
    Family,
    SingularityRegistry,
    SourceQuadrature,
    accumulate_bathymetry,
    build_global_flux,
    cell_source_integral,
    jump_cell,
    multistep_weights,
    reduced_weights,
    singular_cell_integral,
)

# Coefficient tables in the literature list beta_s first; these are in
# ascending order beta_0..beta_s.
PAPER_AB = {
    4: [Fr(-9, 24), Fr(37, 24), Fr(-59, 24), Fr(55, 24), Fr(0)],
    6: [Fr(c, 1440) for c in (-475, 2877, -7298, 9982, -7923, 4277)] + [Fr(0)],
    8: [Fr(c, 120960) for c in (-36799, 295767, -1041723, 2102243, -2664477, 2183877, -1152169, 434241)]
    + [Fr(0)],
}
PAPER_AM = {
    4: [Fr(1, 24), Fr(-5, 24), Fr(19, 24), Fr(9, 24)],
    6: [Fr(c, 1440) for c in (27, -173, 482, -798, 1427, 475)],
    # the printed AM8 table labels beta_4 as a second beta_3
    8: [Fr(c, 120960) for c in (1375, -11351, 41499, -88547, 123133, -121797, 139849, 36799)],
}


# {{{ weights


@pytest.mark.parametrize("q", [4, 6, 8])
def test_adams_bashforth_weights_match_tables(q):
    rule = multistep_weights("ab", q)
    assert rule.steps == q
    assert list(rule.exact) == PAPER_AB[q]
    assert not rule.implicit


@pytest.mark.parametrize("q", [4, 6, 8])
def test_adams_moulton_weights_match_tables(q):
    rule = multistep_weights("am", q)
    assert rule.steps == q - 1
    assert list(rule.exact) == PAPER_AM[q]
    assert rule.implicit


@pytest.mark.parametrize("family", ["ab", "am"])
@pytest.mark.parametrize("steps", range(1, 9))
def test_weights_sum_to_one(family, steps):
    assert sum(reduced_weights(family, steps)) == pytest.approx(1.0, abs=1e-14)


def test_reduced_rules():
    assert reduced_weights("am", 1) == (0.5, 0.5)
    assert reduced_weights("ab", 1) == (1.0, 0.0)
    assert reduced_weights("ab", 2) == (-0.5, 1.5, 0.0)
    rule = multistep_weights("am", 6)
    assert rule.reduced(2).steps == 2
    with pytest.raises(ConfigurationError):
        rule.reduced(rule.steps + 1)


def test_bad_orders_rejected():
    with pytest.raises(ConfigurationError):
        multistep_weights("am", 5)
    with pytest.raises(ConfigurationError):
        Family.parse("rk")


@pytest.mark.parametrize("family", ["ab", "am"])
@pytest.mark.parametrize("q", [4, 6, 8])
@given(coeffs=st.lists(st.floats(-3.0, 3.0), min_size=8, max_size=8))
@settings(max_examples=25, deadline=None)
def test_polynomial_exactness(family, q, coeffs):
    """Degree q-1 polynomials integrate exactly over the last interval."""
    rule = multistep_weights(family, q)
    s = rule.steps
    c = np.array(coeffs[:q])
    poly = np.polynomial.Polynomial(c)
    t = np.arange(s + 1, dtype=float)
    approx = float(np.dot(rule.weights, poly(t)))
    anti = poly.integ()
    exact = anti(s) - anti(s - 1)
    scale = max(1.0, float(np.sum(np.abs(c)) * s**q))
    assert abs(approx - exact) <= 1e-12 * scale


# }}}


# {{{ singular registry


def test_jump_cell_on_node_goes_right():
    g = Grid(-1.0, 1.0, 100)
    assert jump_cell(g, 0.0) == 50
    assert jump_cell(g, 0.005) == 50
    assert jump_cell(g, 0.5) == 75


def test_registry_validation():
    g = Grid(0.0, 1.0, 40)
    SingularityRegistry((5, 20)).validate(g, 6)
    with pytest.raises(ConfigurationError):
        SingularityRegistry((5, 10)).validate(g, 6)
    with pytest.raises(ConfigurationError):
        SingularityRegistry((40,)).validate(g, 3)


def test_cell_steps_schedule():
    reg = SingularityRegistry((10,))
    steps = reg.cell_steps(np.arange(8, 16), 4)
    np.testing.assert_array_equal(steps, [4, 4, 0, 1, 2, 3, 4, 4])


# }}}


# {{{ global flux


def _burgers_state(n=20, ghost=4):
    g = Grid(-1.0, 1.0, n)
    x = g.nodes(ghost)
    return GhostedState(g, ghost, np.exp(x)[:, None]), g


def test_primitive_anchored_at_first_node():
    m = BurgersModel(2, Geometry.linear())
    rule = multistep_weights("am", 4)
    st_, g = _burgers_state()
    gf = build_global_flux(st_, m, rule)
    R, mod = gf.physical(g.n_nodes)
    assert R[0, 0] == 0.0
    # for S = U^2 H_x with U = e^x, R(x) approximates (e^{2x} - e^{-2})/2
    x = g.nodes()
    np.testing.assert_allclose(R[:, 0], 0.5 * (np.exp(2 * x) - np.exp(-2)), rtol=1e-4)
    np.testing.assert_allclose(mod, m.flux(st_.values)[4:25] - R)


def test_stencils_leaving_the_mesh_give_nan():
    m = BurgersModel(2, Geometry.linear())
    g = Grid(-1.0, 1.0, 10)
    st_ = State(g, np.exp(g.nodes())[:, None])
    gf = build_global_flux(st_, m, multistep_weights("am", 6))
    R, _ = gf.physical(g.n_nodes)
    assert np.isnan(R[1:5]).all()


def test_cell_integral_matches_plan():
    m = BurgersModel(2, Geometry.linear())
    rule = multistep_weights("ab", 6)
    st_, g = _burgers_state(ghost=6)
    gf = build_global_flux(st_, m, rule)
    for j in (0, 7, 19):
        np.testing.assert_array_equal(cell_source_integral(st_, m, rule, j), gf.integrals[j + 6])
    with pytest.raises(IndexError):
        cell_source_integral(State(g, st_.physical), m, rule, 0)


@given(
    h=st.lists(st.floats(0.5, 3.0), min_size=31, max_size=31),
    q=st.lists(st.floats(-2.0, 2.0), min_size=31, max_size=31),
)
@settings(max_examples=25, deadline=None)
def test_mass_component_of_primitive_is_zero(h, q):
    geo = Geometry(H=lambda x, t=0.0: 0.1 * np.sin(x), dH=lambda x, t=0.0: 0.1 * np.cos(x))
    m = ShallowWaterModel(geometry=geo, friction=FrictionLaw(FrictionKind.MANNING, 0.05))
    g = Grid(0.0, 5.0, 24)
    U = GhostedState(g, 3, np.stack([h, q], axis=-1))
    gf = build_global_flux(U, m, multistep_weights("am", 4))
    R = gf.primitives[np.isfinite(gf.primitives[:, 0])]
    assert np.all(R[:, 0] == 0.0)


def test_singular_cell_integral_balances_flux():
    m = ShallowWaterModel()
    Ul = np.array([2.0, 3.0])
    Ur = m.admissible_jump(Ul, 0.0, 0.1)
    I = singular_cell_integral(m, Ul, Ur, 0.0, 0.1)
    np.testing.assert_allclose(I, m.flux(Ur) - m.flux(Ul), rtol=1e-12, atol=1e-12)


def test_water_mode_jump_on_lake():
    m = ShallowWaterModel()
    Ul, Ur = np.array([2.0, 0.0]), np.array([2.1, 0.0])
    I = singular_cell_integral(m, Ul, Ur, 0.0, 0.1, water_at_rest=True)
    np.testing.assert_allclose(I, m.flux(Ur) - m.flux(Ul), rtol=1e-14)


def test_bathymetry_accumulation_is_quadrature_exact_for_polynomials():
    geo = Geometry(H=lambda x, t=0.0: x**3 - x, dH=lambda x, t=0.0: 3 * x**2 - 1)
    m = ShallowWaterModel(geometry=geo)
    g = Grid(0.0, 2.0, 16)
    Ht = accumulate_bathymetry(m, g, multistep_weights("am", 4))
    np.testing.assert_allclose(Ht, geo.H(g.nodes()), atol=1e-13)


def test_plan_reduced_slots_have_finite_indices():
    g = Grid(0.0, 1.0, 30)
    rule = multistep_weights("am", 6)
    plan = SourceQuadrature.build(g, rule.steps, rule, SingularityRegistry((12,)))
    e = 12 + rule.steps
    assert plan.steps[e] == 0
    assert plan.steps[e + 2] == 2
    # unused slots point inside the stencil with zero weight
    assert plan.index[e + 2].min() >= e + 2 + 1 - 2
    assert np.all(plan.weight[e + 2, : rule.steps - 2] == 0.0)


# }}}
