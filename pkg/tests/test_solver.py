from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfweno.errors import BlowUpError, ConfigurationError, DivergenceError, DomainError
from gfweno.models import BurgersModel, Geometry, GhostedState, Grid, ShallowWaterModel, State
from gfweno.quadrature import SingularityRegistry, build_global_flux, multistep_weights
from gfweno.solver import (
    BoundaryPolicy,
    DirichletExact,
    Extrapolate,
    Frozen,
    Periodic,
    SchemeConfig,
    Solver,
    SubcriticalInlet,
    SubcriticalOutlet,
    SupercriticalInlet,
    run_to_time,
)
from gfweno.weno import WenoOrder


def _swe_solver(n=40, boundary=None, rule=("am", 4), p=5, **kw):
    geo = Geometry(H=lambda x, t=0.0: 0.1 * np.sin(np.asarray(x)), dH=lambda x, t=0.0: 0.1 * np.cos(np.asarray(x)))
    model = ShallowWaterModel(geometry=geo)
    cfg = SchemeConfig(
        weno=WenoOrder(p),
        rule=multistep_weights(*rule) if rule else None,
        boundary=boundary or BoundaryPolicy(),
        **kw,
    )
    return Solver(model, Grid(0.0, 5.0, n), cfg)


# {{{ configuration


def test_ghost_width():
    assert SchemeConfig(weno=WenoOrder(7), rule=multistep_weights("ab", 8)).ghost_width == 3 + 8
    assert SchemeConfig(weno=WenoOrder(3)).ghost_width == 2


def test_config_validation():
    with pytest.raises(ConfigurationError):
        SchemeConfig(cfl=1.2)
    with pytest.raises(ConfigurationError):
        SchemeConfig(dt_exponent=0.5)
    with pytest.raises(ConfigurationError):
        SchemeConfig(water_at_rest_fix=True)
    with pytest.raises(ConfigurationError):
        Solver(BurgersModel(), Grid(0, 1, 20), SchemeConfig(registry=SingularityRegistry((3,))))
    with pytest.raises(ConfigurationError):
        SubcriticalOutlet()
    with pytest.raises(ConfigurationError):
        SubcriticalOutlet(h=1.0, eta=1.0)


# }}}


# {{{ boundaries


def test_boundary_fills():
    solver = _swe_solver(
        boundary=BoundaryPolicy(left=SubcriticalInlet(q=0.7), right=SubcriticalOutlet(eta=1.5))
    )
    G = solver.ghost
    U = np.tile([1.2, 0.3], (41, 1))
    ext = solver.extend(U)
    np.testing.assert_array_equal(ext[:G, 0], 1.2)
    np.testing.assert_array_equal(ext[:G, 1], 0.7)
    H = solver.model.H(solver.x[G + 41 :])
    np.testing.assert_allclose(ext[G + 41 :, 0], 1.5 + H)
    np.testing.assert_array_equal(ext[G + 41 :, 1], 0.3)

    solver = _swe_solver(boundary=BoundaryPolicy(left=SupercriticalInlet(0.5, 3.0), right=Extrapolate()))
    ext = solver.extend(U)
    np.testing.assert_array_equal(ext[:G], np.tile([0.5, 3.0], (G, 1)))
    np.testing.assert_array_equal(ext[G + 41 :], np.tile([1.2, 0.3], (G, 1)))


def test_dirichlet_uses_time():
    sol = lambda x, t: np.stack([1.0 + 0 * x, t + x], axis=-1)  # noqa: E731
    solver = _swe_solver(boundary=BoundaryPolicy(left=DirichletExact(sol), right=DirichletExact(sol)))
    ext = solver.extend(np.tile([1.0, 0.0], (41, 1)), t=0.25)
    G = solver.ghost
    np.testing.assert_allclose(ext[:G, 1], 0.25 + solver.x[:G])


def test_periodic_fill_wraps():
    solver = _swe_solver(boundary=Periodic(), rule=None)
    G = solver.ghost
    U = np.stack([1.0 + 0.1 * np.arange(41), np.zeros(41)], axis=-1)
    U[-1] = U[0]
    ext = solver.extend(U)
    np.testing.assert_array_equal(ext[:G], U[-1 - G : -1])
    np.testing.assert_array_equal(ext[G + 41 :], U[1 : 1 + G])


def test_frozen_boundary_copies_ghosts():
    g = Grid(0.0, 1.0, 10)
    vals = np.arange(17.0)[:, None]
    pol = Frozen.from_ghosted(GhostedState(g, 3, vals))
    solver = Solver(BurgersModel(), g, SchemeConfig(boundary=pol))
    assert solver.ghost == 2
    with pytest.raises(ValueError):
        solver.extend(np.ones(11))


# }}}


# {{{ time stepping


def test_cfl_dt_and_exponent():
    solver = _swe_solver(rule=None)
    U = np.tile([1.0, 0.0], (41, 1))
    c = np.sqrt(9.81)
    assert solver.cfl_dt(U) == pytest.approx(0.45 * solver.grid.dx / c, rel=1e-12)
    solver2 = _swe_solver(rule=None, dt_exponent=2.0)
    assert solver2.cfl_dt(U) == pytest.approx(0.45 * solver.grid.dx**2 / c, rel=1e-12)


def test_run_to_time_hits_final_time_exactly():
    solver = _swe_solver(n=20)
    U = np.stack([1.5 + solver.model.H(solver.grid.nodes()) * 0, np.full(21, 0.2)], axis=-1)
    res = solver.run_to_time(U, 0.123)
    assert res.t == 0.123
    assert res.steps >= 1
    with pytest.raises(ConfigurationError):
        solver.run_to_time(U, -1.0)


def test_max_steps_raises_divergence():
    solver = _swe_solver(n=20, max_steps=2)
    U = np.tile([1.5, 0.2], (21, 1))
    with pytest.raises(DivergenceError):
        solver.run_to_time(U, 1.0)


def test_negative_depth_is_a_blow_up():
    solver = _swe_solver(n=20, rule=None)
    U = np.tile([1e-3, 0.0], (21, 1))
    U[10, 1] = 5.0
    with pytest.raises((BlowUpError, DomainError)):
        solver.ssp_rk3_step(U, 0.0, 0.05)


def test_ssp_rk3_is_third_order():
    """A constant state with source ``U`` solves ``U' = U`` on a periodic mesh."""
    model = BurgersModel(1, Geometry.linear(1.0))
    grid = Grid(0.0, 1.0, 4)
    solver = Solver(model, grid, SchemeConfig(boundary=Periodic()))
    errors = []
    for n in (10, 20, 40):
        U = np.ones((5, 1))
        dt = 1.0 / n
        for i in range(n):
            U = solver.ssp_rk3_step(U, i * dt, dt)
        errors.append(abs(U[2, 0] - np.e))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert orders[-1] == pytest.approx(3.0, abs=0.2)


def test_run_to_steady_stops_on_plateau():
    model = BurgersModel(2, Geometry.linear(0.5))
    grid = Grid(-1.0, 1.0, 20)
    from gfweno.steady import burgers_steady

    sol = lambda x, t: burgers_steady(model, x)  # noqa: E731
    cfg = SchemeConfig(
        weno=WenoOrder(3),
        rule=multistep_weights("am", 4),
        boundary=BoundaryPolicy(DirichletExact(sol), DirichletExact(sol)),
        steady_tol=0.0,
        plateau_steps=50,
    )
    solver = Solver(model, grid, cfg)
    res = solver.run_to_steady(sol(grid.nodes(), 0.0))
    assert res.converged
    assert res.residuals[-1] <= solver._roundoff_floor(res.state.values)
    res = solver.run_to_steady(sol(grid.nodes(), 0.0), max_time=1e-3)
    assert not res.converged


def test_module_level_run_to_time():
    solver = _swe_solver(n=20)
    U = State(solver.grid, np.tile([1.5, 0.2], (21, 1)))
    out = run_to_time(U, solver.model, solver.config, 0.01)
    np.testing.assert_array_equal(out.values, solver.run_to_time(U, 0.01).state.values)


# }}}


# {{{ conservation


def _periodic_swe(p=5, rule=("am", 6)):
    model = ShallowWaterModel()
    cfg = SchemeConfig(weno=WenoOrder(p), rule=multistep_weights(*rule), boundary=Periodic())
    grid = Grid(0.0, 2 * np.pi, 64)
    return Solver(model, grid, cfg)


def test_periodic_mass_conservation():
    solver = _periodic_swe()
    x = solver.grid.nodes()
    U = np.stack([2.0 + 0.3 * np.sin(x), 0.5 + 0.2 * np.cos(2 * x)], axis=-1)
    U[-1] = U[0]
    mass0 = U[:-1, 0].sum()
    dt = solver.cfl_dt(U)
    for i in range(1000):
        U = solver.ssp_rk3_step(U, i * dt, dt)
    assert abs(U[:-1, 0].sum() - mass0) <= 1e-12 * mass0


@given(
    h=st.lists(st.floats(0.5, 3.0), min_size=41, max_size=41),
    q=st.lists(st.floats(-2.0, 2.0), min_size=41, max_size=41),
)
@settings(max_examples=25, deadline=None)
def test_mass_primitive_is_bitwise_zero(h, q):
    solver = _swe_solver(n=40, rule=("ab", 6))
    U = np.stack([h, q], axis=-1)
    gf = build_global_flux(GhostedState(solver.grid, solver.ghost, solver.extend(U)), solver.model, solver.config.rule)
    R = gf.primitives[np.isfinite(gf.primitives[:, 0])]
    assert np.all(R[:, 0] == 0.0)


def test_deterministic():
    solver = _swe_solver(n=30)
    U = np.stack([1.5 + 0.1 * np.sin(solver.grid.nodes()), np.full(31, 0.2)], axis=-1)
    a = solver.run_to_time(U, 0.05).state.values
    b = solver.run_to_time(U, 0.05).state.values
    assert a.tobytes() == b.tobytes()


# }}}
