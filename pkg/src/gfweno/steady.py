"""Discrete stationary solutions and exact steady states.

A discrete steady state of the global-flux scheme satisfies

    F(U_{j+1}) - F(U_j) = I_j(U)

for every cell, which is a multi-step integrator for ``dF/dx = S H_x + s``
written in flux variables. :func:`steady_sweep` marches it across the mesh
and inverts the flux at each node on a fixed regime branch.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from gfweno.errors import ConfigurationError, IterationError, NoRootError, SonicStateError
from gfweno.models import (
    BurgersModel,
    FluxBranch,
    GhostedState,
    Grid,
    ModelSpec,
    ShallowWaterModel,
    State,
    solve_energy_depth,
)
from gfweno.quadrature import (
    MultiStepRule,
    SingularityRegistry,
    SourceQuadrature,
    source_density,
)

logger = logging.getLogger(__name__)

Array = Any


def invert_flux(model: ModelSpec, F_target: Array, branch: FluxBranch) -> Array:
    """State ``U`` on ``branch`` with ``F(U) = F_target``."""
    return model.invert_flux(F_target, branch)


def admissible_jump(
    model: ModelSpec,
    U_left: Array,
    H_left: float,
    H_right: float,
    branch: FluxBranch | None = None,
) -> Array:
    """Right state linked to ``U_left`` by the stationary relations across a jump of ``H``."""
    return model.admissible_jump(U_left, H_left, H_right, branch)


# {{{ sweep


@dataclass
class SteadyProblem:
    """Inputs of a stationary sweep over a mesh extended by ``ghost`` nodes.

    Seeds occupy the first ``s`` extended nodes. They come from ``seeds``
    when given, else from ``exact`` evaluated at those nodes, else from an
    RK4 integration of the flux ODE started at ``initial`` (the state at
    ``x_start``).
    """

    model: ModelSpec
    rule: MultiStepRule
    grid: Grid
    branch: FluxBranch
    registry: SingularityRegistry = field(default_factory=SingularityRegistry)
    exact: Callable[[Array], Array] | None = None
    seeds: Array | None = None
    initial: Array | None = None
    ghost: int = 0
    water_at_rest: bool = False
    tol: float = 1.0e-13
    max_iterations: int = 100

    def __post_init__(self) -> None:
        if self.seeds is not None:
            seeds = np.asarray(self.seeds, dtype=np.float64)
            if seeds.ndim == 1:
                seeds = seeds[:, None]
            if seeds.shape != (self.rule.steps, self.model.components):
                raise ConfigurationError(
                    f"expected {self.rule.steps} seed states, got shape {seeds.shape}"
                )
            self.seeds = seeds
        elif self.exact is None and self.initial is None:
            raise ConfigurationError("a steady problem needs seeds, an exact solution or an initial state")


def _initial_seeds(problem: SteadyProblem, x: Array, t: float) -> Array:
    s = problem.rule.steps
    if problem.seeds is not None:
        return problem.seeds
    if problem.exact is not None:
        return np.asarray(problem.exact(x[:s]), dtype=np.float64).reshape(s, -1)
    return rk4_seeds(
        problem.model, problem.initial, problem.grid.x_start, x[:s], problem.branch, t,
        dx=problem.grid.dx,
    )


def rk4_seeds(
    model: ModelSpec,
    U0: Array,
    x0: float,
    targets: Array,
    branch: FluxBranch,
    t: float = 0.0,
    substeps: int = 10,
    dx: float | None = None,
) -> Array:
    """Integrate ``dF/dx = S(U(F)) H_x + s`` from ``x0`` to each target node.

    Each mesh interval is covered by ``substeps`` classical RK4 steps; targets
    left of ``x0`` are reached by integrating backwards.
    """
    U0 = np.asarray(U0, dtype=np.float64).reshape(-1)
    F0 = model.flux(U0)

    def rhs(x: float, F: Array) -> Array:
        U = model.invert_flux(F, branch)
        return source_density(model, U[None, :], np.array([x]), t)[0]

    targets = np.asarray(targets, dtype=np.float64)
    if dx is None:
        dx = float(targets[1] - targets[0]) if targets.size > 1 else 1.0
    out = []
    for xt in targets:
        n_steps = max(1, int(np.ceil(abs(xt - x0) / dx * substeps - 1.0e-9)))
        h = (xt - x0) / n_steps
        F, x = F0.copy(), x0
        for _ in range(n_steps):
            k1 = rhs(x, F)
            k2 = rhs(x + h / 2, F + h / 2 * k1)
            k3 = rhs(x + h / 2, F + h / 2 * k2)
            k4 = rhs(x + h, F + h * k3)
            F = F + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            x += h
        out.append(model.invert_flux(F, branch) if xt != x0 else U0)
    return np.array(out)


def steady_sweep_extended(problem: SteadyProblem, t: float = 0.0) -> GhostedState:
    """Discrete stationary solution on the ghost-extended mesh."""
    model, rule, grid = problem.model, problem.rule, problem.grid
    G = problem.ghost
    plan = SourceQuadrature.build(grid, G, rule, problem.registry)
    x = grid.nodes(G)
    n_ext = x.size
    s = rule.steps
    if n_ext < s:
        raise ConfigurationError(f"mesh has {n_ext} nodes but the rule needs {s} seeds")

    bathy = plan.bathymetry(model, t) if problem.water_at_rest else None
    U = np.full((n_ext, model.components), np.nan)
    U[:s] = _initial_seeds(problem, x, t)
    model.check_admissible(U[:s], "sweep seeds")

    for e in range(s, n_ext):
        c = e - 1
        if plan.steps[c] == 0:
            Hl, Hr = model.H(x[c : c + 2], t)
            U[e] = model.admissible_jump(U[c], float(Hl), float(Hr), problem.branch)
            continue
        U[e] = _sweep_node(problem, plan, U, x, c, t, bathy)

    return GhostedState(grid, G, U)


def _sweep_node(
    problem: SteadyProblem,
    plan: SourceQuadrature,
    U: Array,
    x: Array,
    c: int,
    t: float,
    bathy: Array | None,
) -> Array:
    model = problem.model
    e = c + 1
    F_prev = model.flux(U[c])
    implicit = plan.weight[c, -1] != 0.0

    def update(guess: Array) -> Array:
        U[e] = guess
        return F_prev + plan.cell_integral(model, U, x, c, t, bathy)

    def invert(F: Array) -> Array:
        try:
            return model.invert_flux(F, problem.branch)
        except NoRootError as exc:
            raise SonicStateError(
                f"sweep left the {problem.branch.value} branch at node {e - problem.ghost} "
                f"(x = {x[e]:.6g}): {exc}"
            ) from exc

    if not implicit:
        return invert(update(U[c]))

    F = update(U[c])
    last_diff = np.inf
    for it in range(problem.max_iterations):
        F_new = update(invert(F))
        diff = float(np.max(np.abs(F_new - F)))
        if diff > last_diff:
            F_new = F + 0.5 * (F_new - F)
        F = F_new
        if diff <= problem.tol * max(1.0, float(np.max(np.abs(F)))):
            return invert(F)
        last_diff = diff

    raise IterationError(
        f"implicit sweep did not converge at node {e - problem.ghost} "
        f"after {problem.max_iterations} iterations",
        residual=last_diff,
    )


def steady_sweep(problem: SteadyProblem, t: float = 0.0) -> State:
    """Discrete stationary solution on the physical nodes."""
    return steady_sweep_extended(problem, t).to_state()


def sweep_residual(state: GhostedState, problem: SteadyProblem, t: float = 0.0) -> float:
    """``max |F(U_{j+1}) - F(U_j) - I_j|`` over the cells with a full stencil."""
    plan = SourceQuadrature.build(state.grid, state.ghost, problem.rule, problem.registry)
    model = problem.model
    bathy = plan.bathymetry(model, t) if problem.water_at_rest else None
    integrals = plan.integrals(model, state.values, t, bathy)
    F = model.flux(state.values)
    res = F[1:] - F[:-1] - integrals
    return float(np.nanmax(np.abs(res[problem.rule.steps - 1 :])))


# }}}


# {{{ exact steady states


def burgers_steady(model: BurgersModel, x: Array, C: float = 1.0, t: float = 0.0) -> Array:
    """``U`` with ``U^{2-p}/(2-p) - H = C`` (``U e^{-H} = C`` when ``p = 2``)."""
    H = model.H(np.asarray(x, dtype=np.float64), t)
    p = model.exponent
    if p == 2:
        U = C * np.exp(H)
    elif p == 1:
        U = C + H
    else:
        base = (2 - p) * (C + H)
        if np.any(base <= 0.0):
            raise SonicStateError(f"no positive steady state for p={p} with C={C}")
        U = base ** (1.0 / (2 - p))
    return U[:, None]


def bernoulli_constant(model: ShallowWaterModel, h: float, q: float, H: float) -> float:
    """``q^2/(2 h^2) + g h - g H``."""
    return 0.5 * q * q / (h * h) + model.g * h - model.g * H


def bernoulli_steady(
    model: ShallowWaterModel,
    x: Array,
    q: float,
    energy: float,
    branch: FluxBranch,
    t: float = 0.0,
) -> Array:
    """Nodal ``(h, q)`` with ``q`` fixed and ``q^2/(2h^2) + g h - g H = energy``."""
    H = model.H(np.asarray(x, dtype=np.float64), t)
    try:
        h = solve_energy_depth(np.full_like(H, q), energy + model.g * H, model.g, branch)
    except NoRootError as exc:
        raise SonicStateError(f"steady state leaves the {branch.value} branch: {exc}") from exc
    return np.stack([h, np.full_like(h, q)], axis=-1)


def transcritical_steady(
    model: ShallowWaterModel, x: Array, q: float, x_crest: float, H_crest: float
) -> Array:
    """Smooth transcritical flow, critical at the crest of the bottom.

    Subcritical upstream of ``x_crest`` and supercritical downstream (for
    ``q > 0``). The node at the crest takes the critical depth.
    """
    g = model.g
    hc = float(np.cbrt(q * q / g))
    energy = 1.5 * g * hc - g * H_crest
    x = np.asarray(x, dtype=np.float64)
    H = model.H(x)
    target = energy + g * H
    # round-off can push the target a hair below the critical minimum
    target = np.maximum(target, 1.5 * g * hc)

    upstream = x < x_crest if q > 0 else x > x_crest
    h = np.empty_like(x)
    qa = np.full_like(x, q)
    if np.any(upstream):
        h[upstream] = solve_energy_depth(qa[upstream], target[upstream], g, FluxBranch.SWE_SUBCRITICAL)
    down = ~upstream
    if np.any(down):
        h[down] = solve_energy_depth(qa[down], target[down], g, FluxBranch.SWE_SUPERCRITICAL)
    h[np.isclose(x, x_crest, rtol=0.0, atol=1.0e-12)] = hc
    return np.stack([h, qa], axis=-1)


@dataclass(frozen=True)
class FrictionProfile:
    """Closed-form steady state with friction ``k h |q|`` and prescribed surface ``z``.

    ``z(x) = a - b (c x e^{cos(4 pi x)} - 1/e) / (e - 1/e)`` and
    ``1/h^2 = 1/h0^2 + (2 g/q0^2)(z(x0) - z) - 2 k (x - x0)``; the depth
    below the reference level is ``H = h - z``.
    """

    h0: float
    q0: float
    a: float
    b: float
    c: float
    k: float
    g: float = 1.0
    x0: float = 0.0

    def z(self, x: Array) -> Array:
        x = np.asarray(x, dtype=np.float64)
        e = np.e
        return self.a - self.b * (self.c * x * np.exp(np.cos(4 * np.pi * x)) - 1 / e) / (e - 1 / e)

    def dz(self, x: Array) -> Array:
        x = np.asarray(x, dtype=np.float64)
        e = np.e
        ecos = np.exp(np.cos(4 * np.pi * x))
        return -self.b * self.c * ecos * (1 - 4 * np.pi * x * np.sin(4 * np.pi * x)) / (e - 1 / e)

    def depth(self, x: Array) -> Array:
        x = np.asarray(x, dtype=np.float64)
        inv2 = (
            1.0
            + 2.0 * self.h0**2 * self.g / self.q0**2 * (self.z(self.x0) - self.z(x))
            - 2.0 * self.k * self.h0**2 * (x - self.x0)
        )
        if np.any(inv2 <= 0.0):
            raise ConfigurationError("friction profile has no finite depth on this interval")
        return self.h0 / np.sqrt(inv2)

    def H(self, x: Array, t: float = 0.0) -> Array:
        return self.depth(x) - self.z(x)

    def dH(self, x: Array, t: float = 0.0) -> Array:
        # from -q^2 h_x / h^3 + g z_x = -k q^2
        h = self.depth(x)
        q2 = self.q0**2
        hx = h**3 * (self.g * self.dz(x) + self.k * q2) / q2
        return hx - self.dz(x)

    def state(self, x: Array) -> Array:
        h = self.depth(x)
        return np.stack([h, np.full_like(h, self.q0)], axis=-1)


# }}}


def steady_residual(
    state: State | GhostedState,
    model: ModelSpec,
    rule: MultiStepRule,
    registry: SingularityRegistry | None = None,
    t: float = 0.0,
    **config: Any,
) -> float:
    """``max |dU/dt|`` of the global-flux scheme at ``state``.

    A plain :class:`State` has its ghost band filled by degree-0
    extrapolation; pass a :class:`GhostedState` to control the ghost values.
    Extra keywords are forwarded to :class:`gfweno.solver.SchemeConfig`.
    """
    from gfweno.solver import BoundaryPolicy, Frozen, SchemeConfig, Solver
    from gfweno.weno import WenoOrder

    config.setdefault("weno", WenoOrder(3))
    grid = state.grid
    if isinstance(state, GhostedState):
        boundary = Frozen.from_ghosted(state)
    else:
        boundary = BoundaryPolicy()
    cfg = SchemeConfig(rule=rule, registry=registry or SingularityRegistry(), boundary=boundary, **config)
    solver = Solver(model, grid, cfg)
    values = state.physical if isinstance(state, GhostedState) else state.values
    return float(np.max(np.abs(solver.rhs(values, t))))
