"""Semi-discrete right-hand side, ghost-node boundaries and SSP-RK3 drivers."""

from __future__ import annotations

import logging
import time as _time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from gfweno.errors import BlowUpError, ConfigurationError, DivergenceError, DomainError
from gfweno.models import GhostedState, Grid, ModelSpec, ShallowWaterModel, State
from gfweno.quadrature import (
    MultiStepRule,
    SingularityRegistry,
    SourceQuadrature,
    assemble_global_flux,
    source_density,
)
from gfweno.weno import WENO_EPS, WenoOrder, interface_fluxes

logger = logging.getLogger(__name__)

Array = Any


# {{{ boundaries


@dataclass(frozen=True)
class GhostContext:
    """What a boundary needs to know to fill its ghost rows."""

    x: Array
    depth: Array | None
    t: float
    ghost: int
    n_nodes: int


class Side:
    """Boundary condition on one side; fills ``rows`` next to physical row ``inner``."""

    def fill(self, U: Array, rows: Array, inner: int, ctx: GhostContext) -> None:
        raise NotImplementedError


@dataclass(frozen=True)
class Extrapolate(Side):
    """Degree-0 extrapolation of every component."""

    def fill(self, U: Array, rows: Array, inner: int, ctx: GhostContext) -> None:
        U[rows] = U[inner]


@dataclass(frozen=True)
class DirichletExact(Side):
    """Ghost values from a known solution ``U(x, t)`` returning shape ``(n, M)``.

    ``hold=True`` also freezes the boundary node itself (its time derivative
    is set to zero); meant for stationary boundary data.
    """

    solution: Callable[[Array, float], Array]
    hold: bool = False

    def fill(self, U: Array, rows: Array, inner: int, ctx: GhostContext) -> None:
        U[rows] = self.solution(ctx.x[rows], ctx.t)


@dataclass(frozen=True)
class FixedGhosts(Side):
    """Ghost values held fixed, e.g. taken from a stationary sweep."""

    values: Array

    def fill(self, U: Array, rows: Array, inner: int, ctx: GhostContext) -> None:
        U[rows] = self.values


@dataclass(frozen=True)
class SubcriticalInlet(Side):
    """Prescribed discharge; depth extrapolated from the boundary node."""

    q: float

    def fill(self, U: Array, rows: Array, inner: int, ctx: GhostContext) -> None:
        U[rows, 0] = U[inner, 0]
        U[rows, 1] = self.q


@dataclass(frozen=True)
class SubcriticalOutlet(Side):
    """Prescribed depth (or free surface ``eta = h - H``); discharge extrapolated."""

    h: float | None = None
    eta: float | None = None

    def __post_init__(self) -> None:
        if (self.h is None) == (self.eta is None):
            raise ConfigurationError("give exactly one of h and eta for a subcritical outlet")

    def fill(self, U: Array, rows: Array, inner: int, ctx: GhostContext) -> None:
        if self.h is not None:
            U[rows, 0] = self.h
        else:
            if ctx.depth is None:
                raise ConfigurationError("a free-surface outlet needs the bottom depth")
            U[rows, 0] = self.eta + ctx.depth[rows]
        U[rows, 1] = U[inner, 1]


@dataclass(frozen=True)
class SupercriticalInlet(Side):
    h: float
    q: float

    def fill(self, U: Array, rows: Array, inner: int, ctx: GhostContext) -> None:
        U[rows, 0] = self.h
        U[rows, 1] = self.q


@dataclass(frozen=True)
class BoundaryPolicy:
    left: Side = field(default_factory=Extrapolate)
    right: Side = field(default_factory=Extrapolate)
    periodic: bool = False

    @classmethod
    def make_periodic(cls) -> BoundaryPolicy:
        return cls(periodic=True)

    def fill(self, U: Array, ctx: GhostContext) -> None:
        G, n = ctx.ghost, ctx.n_nodes
        if G == 0:
            return
        if self.periodic:
            N = n - 1
            U[G + N] = U[G]
            U[:G] = U[N : N + G]
            U[G + n :] = U[G + 1 : 2 * G + 1]
            return
        self.left.fill(U, np.arange(G), G, ctx)
        self.right.fill(U, np.arange(G + n, 2 * G + n), G + n - 1, ctx)


def Periodic() -> BoundaryPolicy:  # noqa: N802
    return BoundaryPolicy.make_periodic()


class Frozen:
    """Ghost bands copied from an extended state, on both sides."""

    @staticmethod
    def from_ghosted(state: GhostedState) -> BoundaryPolicy:
        G = state.ghost
        return BoundaryPolicy(
            left=FixedGhosts(state.values[:G].copy()),
            right=FixedGhosts(state.values[G + state.grid.n_nodes :].copy()),
        )


# }}}


# {{{ configuration


@dataclass(frozen=True)
class SchemeConfig:
    """Spatial scheme and run controls.

    ``rule=None`` selects the non-well-balanced baseline, which reconstructs
    ``F(U)`` and adds the source pointwise.
    """

    weno: WenoOrder = field(default_factory=lambda: WenoOrder(3))
    rule: MultiStepRule | None = None
    cfl: float = 0.45
    boundary: BoundaryPolicy = field(default_factory=BoundaryPolicy)
    water_at_rest_fix: bool = False
    registry: SingularityRegistry = field(default_factory=SingularityRegistry)
    steady_tol: float = 1.0e-13
    max_steps: int = 1_000_000
    #: a run is also steady once its residual stalls below
    #: ``plateau_factor * eps * max|F| / dx`` for ``plateau_steps`` steps
    plateau_steps: int = 200
    plateau_factor: float = 1.0e3
    #: give up (unconverged) after this many steps without a 10% improvement
    stall_steps: int = 20_000
    #: ``dt`` scales like ``dx ** dt_exponent``; values above 1 shrink the
    #: third-order time error below the spatial one in convergence studies
    dt_exponent: float = 1.0
    #: regularization of the smoothness indicators
    weno_eps: float = WENO_EPS

    def __post_init__(self) -> None:
        if not 0.0 < self.cfl < 1.0:
            raise ConfigurationError(f"CFL must lie in (0, 1): {self.cfl}")
        if self.dt_exponent < 1.0:
            raise ConfigurationError(f"dt exponent must be >= 1: {self.dt_exponent}")
        if self.rule is None and self.water_at_rest_fix:
            raise ConfigurationError("the water-at-rest correction needs a multi-step rule")

    @property
    def well_balanced(self) -> bool:
        return self.rule is not None

    @property
    def ghost_width(self) -> int:
        s = self.rule.steps if self.rule is not None else 1
        return self.weno.k + max(s, 1)


# }}}


# {{{ solver


@dataclass
class RunResult:
    state: State
    t: float
    steps: int
    wall_time: float
    converged: bool = True
    residuals: list[float] = field(default_factory=list)


class Solver:
    """Global-flux WENO scheme for one model on one mesh."""

    def __init__(self, model: ModelSpec, grid: Grid, config: SchemeConfig) -> None:
        self.model = model
        self.grid = grid
        self.config = config
        self.ghost = G = config.ghost_width
        self.x = grid.nodes(G)

        self.plan: SourceQuadrature | None = None
        self.bathymetry: Array | None = None
        if config.rule is not None:
            self.plan = SourceQuadrature.build(grid, G, config.rule, config.registry)
            if config.water_at_rest_fix:
                if not isinstance(model, ShallowWaterModel):
                    raise ConfigurationError("the water-at-rest correction applies to shallow water only")
                self.bathymetry = self.plan.bathymetry(model)
        elif config.registry:
            raise ConfigurationError("jump cells are only meaningful for a well-balanced scheme")

        depth = self.bathymetry
        if depth is None and isinstance(model, ShallowWaterModel):
            depth = model.H(self.x)
        self._depth = depth

    # {{{ spatial operator

    def extend(self, U: Array, t: float = 0.0) -> Array:
        """Physical values ``(N+1, M)`` to an extended table with filled ghosts."""
        G = self.ghost
        U = np.asarray(U, dtype=np.float64)
        if U.ndim == 1:
            U = U[:, None]
        ext = np.empty((U.shape[0] + 2 * G, U.shape[1]))
        ext[G : G + U.shape[0]] = U
        ctx = GhostContext(self.x, self._depth, t, G, self.grid.n_nodes)
        self.config.boundary.fill(ext, ctx)
        return ext

    def global_flux(self, U_ext: Array, t: float = 0.0):
        if self.plan is None:
            raise ConfigurationError("the baseline scheme has no global flux")
        return assemble_global_flux(self.plan, self.model, U_ext, t, self.bathymetry)

    def rhs_extended(self, U_ext: Array, t: float = 0.0) -> Array:
        G, n = self.ghost, self.grid.n_nodes
        self.model.check_admissible(U_ext, f"t = {t:.6g}")
        if self.plan is not None:
            nodal = self.global_flux(U_ext, t).modified
        else:
            nodal = self.model.flux(U_ext)

        flux = interface_fluxes(
            nodal, U_ext, self.model, self.config.weno, G - 1, G + n - 1, eps=self.config.weno_eps
        )
        out = -(flux[1:] - flux[:-1]) / self.grid.dx
        if self.plan is None:
            sl = slice(G, G + n)
            out = out + source_density(self.model, U_ext[sl], self.x[sl], t)
        bc = self.config.boundary
        if bc.periodic:
            out[-1] = out[0]
        else:
            if getattr(bc.left, "hold", False):
                out[0] = 0.0
            if getattr(bc.right, "hold", False):
                out[-1] = 0.0
        return out

    def rhs(self, U: Array, t: float = 0.0) -> Array:
        """``dU/dt`` on the physical nodes."""
        return self.rhs_extended(self.extend(U, t), t)

    # }}}

    # {{{ time stepping

    def cfl_dt(self, U: Array, t: float = 0.0) -> float:
        """``CFL dx / max |lambda|`` over Roe states of the physical interfaces."""
        U = np.asarray(U, dtype=np.float64)
        rho = self.model.spectral_radius(U[:-1], U[1:])
        smax = float(np.max(rho)) if rho.size else 0.0
        if not np.isfinite(smax):
            raise BlowUpError("non-finite wave speed")
        dx = self.grid.dx
        base = self.config.cfl * dx * dx ** (self.config.dt_exponent - 1.0)
        if smax <= 0.0:
            return base
        return base / smax

    def _stage_check(self, U: Array, stage: int, t: float) -> None:
        if not np.all(np.isfinite(U)):
            raise BlowUpError(f"non-finite values after stage {stage} (t = {t:.6g})", stage=stage)
        try:
            self.model.check_admissible(U, f"stage {stage}, t = {t:.6g}")
        except DomainError as exc:
            raise BlowUpError(str(exc), stage=stage) from exc

    def ssp_rk3_step(self, U: Array, t: float, dt: float, L0: Array | None = None) -> Array:
        """Three-stage SSP Runge-Kutta step in Shu-Osher form.

        ``L0`` may hold ``rhs(U, t)`` when the caller already has it.
        """
        if dt <= 0.0:
            raise ConfigurationError(f"time step must be positive: {dt}")
        U = np.asarray(U, dtype=np.float64)
        L = self.rhs(U, t) if L0 is None else L0
        U1 = U + dt * L
        self._stage_check(U1, 1, t)
        U2 = 0.75 * U + 0.25 * (U1 + dt * self.rhs(U1, t + dt))
        self._stage_check(U2, 2, t)
        U3 = U / 3.0 + 2.0 / 3.0 * (U2 + dt * self.rhs(U2, t + 0.5 * dt))
        self._stage_check(U3, 3, t)
        if self.config.boundary.periodic:
            U3[-1] = U3[0]
        return U3

    def run_to_time(self, initial: State | Array, t_end: float, t0: float = 0.0) -> RunResult:
        if t_end < t0:
            raise ConfigurationError(f"final time {t_end} precedes start {t0}")
        U = self._values(initial).copy()
        t, steps = t0, 0
        tic = _time.perf_counter()
        while t < t_end:
            if steps >= self.config.max_steps:
                raise DivergenceError(f"reached {steps} steps before t = {t_end}")
            dt = self.cfl_dt(U, t)
            last = t + dt >= t_end
            if last:
                dt = t_end - t
            U = self.ssp_rk3_step(U, t, dt)
            t = t_end if last else t + dt
            steps += 1
        return RunResult(State(self.grid, U), t, steps, _time.perf_counter() - tic)

    def run_to_steady(
        self, initial: State | Array, *, max_time: float | None = None
    ) -> RunResult:
        """March until ``max |dU/dt| <= steady_tol``; the residual is checked every step."""
        U = self._values(initial).copy()
        t, steps = 0.0, 0
        residuals: list[float] = []
        best, best_step = np.inf, 0
        tic = _time.perf_counter()
        while True:
            L = self.rhs(U, t)
            res = float(np.max(np.abs(L)))
            residuals.append(res)
            if res <= self.config.steady_tol:
                converged = True
                break
            if res < 0.9 * best:
                best, best_step = res, steps
            elif steps - best_step > self.config.plateau_steps and best <= self._roundoff_floor(U):
                # the residual has reached round-off level and stopped decreasing
                converged = True
                break
            stalled = steps - best_step > self.config.stall_steps
            if stalled or steps >= self.config.max_steps or (max_time is not None and t >= max_time):
                converged = False
                logger.warning("no steady state after %d steps: residual %.3e", steps, res)
                break
            dt = self.cfl_dt(U, t)
            U = self.ssp_rk3_step(U, t, dt, L0=L)
            t += dt
            steps += 1
        return RunResult(
            State(self.grid, U), t, steps, _time.perf_counter() - tic, converged, residuals
        )

    def _roundoff_floor(self, U: Array) -> float:
        """Residual level explained by rounding of the nodal fluxes."""
        scale = float(np.max(np.abs(self.model.flux(U))))
        return self.config.plateau_factor * np.finfo(float).eps * max(1.0, scale) / self.grid.dx

    def _values(self, initial: State | Array) -> Array:
        values = initial.values if isinstance(initial, State) else np.asarray(initial, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None]
        if values.shape[0] != self.grid.n_nodes:
            raise ConfigurationError(
                f"initial data has {values.shape[0]} nodes, mesh has {self.grid.n_nodes}"
            )
        return values

    # }}}


# }}}


# {{{ module-level operations


def rhs(state: State, model: ModelSpec, config: SchemeConfig, t: float = 0.0) -> Array:
    return Solver(model, state.grid, config).rhs(state.values, t)


def cfl_dt(state: State, model: ModelSpec, config: SchemeConfig, t: float = 0.0) -> float:
    return Solver(model, state.grid, config).cfl_dt(state.values, t)


def ssp_rk3_step(state: State, model: ModelSpec, config: SchemeConfig, t: float, dt: float) -> State:
    solver = Solver(model, state.grid, config)
    return State(state.grid, solver.ssp_rk3_step(state.values, t, dt))


def run_to_time(initial: State, model: ModelSpec, config: SchemeConfig, t_end: float) -> State:
    return Solver(model, initial.grid, config).run_to_time(initial, t_end).state


def run_to_steady(
    initial: State, model: ModelSpec, config: SchemeConfig
) -> tuple[State, list[float]]:
    result = Solver(model, initial.grid, config).run_to_steady(initial)
    return result.state, result.residuals


# }}}
