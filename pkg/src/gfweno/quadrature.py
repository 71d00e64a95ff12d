"""Multi-step quadrature of the source term and assembly of the global flux.

The source primitive is accumulated cell by cell,

    R_{j+1} = R_j + I_j,    I_j = dx * sum_m beta_m (S(U) H_x + s)(x_{j+1-s+m}),

with Adams-Bashforth or Adams-Moulton weights, and the modified flux is
``F(U_j) - R_j``. Cells next to a discontinuity of ``H`` use a linearized jump
integral followed by lower-step rules whose stencils do not cross the jump.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np

from gfweno import _poly
from gfweno.errors import ConfigurationError
from gfweno.models import (
    Geometry,
    GhostedState,
    Grid,
    ModelSpec,
    ShallowWaterModel,
    State,
)

Array = Any


# {{{ multi-step weights


class Family(enum.Enum):
    AB = "ab"
    AM = "am"

    @classmethod
    def parse(cls, value: Family | str) -> Family:
        if isinstance(value, Family):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigurationError(f"unknown multi-step family: {value!r}") from None


@lru_cache(maxsize=None)
def adams_fractions(family: Family, steps: int) -> tuple[Fraction, ...]:
    """Exact weights ``beta_0..beta_s`` of the ``steps``-step Adams rule.

    Local node ``m`` sits at ``t = m``; the rule integrates over ``[s-1, s]``
    the interpolant through nodes ``0..s`` (Moulton) or ``0..s-1``
    (Bashforth, whose last weight is then zero).
    """
    if steps < 1:
        raise ConfigurationError(f"need at least one step: {steps}")

    n_interp = steps + 1 if family is Family.AM else steps
    nodes = [Fraction(m) for m in range(n_interp)]
    lo, hi = Fraction(steps - 1), Fraction(steps)
    weights = [_poly.integrate(_poly.lagrange_basis(nodes, m), lo, hi) for m in range(n_interp)]
    if family is Family.AB:
        weights.append(Fraction(0))
    return tuple(weights)


@dataclass(frozen=True)
class MultiStepRule:
    family: Family
    order: int
    steps: int
    exact: tuple[Fraction, ...] = field(repr=False)

    @property
    def weights(self) -> Array:
        return np.array([float(b) for b in self.exact])

    @property
    def implicit(self) -> bool:
        return self.family is Family.AM

    @property
    def name(self) -> str:
        return f"{self.family.value.upper()}{self.order}"

    def reduced(self, steps: int) -> MultiStepRule:
        """The member of the same family with ``steps`` steps."""
        if not 1 <= steps <= self.steps:
            raise ConfigurationError(f"reduced step count {steps} outside 1..{self.steps}")
        return rule_from_steps(self.family, steps)


def rule_from_steps(family: Family | str, steps: int) -> MultiStepRule:
    family = Family.parse(family)
    order = steps if family is Family.AB else steps + 1
    return MultiStepRule(family, order, steps, adams_fractions(family, steps))


def multistep_weights(family: Family | str, order: int) -> MultiStepRule:
    """Adams rule of order 4, 6 or 8 (``s = q`` for AB, ``s = q - 1`` for AM)."""
    family = Family.parse(family)
    if order not in (4, 6, 8):
        raise ConfigurationError(f"unsupported multi-step order {order}; use 4, 6 or 8")
    steps = order if family is Family.AB else order - 1
    return rule_from_steps(family, steps)


def reduced_weights(family: Family | str, steps: int) -> tuple[float, ...]:
    """Weights ``beta^r_0..beta^r_r`` of the ``r``-step rule (``r + 1`` entries)."""
    if steps < 1:
        raise ConfigurationError(f"need at least one step: {steps}")
    return tuple(float(b) for b in adams_fractions(Family.parse(family), steps))


# }}}


# {{{ singular interfaces


def jump_cell(grid: Grid, x_jump: float) -> int:
    """Index ``l`` of the cell ``[x_l, x_{l+1}]`` holding a jump of ``H``.

    A jump located on a node belongs to the cell on its right, since the node
    carries the left limit.
    """
    return int(np.floor((x_jump - grid.x_start) / grid.dx + 1.0e-9))


@dataclass(frozen=True)
class SingularityRegistry:
    """Sorted cell indices ``l`` whose interval contains a discontinuity of ``H``."""

    cells: tuple[int, ...] = ()

    @classmethod
    def from_geometry(cls, geometry: Geometry, grid: Grid) -> SingularityRegistry:
        cells = sorted({jump_cell(grid, xd) for xd in geometry.jumps})
        return cls(tuple(cells))

    def __bool__(self) -> bool:
        return bool(self.cells)

    def validate(self, grid: Grid, steps: int) -> None:
        for c in self.cells:
            if not 0 <= c < grid.n_intervals:
                raise ConfigurationError(
                    f"discontinuity in cell {c} lies outside the mesh (0..{grid.n_intervals - 1})"
                )
        for a, b in zip(self.cells, self.cells[1:]):
            if b - a <= 2 * steps:
                raise ConfigurationError(
                    f"discontinuities in cells {a} and {b} are closer than {2 * steps + 1} cells"
                )

    def cell_steps(self, cells: Array, steps: int) -> Array:
        """Step count used by each cell; ``0`` marks a singular cell."""
        cells = np.asarray(cells)
        out = np.full(cells.shape, steps, dtype=np.int64)
        for ell in self.cells:
            out[cells == ell] = 0
            for r in range(1, steps):
                out[cells == ell + r] = r
        return out


# }}}


# {{{ quadrature plan


def source_density(model: ModelSpec, U: Array, x: Array, t: float) -> Array:
    """Nodal integrand ``S(U) H_x + s(U, x)``."""
    Hx = model.H_x(x, t)
    return model.source_coeff(U) * Hx[..., None] + model.pointwise_source(U, x, t)


@dataclass(frozen=True)
class SourceQuadrature:
    """Stencils and weights of every cell of a ghost-extended mesh.

    Extended cell ``e`` spans extended nodes ``e`` and ``e + 1``. Row ``e`` of
    ``index``/``weight`` lists its ``s + 1`` stencil nodes (zero-padded for
    reduced rules). Cells whose stencil leaves the extended mesh are invalid.
    """

    grid: Grid
    ghost: int
    rule: MultiStepRule
    registry: SingularityRegistry
    index: Array = field(repr=False)
    weight: Array = field(repr=False)
    steps: Array = field(repr=False)
    valid: Array = field(repr=False)

    @classmethod
    def build(
        cls,
        grid: Grid,
        ghost: int,
        rule: MultiStepRule,
        registry: SingularityRegistry | None = None,
    ) -> SourceQuadrature:
        registry = registry or SingularityRegistry()
        registry.validate(grid, rule.steps)

        s = rule.steps
        n_ext = grid.n_nodes + 2 * ghost
        ext_cells = np.arange(n_ext - 1)
        steps = registry.cell_steps(ext_cells - ghost, s)

        index = np.zeros((n_ext - 1, s + 1), dtype=np.int64)
        weight = np.zeros((n_ext - 1, s + 1))
        valid = np.ones(n_ext - 1, dtype=bool)
        tables = {r: rule.reduced(r).weights for r in range(1, s + 1)}
        for e in ext_cells:
            r = steps[e]
            if r == 0:
                continue
            first = e + 1 - r
            if first < 0:
                valid[e] = False
                continue
            # reduced rules occupy the last r + 1 slots; unused slots point at
            # a stencil node with weight 0 so NaN far outside never leaks in
            index[e, :] = first
            index[e, s - r :] = np.arange(first, e + 2)
            weight[e, s - r :] = tables[r]
        return cls(grid, ghost, rule, registry, index, weight, steps, valid)

    @property
    def singular_cells(self) -> Array:
        """Extended indices of the singular cells."""
        return np.flatnonzero(self.steps == 0)

    def weighted_sums(self, density: Array) -> Array:
        """``dx * sum_m beta_m density[node_m]`` for every cell, shape ``(n-1, ...)``."""
        acc = self.weight[:, 0, None] * density[self.index[:, 0]]
        for m in range(1, self.index.shape[1]):
            acc = acc + self.weight[:, m, None] * density[self.index[:, m]]
        out = self.grid.dx * acc
        out[~self.valid] = np.nan
        return out

    def cell_sum(self, e: int, density: Array) -> Array:
        """Same as :meth:`weighted_sums` for one cell, ``density`` holding its stencil rows."""
        acc = self.weight[e, 0] * density[0]
        for m in range(1, self.index.shape[1]):
            acc = acc + self.weight[e, m] * density[m]
        return self.grid.dx * acc

    def cell_integral(
        self,
        model: ModelSpec,
        U: Array,
        x: Array,
        e: int,
        t: float = 0.0,
        bathymetry: Array | None = None,
    ) -> Array:
        """Integral of the single extended cell ``e``, as in :meth:`integrals`.

        Only the stencil nodes of the cell are read from ``U``.
        """
        if self.steps[e] == 0:
            if bathymetry is None:
                H = model.H(x[e : e + 2], t)
                return singular_cell_integral(model, U[e], U[e + 1], H[0], H[1])
            return singular_cell_integral(
                model, U[e], U[e + 1], bathymetry[e], bathymetry[e + 1], water_at_rest=True
            )
        if not self.valid[e]:
            raise IndexError(f"stencil of extended cell {e} leaves the mesh")

        idx = self.index[e]
        xs, Us = x[idx], U[idx]
        if bathymetry is None:
            density = source_density(model, Us, xs, t)
        else:
            g = _water_model(model).g
            density = model.pointwise_source(Us, xs, t)
            density[:, 1] += g * (Us[:, 0] - bathymetry[idx]) * model.H_x(xs, t)

        out = self.cell_sum(e, density)
        if bathymetry is not None:
            g = _water_model(model).g
            Hl, Hr = bathymetry[e], bathymetry[e + 1]
            out = out.copy()
            out[1] += 0.5 * g * (Hr * Hr - Hl * Hl)
        return out

    def bathymetry(self, model: ModelSpec, t: float = 0.0) -> Array:
        """Quadrature-consistent ``H~`` on the extended mesh, ``H~ = H`` at node 0."""
        x = self.grid.nodes(self.ghost)
        Hx = model.H_x(x, t)[:, None]
        inc = self.weighted_sums(Hx)[:, 0]
        for e in self.singular_cells:
            H = model.H(x[e : e + 2], t)
            inc[e] = H[1] - H[0]
        H0 = float(model.H(np.array([self.grid.x_start]), t)[0])
        Ht = _anchored_cumsum(inc[:, None], self.ghost, H0)[:, 0]
        # the outermost left ghosts lie beyond the quadrature stencils; continue
        # them with H shifted to match the first computed node
        bad = ~np.isfinite(Ht)
        if np.any(bad) and not np.all(bad):
            f = int(np.flatnonzero(~bad)[0])
            Hx = model.H(x, t)
            Ht[bad] = Hx[bad] + (Ht[f] - Hx[f])
        return Ht

    def integrals(
        self,
        model: ModelSpec,
        U: Array,
        t: float = 0.0,
        bathymetry: Array | None = None,
    ) -> Array:
        """Cell integrals ``I_e`` for every extended cell, shape ``(n_ext - 1, M)``.

        With ``bathymetry`` (``H~`` nodal values) the momentum source of the
        shallow water model is split as ``g eta H_x`` plus an exact ``[[g H~^2/2]]``
        so that lakes at rest are preserved to round-off.
        """
        x = self.grid.nodes(self.ghost)
        if bathymetry is None:
            density = source_density(model, U, x, t)
            out = self.weighted_sums(density)
            for e in self.singular_cells:
                H = model.H(x[e : e + 2], t)
                out[e] = singular_cell_integral(model, U[e], U[e + 1], H[0], H[1])
            return out

        g = _water_model(model).g
        Hx = model.H_x(x, t)
        density = model.pointwise_source(U, x, t)
        density[:, 1] += g * (U[:, 0] - bathymetry) * Hx
        out = self.weighted_sums(density)
        sq = bathymetry * bathymetry
        out[:, 1] += 0.5 * g * (sq[1:] - sq[:-1])
        for e in self.singular_cells:
            out[e] = singular_cell_integral(
                model, U[e], U[e + 1], bathymetry[e], bathymetry[e + 1], water_at_rest=True
            )
        return out


def _water_model(model: ModelSpec) -> ShallowWaterModel:
    if not isinstance(model, ShallowWaterModel):
        raise ConfigurationError("the water-at-rest correction applies to shallow water only")
    return model


def _anchored_cumsum(inc: Array, anchor: int, value: float | Array = 0.0) -> Array:
    """Nodal primitive with ``P[anchor] = value`` and ``P[e+1] - P[e] = inc[e]``."""
    n = inc.shape[0] + 1
    P = np.empty((n,) + inc.shape[1:])
    P[anchor] = value
    if anchor < n - 1:
        P[anchor + 1 :] = value + np.cumsum(inc[anchor:], axis=0)
    if anchor > 0:
        P[:anchor] = value - np.cumsum(inc[:anchor][::-1], axis=0)[::-1]
    return P


# }}}


# {{{ global flux


@dataclass(frozen=True)
class GlobalFlux:
    """Source primitives ``R`` and modified fluxes ``F(U) - R`` on an extended mesh.

    ``R`` vanishes at physical node 0. Rows follow the extended numbering of
    the input (``ghost`` nodes before node 0).
    """

    ghost: int
    integrals: Array
    primitives: Array
    modified: Array

    def physical(self, n_nodes: int) -> tuple[Array, Array]:
        sl = slice(self.ghost, self.ghost + n_nodes)
        return self.primitives[sl], self.modified[sl]


def _as_ghosted(state: State | GhostedState) -> GhostedState:
    if isinstance(state, GhostedState):
        return state
    return GhostedState.from_state(state)


def assemble_global_flux(
    plan: SourceQuadrature,
    model: ModelSpec,
    U: Array,
    t: float = 0.0,
    bathymetry: Array | None = None,
) -> GlobalFlux:
    integrals = plan.integrals(model, U, t, bathymetry)
    R = _anchored_cumsum(integrals, plan.ghost)
    return GlobalFlux(plan.ghost, integrals, R, model.flux(U) - R)


def build_global_flux(
    state: State | GhostedState,
    model: ModelSpec,
    rule: MultiStepRule,
    registry: SingularityRegistry | None = None,
    t: float = 0.0,
    *,
    water_at_rest: bool = False,
) -> GlobalFlux:
    """Accumulate ``R_j`` and form ``F(U_j) - R_j``.

    The first cells need ``s - 1`` nodes to the left of node 0; pass a
    :class:`GhostedState` with a filled ghost band to provide them. Values
    that cannot be computed are NaN.
    """
    ext = _as_ghosted(state)
    model.check_admissible(ext.values)
    plan = SourceQuadrature.build(ext.grid, ext.ghost, rule, registry)
    Ht = plan.bathymetry(model, t) if water_at_rest else None
    return assemble_global_flux(plan, model, ext.values, t, Ht)


def cell_source_integral(
    state: State | GhostedState,
    model: ModelSpec,
    rule: MultiStepRule,
    j: int,
    t: float = 0.0,
) -> Array:
    """Standard-rule integral over the physical cell ``[x_j, x_{j+1}]``."""
    ext = _as_ghosted(state)
    s = rule.steps
    first = j + 1 - s + ext.ghost
    last = j + 1 + ext.ghost
    if first < 0 or last >= ext.values.shape[0]:
        raise IndexError(f"stencil of cell {j} leaves the mesh; add ghost nodes")

    x = ext.x[first : last + 1]
    density = source_density(model, ext.values[first : last + 1], x, t)
    w = rule.weights
    acc = w[0] * density[0]
    for m in range(1, s + 1):
        acc = acc + w[m] * density[m]
    return ext.grid.dx * acc


def singular_cell_integral(
    model: ModelSpec,
    U_left: Array,
    U_right: Array,
    H_left: float,
    H_right: float,
    *,
    water_at_rest: bool = False,
) -> Array:
    """Jump integral ``S~ [[H]]`` with ``[[F]] = S~ [[H]]`` across admissible jumps.

    With ``water_at_rest`` the momentum part becomes ``g eta~ [[H]] + (g/2)
    [[H^2]]`` where ``eta = h - H``; ``H_left``/``H_right`` are then the
    quadrature-consistent bathymetry values.
    """
    U_left = np.asarray(U_left, dtype=np.float64)
    U_right = np.asarray(U_right, dtype=np.float64)
    dH = H_right - H_left
    if not water_at_rest:
        return model.linearized_source(U_left, U_right) * dH

    swe = _water_model(model)
    corr, _ = swe.jump_depth(U_left, U_right)
    eta = 0.5 * ((U_left[..., 0] - H_left) + (U_right[..., 0] - H_right))
    g = swe.g
    mom = g * (eta + corr) * dH + 0.5 * g * (H_right * H_right - H_left * H_left)
    return np.stack([np.zeros_like(mom), mom], axis=-1)


def accumulate_bathymetry(
    model: ModelSpec,
    grid: Grid,
    rule: MultiStepRule,
    registry: SingularityRegistry | None = None,
    *,
    ghost: int | None = None,
    t: float = 0.0,
) -> Array:
    """``H~_{j+1} = H~_j + dx sum_m beta_m H_x(x_{j+1-s+m})`` with ``H~_0 = H(x_0)``.

    Returns the physical nodes only; ``ghost`` defaults to the step count so
    that every physical cell has a full stencil.
    """
    ghost = rule.steps if ghost is None else ghost
    plan = SourceQuadrature.build(grid, ghost, rule, registry)
    return plan.bathymetry(model, t)[ghost : ghost + grid.n_nodes]


def water_at_rest_integral(
    state: GhostedState,
    model: ModelSpec,
    rule: MultiStepRule,
    bathymetry: Array,
    j: int,
    t: float = 0.0,
) -> float:
    """Momentum component of the lake-preserving integral over physical cell ``j``.

    ``bathymetry`` holds ``H~`` on the same extended nodes as ``state``.
    """
    swe = _water_model(model)
    G = state.ghost
    s = rule.steps
    first = j + 1 - s + G
    if first < 0 or j + 1 + G >= state.values.shape[0]:
        raise IndexError(f"stencil of cell {j} leaves the mesh; add ghost nodes")

    sl = slice(first, j + 2 + G)
    x = state.x[sl]
    U = state.values[sl]
    density = swe.g * (U[:, 0] - bathymetry[sl]) * model.H_x(x, t)
    density = density + model.pointwise_source(U, x, t)[:, 1]
    w = rule.weights
    acc = w[0] * density[0]
    for m in range(1, s + 1):
        acc = acc + w[m] * density[m]
    Hl, Hr = bathymetry[j + G], bathymetry[j + 1 + G]
    return float(state.grid.dx * acc + 0.5 * swe.g * (Hr * Hr - Hl * Hl))


# }}}
