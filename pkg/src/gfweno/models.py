"""Balance-law models ``U_t + F(U)_x = S(U) H_x + s(U, x)`` and mesh containers.

All model callbacks are vectorized: a state array has shape ``(..., M)`` with
the component index last, so a nodal table ``(n, M)`` and a single state
``(M,)`` are handled by the same code.
"""

from __future__ import annotations

import enum
from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from gfweno.errors import (
    ConfigurationError,
    DomainError,
    InadmissibleJumpError,
    NoRootError,
    SingularJumpError,
    SonicStateError,
)

Array = Any


# {{{ mesh


@dataclass(frozen=True)
class Grid:
    """Uniform point mesh ``x_j = x_start + j dx``, ``j = 0..N``."""

    x_start: float
    x_end: float
    n_intervals: int

    def __post_init__(self) -> None:
        if self.n_intervals < 1:
            raise ConfigurationError(f"need at least one interval: {self.n_intervals}")
        if not self.x_end > self.x_start:
            raise ConfigurationError(f"empty interval [{self.x_start}, {self.x_end}]")

    @property
    def dx(self) -> float:
        return (self.x_end - self.x_start) / self.n_intervals

    @property
    def n_nodes(self) -> int:
        return self.n_intervals + 1

    def nodes(self, ghost: int = 0) -> Array:
        j = np.arange(-ghost, self.n_intervals + 1 + ghost, dtype=np.float64)
        return self.x_start + j * self.dx

    def refine(self, factor: int = 2) -> Grid:
        return Grid(self.x_start, self.x_end, factor * self.n_intervals)


@dataclass
class State:
    """Nodal values, shape ``(N + 1, M)``."""

    grid: Grid
    values: Array

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[0] != self.grid.n_nodes:
            raise ConfigurationError(
                f"state has shape {values.shape}, expected ({self.grid.n_nodes}, M)"
            )
        self.values = values

    @property
    def components(self) -> int:
        return self.values.shape[1]

    @property
    def x(self) -> Array:
        return self.grid.nodes()

    def copy(self) -> State:
        return State(self.grid, self.values.copy())


@dataclass
class GhostedState:
    """Nodal values extended by ``ghost`` nodes on each side of the mesh.

    Row ``e`` holds physical node ``e - ghost``.
    """

    grid: Grid
    ghost: int
    values: Array

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None]
        expected = self.grid.n_nodes + 2 * self.ghost
        if values.ndim != 2 or values.shape[0] != expected:
            raise ConfigurationError(f"state has shape {values.shape}, expected ({expected}, M)")
        self.values = values

    @classmethod
    def from_state(cls, state: State) -> GhostedState:
        return cls(state.grid, 0, state.values)

    @property
    def x(self) -> Array:
        return self.grid.nodes(self.ghost)

    @property
    def physical(self) -> Array:
        return self.values[self.ghost : self.ghost + self.grid.n_nodes]

    def to_state(self) -> State:
        return State(self.grid, self.physical.copy())


# }}}


# {{{ geometry


def _zero(x: Array, t: float = 0.0) -> Array:
    return np.zeros_like(np.asarray(x, dtype=np.float64))


@dataclass(frozen=True)
class Geometry:
    """The function ``H(x, t)`` with its analytic slope.

    ``jumps`` lists the abscissae where ``H`` is discontinuous. A node lying
    exactly on a jump belongs to the left branch (``x <= x_jump``).
    """

    H: Callable[[Array, float], Array] = _zero
    dH: Callable[[Array, float], Array] = _zero
    jumps: tuple[float, ...] = ()

    @classmethod
    def flat(cls) -> Geometry:
        return cls()

    @classmethod
    def linear(cls, slope: float = 1.0) -> Geometry:
        return cls(
            H=lambda x, t=0.0: slope * np.asarray(x, dtype=np.float64),
            dH=lambda x, t=0.0: np.full_like(np.asarray(x, dtype=np.float64), slope),
        )


# }}}


# {{{ model base


class FluxBranch(enum.Enum):
    """Selects the root of ``F(U) = F*`` (one regime of the flux inverse)."""

    SCALAR_POSITIVE = "scalar-positive"
    SCALAR_NEGATIVE = "scalar-negative"
    SWE_SUBCRITICAL = "swe-subcritical"
    SWE_SUPERCRITICAL = "swe-supercritical"


class ModelSpec(ABC):
    components: int
    geometry: Geometry

    @abstractmethod
    def flux(self, U: Array) -> Array: ...

    @abstractmethod
    def jacobian(self, U: Array) -> Array: ...

    @abstractmethod
    def eigenvalues(self, U: Array) -> Array: ...

    @abstractmethod
    def source_coeff(self, U: Array) -> Array: ...

    @abstractmethod
    def roe_matrix(self, Ul: Array, Ur: Array) -> Array: ...

    @abstractmethod
    def roe_eigensystem(self, Ul: Array, Ur: Array) -> tuple[Array, Array, Array]:
        """Eigenvalues (ascending), right and left eigenvector matrices."""

    @abstractmethod
    def eigensystem(self, U: Array) -> tuple[Array, Array, Array]: ...

    @abstractmethod
    def linearized_source(self, Ul: Array, Ur: Array) -> Array:
        """Source linearization with ``[[F]] = S~ [[H]]`` across admissible jumps."""

    @abstractmethod
    def admissible_jump(
        self, Ul: Array, H_left: float, H_right: float, branch: FluxBranch | None = None
    ) -> Array: ...

    @abstractmethod
    def invert_flux(self, F: Array, branch: FluxBranch) -> Array: ...

    @abstractmethod
    def branch_of(self, U: Array) -> FluxBranch: ...

    def pointwise_source(self, U: Array, x: Array, t: float = 0.0) -> Array:
        return np.zeros_like(np.asarray(U, dtype=np.float64))

    def H(self, x: Array, t: float = 0.0) -> Array:
        return np.asarray(self.geometry.H(x, t), dtype=np.float64)

    def H_x(self, x: Array, t: float = 0.0) -> Array:
        return np.asarray(self.geometry.dH(x, t), dtype=np.float64)

    def check_admissible(self, U: Array, context: str = "") -> None:
        pass

    def spectral_radius(self, Ul: Array, Ur: Array) -> Array:
        lam, _, _ = self.roe_eigensystem(Ul, Ur)
        return np.max(np.abs(lam), axis=-1)

    def upwind_sign_matrix(self, Ul: Array, Ur: Array, floor: float = 1.0e-8) -> Array:
        """``|J|^{-1} J = R sign(Lambda) R^{-1}`` at the Roe intermediate state.

        ``|lambda|`` is floored at ``floor * max(1, rho)`` so that a vanishing
        eigenvalue yields a centred split instead of a division by zero.
        """
        lam, R, L = self.roe_eigensystem(Ul, Ur)
        rho = np.max(np.abs(lam), axis=-1, keepdims=True)
        delta = floor * np.maximum(1.0, rho)
        sgn = lam / np.maximum(np.abs(lam), delta)

        # exact +-I when every wave goes the same way
        P = np.einsum("...ij,...j,...jk->...ik", R, sgn, L)
        same = np.all(np.abs(sgn) == 1.0, axis=-1) & (
            np.all(sgn > 0, axis=-1) | np.all(sgn < 0, axis=-1)
        )
        if np.any(same):
            eye = np.eye(self.components)
            P[same] = sgn[same][:, :1, None] * eye
        return P


# }}}


# {{{ burgers


@dataclass(frozen=True)
class BurgersModel(ModelSpec):
    """``F = U^2/2`` with ``S = U^p`` (or ``S = U - C`` for the travelling test)."""

    exponent: int = 2
    geometry: Geometry = field(default_factory=Geometry.linear)
    mms_speed: float | None = None

    components = 1

    def __post_init__(self) -> None:
        if self.exponent < 1:
            raise ConfigurationError(f"exponent must be >= 1: {self.exponent}")

    def flux(self, U: Array) -> Array:
        U = np.asarray(U, dtype=np.float64)
        return 0.5 * U * U

    def jacobian(self, U: Array) -> Array:
        return np.asarray(U, dtype=np.float64)[..., None]

    def eigenvalues(self, U: Array) -> Array:
        return np.asarray(U, dtype=np.float64).copy()

    def eigensystem(self, U: Array) -> tuple[Array, Array, Array]:
        U = np.asarray(U, dtype=np.float64)
        one = np.ones(U.shape + (1,))
        return U.copy(), one, one.copy()

    def source_coeff(self, U: Array) -> Array:
        U = np.asarray(U, dtype=np.float64)
        if self.mms_speed is not None:
            return U - self.mms_speed
        if self.exponent == 1:
            return U.copy()
        if self.exponent == 2:
            return U * U
        return U**self.exponent

    def roe_matrix(self, Ul: Array, Ur: Array) -> Array:
        return (0.5 * (np.asarray(Ul) + np.asarray(Ur)))[..., None]

    def roe_eigensystem(self, Ul: Array, Ur: Array) -> tuple[Array, Array, Array]:
        lam = 0.5 * (np.asarray(Ul, dtype=np.float64) + np.asarray(Ur, dtype=np.float64))
        one = np.ones(lam.shape + (1,))
        return lam, one, one.copy()

    def linearized_source(self, Ul: Array, Ur: Array) -> Array:
        if self.mms_speed is not None:
            raise ConfigurationError("no jump linearization for the travelling-source variant")

        Ul = np.asarray(Ul, dtype=np.float64)
        Ur = np.asarray(Ur, dtype=np.float64)
        ubar = 0.5 * (Ul + Ur)
        p = self.exponent
        if p == 1:
            return ubar

        with np.errstate(divide="ignore", invalid="ignore"):
            alpha = (Ur - Ul) / Ul
        small = np.abs(alpha) < 1.0e-8

        if p == 2:
            # [[U]] / ln(Ur/Ul) = Ul * alpha / log1p(alpha) -> Ul as alpha -> 0
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(
                    small,
                    1.0 + alpha / 2.0 - alpha * alpha / 12.0,
                    alpha / np.log1p(alpha),
                )
            return ubar * Ul * ratio

        # (2 - p) [[U]] / [[U^{2-p}]] -> U^{p-1} as the jump closes
        e = 2 - p
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = e * (Ur - Ul) / (Ur**e - Ul**e)
        limit = ubar ** (p - 1)
        return ubar * np.where(small, limit, ratio)

    def admissible_jump(
        self, Ul: Array, H_left: float, H_right: float, branch: FluxBranch | None = None
    ) -> Array:
        Ul = np.asarray(Ul, dtype=np.float64)
        dH = H_right - H_left
        p = self.exponent
        if self.mms_speed is not None:
            raise ConfigurationError("no jump relation for the travelling-source variant")
        if p == 1:
            return Ul + dH
        if p == 2:
            return Ul * np.exp(dH)

        e = 2 - p
        w = Ul**e + e * dH
        if np.any(Ul <= 0.0) or np.any(w <= 0.0):
            raise InadmissibleJumpError(
                f"no positive right state for p={p}: U_left={Ul}, [[H]]={dH}"
            )
        return w ** (1.0 / e)

    def invert_flux(self, F: Array, branch: FluxBranch) -> Array:
        F = np.asarray(F, dtype=np.float64)
        if np.any(F < 0.0):
            raise NoRootError(f"U^2/2 = {np.min(F)} has no real root", gap=float(-np.min(F)))
        U = np.sqrt(2.0 * F)
        if branch is FluxBranch.SCALAR_NEGATIVE:
            return -U
        if branch is not FluxBranch.SCALAR_POSITIVE:
            raise ConfigurationError(f"branch {branch} does not apply to a scalar model")
        return U

    def branch_of(self, U: Array) -> FluxBranch:
        if np.all(np.asarray(U) >= 0.0):
            return FluxBranch.SCALAR_POSITIVE
        if np.all(np.asarray(U) <= 0.0):
            return FluxBranch.SCALAR_NEGATIVE
        raise SonicStateError("states on both sides of the sonic point U = 0")


# }}}


# {{{ shallow water


class FrictionKind(enum.Enum):
    NONE = "none"
    QUADRATIC_DEPTH = "quadratic-depth"
    MANNING = "manning"


@dataclass(frozen=True)
class FrictionLaw:
    """Friction coefficient ``kappa(U) >= 0`` in the source ``[0, -kappa q]``."""

    kind: FrictionKind = FrictionKind.NONE
    k: float = 0.0
    mu: float = 7.0 / 3.0

    def __post_init__(self) -> None:
        if self.k < 0.0:
            raise ConfigurationError(f"negative friction coefficient: {self.k}")

    def kappa(self, h: Array, q: Array) -> Array:
        if self.kind is FrictionKind.NONE:
            return np.zeros_like(h)
        if self.kind is FrictionKind.QUADRATIC_DEPTH:
            return self.k * h * np.abs(q)
        return self.k * np.abs(q) / h**self.mu


@dataclass(frozen=True)
class ShallowWaterModel(ModelSpec):
    """``U = (h, q)``, ``F = (q, q^2/h + g h^2/2)``, ``S = (0, g h)``.

    ``H`` is the depth below a fixed reference level, so the free surface is
    ``eta = h - H``.
    """

    g: float = 9.81
    friction: FrictionLaw = field(default_factory=FrictionLaw)
    geometry: Geometry = field(default_factory=Geometry.flat)

    components = 2

    def check_admissible(self, U: Array, context: str = "") -> None:
        h = np.asarray(U)[..., 0]
        bad = ~(h > 0.0)
        if np.any(bad):
            idx = np.argwhere(bad)
            where = f" ({context})" if context else ""
            raise DomainError(
                f"non-positive depth h={h[bad].flat[0]!r} at node {tuple(idx[0])}{where}"
            )

    def flux(self, U: Array) -> Array:
        U = np.asarray(U, dtype=np.float64)
        h, q = U[..., 0], U[..., 1]
        return np.stack([q, q * q / h + 0.5 * self.g * h * h], axis=-1)

    def jacobian(self, U: Array) -> Array:
        U = np.asarray(U, dtype=np.float64)
        u = U[..., 1] / U[..., 0]
        return self._matrix(u, self.g * U[..., 0])

    def _matrix(self, u: Array, c2: Array) -> Array:
        J = np.zeros(u.shape + (2, 2))
        J[..., 0, 1] = 1.0
        J[..., 1, 0] = c2 - u * u
        J[..., 1, 1] = 2.0 * u
        return J

    def eigenvalues(self, U: Array) -> Array:
        return self.eigensystem(U)[0]

    def _eigen(self, u: Array, c: Array) -> tuple[Array, Array, Array]:
        lam = np.stack([u - c, u + c], axis=-1)
        R = np.ones(u.shape + (2, 2))
        R[..., 1, 0] = lam[..., 0]
        R[..., 1, 1] = lam[..., 1]

        L = np.empty_like(R)
        inv = 1.0 / (2.0 * c)
        L[..., 0, 0] = lam[..., 1] * inv
        L[..., 0, 1] = -inv
        L[..., 1, 0] = -lam[..., 0] * inv
        L[..., 1, 1] = inv
        return lam, R, L

    def eigensystem(self, U: Array) -> tuple[Array, Array, Array]:
        U = np.asarray(U, dtype=np.float64)
        self.check_admissible(U)
        h = U[..., 0]
        c = np.sqrt(self.g * h)
        if np.any(2.0 * c <= 1.0e-12 * np.maximum(1.0, np.abs(U[..., 1] / h))):
            raise SonicStateError("coincident eigenvalues")
        return self._eigen(U[..., 1] / h, c)

    def _roe_average(self, Ul: Array, Ur: Array) -> tuple[Array, Array]:
        Ul = np.asarray(Ul, dtype=np.float64)
        Ur = np.asarray(Ur, dtype=np.float64)
        hl, hr = Ul[..., 0], Ur[..., 0]
        sl, sr = np.sqrt(hl), np.sqrt(hr)
        u = (Ul[..., 1] / sl + Ur[..., 1] / sr) / (sl + sr)
        return u, 0.5 * (hl + hr)

    def roe_matrix(self, Ul: Array, Ur: Array) -> Array:
        u, h = self._roe_average(Ul, Ur)
        return self._matrix(u, self.g * h)

    def roe_eigensystem(self, Ul: Array, Ur: Array) -> tuple[Array, Array, Array]:
        u, h = self._roe_average(Ul, Ur)
        return self._eigen(u, np.sqrt(self.g * h))

    def source_coeff(self, U: Array) -> Array:
        U = np.asarray(U, dtype=np.float64)
        return np.stack([np.zeros_like(U[..., 0]), self.g * U[..., 0]], axis=-1)

    def pointwise_source(self, U: Array, x: Array, t: float = 0.0) -> Array:
        U = np.asarray(U, dtype=np.float64)
        h, q = U[..., 0], U[..., 1]
        return np.stack([np.zeros_like(h), -self.friction.kappa(h, q) * q], axis=-1)

    def jump_depth(self, Ul: Array, Ur: Array) -> tuple[Array, Array]:
        """Return ``(h~ - h_bar, h_bar)`` for the jump linearization."""
        Ul = np.asarray(Ul, dtype=np.float64)
        Ur = np.asarray(Ur, dtype=np.float64)
        hl, hr = Ul[..., 0], Ur[..., 0]
        qbar = 0.5 * (Ul[..., 1] + Ur[..., 1])
        hbar = 0.5 * (hl + hr)
        prod = hl * hr
        a = qbar * qbar / (self.g * prod * prod)
        denom = 1.0 - a * hbar
        if np.any(np.abs(denom) < 1.0e-12):
            raise SingularJumpError(
                f"resonant jump: 1 - q^2 h_bar / (g (h_l h_r)^2) = {np.min(np.abs(denom)):.3e}"
            )
        return a * (hbar * hbar - prod) / denom, hbar

    def linearized_source(self, Ul: Array, Ur: Array) -> Array:
        corr, hbar = self.jump_depth(Ul, Ur)
        return np.stack([np.zeros_like(hbar), self.g * (hbar + corr)], axis=-1)

    def bernoulli(self, U: Array, H: Array) -> Array:
        U = np.asarray(U, dtype=np.float64)
        h, q = U[..., 0], U[..., 1]
        return 0.5 * q * q / (h * h) + self.g * h - self.g * H

    def critical_depth(self, q: Array) -> Array:
        return np.cbrt(np.asarray(q, dtype=np.float64) ** 2 / self.g)

    def admissible_jump(
        self, Ul: Array, H_left: float, H_right: float, branch: FluxBranch | None = None
    ) -> Array:
        Ul = np.asarray(Ul, dtype=np.float64)
        self.check_admissible(Ul, "left jump state")
        if branch is None:
            branch = self.branch_of(Ul)
        q = Ul[..., 1]
        energy = self.bernoulli(Ul, H_left) + self.g * H_right
        try:
            h = solve_energy_depth(q, energy, self.g, branch)
        except NoRootError as exc:
            raise InadmissibleJumpError(str(exc)) from exc
        return np.stack([h, np.broadcast_to(q, np.shape(h))], axis=-1)

    def invert_flux(self, F: Array, branch: FluxBranch) -> Array:
        F = np.asarray(F, dtype=np.float64)
        q = F[..., 0]
        h = solve_flux_depth(q, F[..., 1], self.g, branch)
        return np.stack([h, q.copy()], axis=-1)

    def branch_of(self, U: Array) -> FluxBranch:
        U = np.asarray(U, dtype=np.float64)
        froude2 = U[..., 1] ** 2 / (self.g * U[..., 0] ** 3)
        if np.all(froude2 < 1.0):
            return FluxBranch.SWE_SUBCRITICAL
        if np.all(froude2 > 1.0):
            return FluxBranch.SWE_SUPERCRITICAL
        raise SonicStateError("states on both sides of the critical depth")


# }}}


# {{{ cubic roots on a branch


def _convex_branch_root(
    phi: Callable[[Array], Array],
    dphi: Callable[[Array], Array],
    h0: Array,
    lo: Array,
    hi: Array,
    *,
    rtol: float = 1.0e-15,
    maxit: int = 100,
) -> Array:
    """Newton for a convex function on a monotone branch, with bisection fallback.

    ``h0`` must satisfy ``phi(h0) >= 0`` on the correct side of the root, which
    makes the Newton sequence monotone.
    """
    h = np.array(h0, dtype=np.float64, copy=True)
    for _ in range(maxit):
        with np.errstate(divide="ignore", invalid="ignore"):
            step = phi(h) / dphi(h)
        step = np.where(np.isfinite(step), step, 0.0)
        h_new = h - step
        done = np.abs(h_new - h) <= rtol * np.abs(h_new)
        h = h_new
        if np.all(done):
            break
    else:
        h = _bisect(phi, lo, hi)

    # one more Newton step from the converged value polishes the last bit
    with np.errstate(divide="ignore", invalid="ignore"):
        step = phi(h) / dphi(h)
    return np.where(np.isfinite(step), h - step, h)


def _bisect(phi: Callable[[Array], Array], lo: Array, hi: Array) -> Array:
    lo = np.array(lo, dtype=np.float64, copy=True)
    hi = np.array(hi, dtype=np.float64, copy=True)
    sign_lo = np.sign(phi(lo))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        s = np.sign(phi(mid))
        left = s == sign_lo
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)
        if np.all(hi - lo <= 1.0e-15 * np.abs(mid)):
            break
    return 0.5 * (lo + hi)


def solve_flux_depth(q: Array, F2: Array, g: float, branch: FluxBranch) -> Array:
    """Root ``h`` of ``q^2/h + g h^2/2 = F2`` on a flow-regime branch."""
    q = np.asarray(q, dtype=np.float64)
    F2 = np.asarray(F2, dtype=np.float64)
    q2 = q * q
    hc = np.cbrt(q2 / g)
    fmin = 1.5 * g * hc * hc

    if np.any(F2 < fmin):
        gap = float(np.max(fmin - F2))
        raise NoRootError(f"momentum flux below the sonic minimum by {gap:.6e}", gap=gap)

    def phi(h: Array) -> Array:
        return q2 / h + 0.5 * g * h * h - F2

    def dphi(h: Array) -> Array:
        return -q2 / (h * h) + g * h

    upper = np.sqrt(2.0 * F2 / g)
    if branch is FluxBranch.SWE_SUBCRITICAL:
        return _convex_branch_root(phi, dphi, upper, hc, upper)
    if branch is FluxBranch.SWE_SUPERCRITICAL:
        if np.any(q2 == 0.0):
            raise NoRootError("no supercritical state at rest", gap=0.0)
        return _convex_branch_root(phi, dphi, q2 / F2, q2 / F2, hc)
    raise ConfigurationError(f"branch {branch} does not apply to shallow water")


def solve_energy_depth(q: Array, energy: Array, g: float, branch: FluxBranch) -> Array:
    """Root ``h`` of ``q^2/(2 h^2) + g h = energy`` on a flow-regime branch."""
    q = np.asarray(q, dtype=np.float64)
    energy = np.asarray(energy, dtype=np.float64)
    q2 = q * q
    hc = np.cbrt(q2 / g)
    emin = 1.5 * g * hc

    if np.any(energy < emin):
        gap = float(np.max(emin - energy))
        raise NoRootError(f"energy below the critical minimum by {gap:.6e}", gap=gap)

    def phi(h: Array) -> Array:
        return 0.5 * q2 / (h * h) + g * h - energy

    def dphi(h: Array) -> Array:
        return -q2 / (h * h * h) + g

    if branch is FluxBranch.SWE_SUBCRITICAL:
        upper = energy / g
        return _convex_branch_root(phi, dphi, upper, hc, upper)
    if branch is FluxBranch.SWE_SUPERCRITICAL:
        if np.any(q2 == 0.0):
            raise NoRootError("no supercritical state at rest", gap=0.0)
        lower = np.sqrt(q2 / (2.0 * energy))
        return _convex_branch_root(phi, dphi, lower, lower, hc)
    raise ConfigurationError(f"branch {branch} does not apply to shallow water")


# }}}


# {{{ operations


def flux(model: ModelSpec, U: Array) -> Array:
    model.check_admissible(U)
    return model.flux(U)


def eigen_decomposition(model: ModelSpec, U: Array) -> tuple[Array, Array, Array]:
    """Eigenvalues (ascending) with right and left eigenvector tables."""
    return model.eigensystem(U)


def roe_intermediate(model: ModelSpec, Ul: Array, Ur: Array) -> Array:
    model.check_admissible(Ul)
    model.check_admissible(Ur)
    return model.roe_matrix(Ul, Ur)


# }}}
