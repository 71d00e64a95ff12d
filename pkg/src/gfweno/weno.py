"""WENO reconstruction of nodal fluxes with a Roe-matrix upwind split.

Candidate stencil coefficients, linear weights and Jiang-Shu smoothness
quadratic forms are generated exactly (rational arithmetic) for any ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np

from gfweno import _poly
from gfweno.errors import ConfigurationError
from gfweno.models import ModelSpec

Array = Any

#: Regularization added to each smoothness indicator.
WENO_EPS = 1.0e-6


@dataclass(frozen=True)
class WenoOrder:
    p: int

    def __post_init__(self) -> None:
        if self.p not in (3, 5, 7):
            raise ConfigurationError(f"unsupported WENO order {self.p}; use 3, 5 or 7")

    @property
    def k(self) -> int:
        return (self.p - 1) // 2

    @property
    def width(self) -> int:
        return self.p


# {{{ tables


@dataclass(frozen=True)
class WenoTables:
    """Coefficients for the reconstruction at ``x_{i+1/2}`` from ``v_{i-k}..v_{i+k}``.

    ``coeffs[r]`` acts on ``v_{i-k+r}..v_{i+r}``; ``linear[r]`` are the ideal
    weights; ``indicators[r]`` is the symmetric matrix of the smoothness
    quadratic form on the same substencil.
    """

    k: int
    coeffs: Array
    linear: Array
    indicators: Array
    exact_coeffs: tuple[tuple[Fraction, ...], ...]
    exact_linear: tuple[Fraction, ...]
    exact_indicators: tuple[tuple[tuple[Fraction, ...], ...], ...]


def _cell_basis(k: int, r: int) -> list[_poly.Poly]:
    """Reconstruction polynomials of substencil ``r`` in units where ``dx = 1``.

    Cell ``i`` is ``[-1/2, 1/2]``. Basis function ``q`` is the polynomial of
    degree ``k`` whose cell averages vanish on the substencil except on cell
    ``q``; it is the derivative of the interpolated primitive.
    """
    first = -k + r
    edges = [Fraction(2 * (first + m) - 1, 2) for m in range(k + 2)]
    dL = [_poly.deriv(_poly.lagrange_basis(edges, m)) for m in range(k + 2)]
    basis = []
    for q in range(k + 1):
        p: _poly.Poly = [Fraction(0)]
        for m in range(q + 1, k + 2):
            p = _poly.add(p, dL[m])
        basis.append(p)
    return basis


def _stencil_coeffs(first: int, n: int, at: Fraction) -> list[Fraction]:
    edges = [Fraction(2 * (first + m) - 1, 2) for m in range(n + 1)]
    dL = [_poly.deriv(_poly.lagrange_basis(edges, m)) for m in range(n + 1)]
    out = []
    for q in range(n):
        val = Fraction(0)
        for m in range(q + 1, n + 1):
            val += _poly.evaluate(dL[m], at)
        out.append(val)
    return out


@lru_cache(maxsize=None)
def weno_tables(k: int) -> WenoTables:
    half = Fraction(1, 2)
    coeffs = [tuple(_stencil_coeffs(-k + r, k + 1, half)) for r in range(k + 1)]

    # ideal weights: the substencils recombine into the full stencil, the
    # system is triangular in the first k + 1 entries
    full = _stencil_coeffs(-k, 2 * k + 1, half)
    linear: list[Fraction] = []
    for j in range(k + 1):
        known = sum(
            (linear[r] * coeffs[r][j - r] for r in range(j) if 0 <= j - r <= k),
            Fraction(0),
        )
        linear.append((full[j] - known) / coeffs[j][0])
    for j in range(2 * k + 1):
        total = sum(
            (linear[r] * coeffs[r][j - r] for r in range(k + 1) if 0 <= j - r <= k),
            Fraction(0),
        )
        assert total == full[j]

    # smoothness: sum_l int_{cell} (d^l p / dx^l)^2 dx, l = 1..k
    lo, hi = Fraction(-1, 2), Fraction(1, 2)
    indicators = []
    for r in range(k + 1):
        basis = _cell_basis(k, r)
        Q = [[Fraction(0)] * (k + 1) for _ in range(k + 1)]
        derivs = [basis]
        for _ in range(k):
            derivs.append([_poly.deriv(p) for p in derivs[-1]])
        for ell in range(1, k + 1):
            d = derivs[ell]
            for a in range(k + 1):
                for b in range(k + 1):
                    Q[a][b] += _poly.integrate(_poly.mul(d[a], d[b]), lo, hi)
        indicators.append(tuple(tuple(row) for row in Q))

    return WenoTables(
        k=k,
        coeffs=np.array([[float(c) for c in row] for row in coeffs]),
        linear=np.array([float(d) for d in linear]),
        indicators=np.array([[[float(c) for c in row] for row in Q] for Q in indicators]),
        exact_coeffs=tuple(coeffs),
        exact_linear=tuple(linear),
        exact_indicators=tuple(indicators),
    )


# }}}


# {{{ reconstruction


def _substencils(stencil: Array, k: int) -> Array:
    """Shape ``(..., k+1, k+1)``: substencil ``r`` is ``stencil[..., r:r+k+1]``."""
    return np.stack([stencil[..., r : r + k + 1] for r in range(k + 1)], axis=-2)


def smoothness_indicators(stencil: Array, order: WenoOrder | int) -> Array:
    """Jiang-Shu indicators of the ``k + 1`` substencils, shape ``(..., k+1)``."""
    order = _as_order(order)
    stencil = np.asarray(stencil, dtype=np.float64)
    tab = weno_tables(order.k)
    sub = _substencils(stencil, order.k)
    quad = np.matmul(sub[..., None, :], tab.indicators)[..., 0, :]
    return np.sum(quad * sub, axis=-1)


def weno_weights(stencil: Array, order: WenoOrder | int, eps: float = WENO_EPS) -> Array:
    """Nonlinear weights ``omega_r`` for the left-biased reconstruction."""
    order = _as_order(order)
    tab = weno_tables(order.k)
    beta = smoothness_indicators(stencil, order)
    alpha = tab.linear / (eps + beta) ** 2
    return alpha / np.sum(alpha, axis=-1, keepdims=True)


def reconstruct_with_weights(stencil: Array, weights: Array, order: WenoOrder | int) -> Array:
    """Left-biased value at ``x_{i+1/2}`` for frozen nonlinear weights.

    Values are taken relative to the stencil centre, so a constant stencil is
    reproduced bitwise.
    """
    order = _as_order(order)
    k = order.k
    stencil = np.asarray(stencil, dtype=np.float64)
    ref = stencil[..., k]
    rel = stencil - ref[..., None]
    tab = weno_tables(k)
    sub = _substencils(rel, k)
    candidates = np.sum(sub * tab.coeffs, axis=-1)
    return ref + np.sum(weights * candidates, axis=-1)


def weno_reconstruct_left(stencil: Array, order: WenoOrder | int, eps: float = WENO_EPS) -> Array:
    """Value at ``x_{i+1/2}`` from nodal data ``v_{i-k}..v_{i+k}`` (last axis)."""
    return reconstruct_with_weights(stencil, weno_weights(stencil, order, eps), order)


def weno_reconstruct_right(
    stencil: Array, order: WenoOrder | int, eps: float = WENO_EPS
) -> Array:
    """Value at ``x_{i+1/2}`` from ``v_{i-k+1}..v_{i+k+1}``, biased to the right."""
    reflected = np.asarray(stencil, dtype=np.float64)[..., ::-1]
    return weno_reconstruct_left(reflected, order, eps)


def _as_order(order: WenoOrder | int) -> WenoOrder:
    return order if isinstance(order, WenoOrder) else WenoOrder(int(order))


# }}}


# {{{ upwind splitting


@dataclass(frozen=True)
class SplitFluxes:
    plus: Array
    minus: Array


def split_with_matrix(fluxes: Array, sign_matrix: Array) -> SplitFluxes:
    """``F+ = (F + P F)/2``, ``F- = F - F+`` for a per-interface sign matrix ``P``.

    ``fluxes`` has shape ``(..., n, M)`` and ``sign_matrix`` ``(..., M, M)``.
    """
    fluxes = np.asarray(fluxes, dtype=np.float64)
    projected = np.matmul(fluxes, np.swapaxes(sign_matrix, -1, -2))
    plus = 0.5 * (fluxes + projected)
    return SplitFluxes(plus, fluxes - plus)


def upwind_split(
    modified_fluxes: Array,
    states: Array,
    model: ModelSpec,
    interface_index: int,
    order: WenoOrder | int,
) -> SplitFluxes:
    """Split the ``2k + 2`` nodal fluxes around interface ``i + 1/2``.

    Arrays are indexed by node; the returned tables cover nodes ``i-k..i+k+1``.
    """
    order = _as_order(order)
    i, k = interface_index, order.k
    if i - k < 0 or i + k + 1 >= len(states):
        raise IndexError(f"interface {i}+1/2 needs nodes {i - k}..{i + k + 1}")
    P = model.upwind_sign_matrix(states[i], states[i + 1])
    return split_with_matrix(np.asarray(modified_fluxes)[i - k : i + k + 2], P)


def interface_flux(
    modified_fluxes: Array,
    states: Array,
    model: ModelSpec,
    order: WenoOrder | int,
    i: int,
) -> Array:
    """``R^L(F+_{i-k..i+k}) + R^R(F-_{i-k+1..i+k+1})`` at ``x_{i+1/2}``."""
    order = _as_order(order)
    split = upwind_split(modified_fluxes, states, model, i, order)
    n = 2 * order.k + 1
    left = weno_reconstruct_left(split.plus[:n].T, order)
    right = weno_reconstruct_right(split.minus[1:].T, order)
    return left + right


def interface_fluxes(
    modified_fluxes: Array,
    states: Array,
    model: ModelSpec,
    order: WenoOrder | int,
    first: int,
    last: int,
    *,
    sign_matrices: Array | None = None,
    eps: float = WENO_EPS,
) -> Array:
    """Vectorized :func:`interface_flux` for interfaces ``first..last`` (inclusive)."""
    order = _as_order(order)
    k = order.k
    if first - k < 0 or last + k + 1 >= len(states):
        raise IndexError(f"interfaces {first}..{last} need nodes {first - k}..{last + k + 1}")

    F = np.asarray(modified_fluxes, dtype=np.float64)
    n_if = last - first + 1
    if sign_matrices is None:
        sign_matrices = model.upwind_sign_matrix(
            states[first : last + 1], states[first + 1 : last + 2]
        )

    # windows[i, m] = F[first + i - k + m], m = 0..2k+1
    idx = first - k + np.arange(n_if)[:, None] + np.arange(2 * k + 2)[None, :]
    split = split_with_matrix(F[idx], sign_matrices)

    plus = np.swapaxes(split.plus[:, : 2 * k + 1], -1, -2)
    minus = np.swapaxes(split.minus[:, 1:], -1, -2)
    return weno_reconstruct_left(plus, order, eps) + weno_reconstruct_right(minus, order, eps)


# }}}
