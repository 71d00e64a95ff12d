"""Convergence and perturbation studies over the case registry."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, TextIO

import numpy as np

from gfweno.cases import Scheme, Setup, get_case, prepare
from gfweno.errors import ConfigurationError
from gfweno.solver import Frozen, RunResult

Array = Any

#: errors at or below this level are treated as round-off when computing orders
ORDER_FLOOR = 1.0e-14


def l1_error(U: Array, reference: Array, dx: float) -> Array:
    """``dx * sum_j |U_j - U*_j|`` per component."""
    diff = np.abs(np.asarray(U, dtype=np.float64) - np.asarray(reference, dtype=np.float64))
    if diff.ndim == 1:
        diff = diff[:, None]
    return dx * np.sum(diff, axis=0)


def observed_order(errors: Array, ns: Array, floor: float = ORDER_FLOOR) -> Array:
    """``log(e_{i-1}/e_i) / log(N_i/N_{i-1})``; NaN for the first entry or at round-off.

    An order is only meaningful when both errors exceed ``floor``; otherwise
    the ratio measures rounding noise.
    """
    e = np.asarray(errors, dtype=np.float64)
    n = np.asarray(ns, dtype=np.float64)
    out = np.full(e.shape, np.nan)
    for i in range(1, len(e)):
        if e[i - 1] > floor and e[i] > floor:
            out[i] = np.log(e[i - 1] / e[i]) / np.log(n[i] / n[i - 1])
    return out


def final_order(errors: Array, ns: Array, floor: float = ORDER_FLOOR) -> float:
    """Last finite entry of :func:`observed_order`, NaN if there is none."""
    orders = observed_order(errors, ns, floor)
    finite = orders[np.isfinite(orders)]
    return float(finite[-1]) if finite.size else float("nan")


# {{{ single runs


@dataclass
class CaseRun:
    setup: Setup
    result: RunResult
    errors: Array | None

    @property
    def state(self) -> Array:
        return self.result.state.values


def run_case(
    case_id: str,
    scheme_id: str,
    n: int,
    *,
    t_end: float | None = None,
    steady: bool | None = None,
    **overrides: Any,
) -> CaseRun:
    """Run one case; steady cases march to a steady state unless ``t_end`` is given."""
    case = get_case(case_id)
    setup = prepare(case, scheme_id, n, **overrides)
    if steady is None:
        steady = case.mode == "steady" and t_end is None
    if steady:
        result = setup.solver.run_to_steady(setup.initial)
        reference = setup.reference
    else:
        t_final = t_end if t_end is not None else case.t_end
        if t_final is None:
            raise ConfigurationError(f"case {case.id} needs a final time")
        result = setup.solver.run_to_time(setup.initial, t_final)
        reference = setup.reference
        if case.error_against == "exact" and case.exact is not None:
            reference = case.exact(setup.model, setup.grid.nodes(), t_final)
    errors = None if reference is None else l1_error(result.state.values, reference, setup.grid.dx)
    return CaseRun(setup, result, errors)


# }}}


# {{{ convergence


@dataclass
class ConvergenceRow:
    n: int
    dx: float
    errors: Array
    orders: Array
    steps: int
    wall_time: float
    converged: bool


@dataclass
class ConvergenceTable:
    case_id: str
    scheme_id: str
    rows: list[ConvergenceRow] = field(default_factory=list)

    @property
    def ns(self) -> Array:
        return np.array([r.n for r in self.rows])

    def errors(self, component: int = 0) -> Array:
        return np.array([r.errors[component] for r in self.rows])

    def orders(self, component: int = 0) -> Array:
        return np.array([r.orders[component] for r in self.rows])

    def final_order(self, component: int = 0) -> float:
        return final_order(self.errors(component), self.ns)


def _ladder_point(case_id: str, scheme_id: str, n: int, kwargs: dict[str, Any]) -> tuple:
    run = run_case(case_id, scheme_id, n, **kwargs)
    if run.errors is None:
        raise ConfigurationError(f"case {case_id} has no reference for error measurement")
    r = run.result
    return run.setup.grid.dx, np.asarray(run.errors), r.steps, r.wall_time, r.converged


def convergence_study(
    case_id: str,
    scheme_id: str,
    n_list: list[int] | tuple[int, ...] | None = None,
    *,
    workers: int = 1,
    **kwargs: Any,
) -> ConvergenceTable:
    """Errors and observed orders over a mesh ladder.

    With ``workers > 1`` the runs are spread over a process pool; each run
    owns its solver and the table is assembled in mesh order.
    """
    case = get_case(case_id)
    ns = list(n_list or case.n_list)
    table = ConvergenceTable(case.id, Scheme.parse(scheme_id).id)
    if workers > 1 and len(ns) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(ns))) as pool:
            futures = [pool.submit(_ladder_point, case.id, scheme_id, n, kwargs) for n in ns]
            points = [f.result() for f in futures]
    else:
        points = [_ladder_point(case.id, scheme_id, n, kwargs) for n in ns]
    errs = np.array([pt[1] for pt in points])
    orders = np.stack([observed_order(errs[:, c], ns) for c in range(errs.shape[1])], axis=1)
    for n, (dx, e, steps, wall, conv), o in zip(ns, points, orders):
        table.rows.append(ConvergenceRow(n, dx, e, o, steps, wall, conv))
    return table


# }}}


# {{{ perturbations


@dataclass
class PerturbationResult:
    case_id: str
    scheme_id: str
    x: Array
    t: float
    amplitude: float
    #: ``U(t) - U_steady`` on the run's nodes
    deviation: Array
    #: the reference deviation interpolated onto ``x``, when computed
    reference: Array | None = None

    def envelope(self, component: int = 0) -> float:
        return float(np.max(np.abs(self.deviation[:, component])))

    def reference_envelope(self, component: int = 0) -> float:
        if self.reference is None:
            return float("nan")
        return float(np.max(np.abs(self.reference[:, component])))


def _perturbed_deviation(
    case_id: str, scheme_id: str, n: int, t_end: float, amplitude: float | None
) -> tuple[Array, Array]:
    case = get_case(case_id)
    if case.perturbation is None:
        raise ConfigurationError(f"case {case.id} defines no perturbation")
    setup = prepare(case, scheme_id, n)
    solver = setup.solver
    if setup.discrete is not None:
        base = setup.discrete.physical.copy()
        setup = prepare(case, scheme_id, n, boundary=Frozen.from_ghosted(setup.discrete))
        solver = setup.solver
    elif not case.water_at_rest and (case.mode == "steady" or case.extra.get("perturb_from_steady")):
        # the scheme's own stationary state, reached by marching
        base = solver.run_to_steady(setup.initial).state.values
    else:
        # lakes keep the exact lake so that a scheme's spurious motion shows up
        base = setup.initial
    x = setup.grid.nodes()
    start = case.perturbation.apply(base, x, amplitude)
    final = solver.run_to_time(start, t_end).state.values
    return x, final - base


def perturbation_study(
    case_id: str,
    scheme_id: str,
    n: int | None = None,
    *,
    t_end: float | None = None,
    amplitude: float | None = None,
    reference: bool = True,
    reference_scheme: tuple[str, int] | None = None,
) -> PerturbationResult:
    """Evolve the perturbed stationary state and compare with a fine-grid run.

    The base state is the scheme's own discrete stationary state: from a
    sweep when available, else marched to steady. Lakes at rest are
    perturbed around the exact lake for every scheme.
    """
    case = get_case(case_id)
    n = n or case.n_default
    t = t_end if t_end is not None else case.perturb_t_end
    if t is None:
        raise ConfigurationError(f"case {case.id} needs a final time")
    amp = amplitude if amplitude is not None else case.perturbation.amplitude
    x, dev = _perturbed_deviation(case.id, scheme_id, n, t, amp)
    ref = None
    ref_spec = reference_scheme or case.reference_scheme
    if reference and ref_spec is not None:
        xr, devr = _perturbed_deviation(case.id, ref_spec[0], ref_spec[1], t, amp)
        ref = np.stack([np.interp(x, xr, devr[:, c]) for c in range(devr.shape[1])], axis=1)
    return PerturbationResult(case.id, Scheme.parse(scheme_id).id, x, t, amp, dev, ref)


# }}}


# {{{ csv


def _fmt(v: float) -> str:
    return f"{v:.16e}"


def write_csv(out: TextIO, header: list[str], rows: list[list[Any]]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def convergence_csv(table: ConvergenceTable) -> str:
    m = len(table.rows[0].errors)
    header = ["n", "dx"] + [f"error_{c}" for c in range(m)] + [f"order_{c}" for c in range(m)]
    header += ["steps", "wall_time"]
    rows = [
        [r.n, float(r.dx), *map(float, r.errors), *map(float, r.orders), r.steps, float(r.wall_time)]
        for r in table.rows
    ]
    buf = io.StringIO()
    write_csv(buf, header, rows)
    return buf.getvalue()


def state_csv(x: Array, U: Array, reference: Array | None = None) -> str:
    m = U.shape[1]
    header = ["x"] + [f"u_{c}" for c in range(m)]
    if reference is not None:
        header += [f"reference_{c}" for c in range(m)]
    rows = []
    for j in range(len(x)):
        row = [float(x[j]), *map(float, U[j])]
        if reference is not None:
            row += list(map(float, reference[j]))
        rows.append(row)
    buf = io.StringIO()
    write_csv(buf, header, rows)
    return buf.getvalue()


def perturbation_csv(result: PerturbationResult) -> str:
    m = result.deviation.shape[1]
    header = ["x"] + [f"deviation_{c}" for c in range(m)]
    if result.reference is not None:
        header += [f"reference_{c}" for c in range(m)]
    rows = []
    for j in range(len(result.x)):
        row = [float(result.x[j]), *map(float, result.deviation[j])]
        if result.reference is not None:
            row += list(map(float, result.reference[j]))
        rows.append(row)
    buf = io.StringIO()
    write_csv(buf, header, rows)
    return buf.getvalue()


def timed(fn, *args: Any, **kwargs: Any) -> tuple[Any, float]:
    tic = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - tic


# }}}
