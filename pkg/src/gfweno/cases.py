"""Registry of the benchmark problems and scheme identifiers.

Bathymetry profiles are printed in the literature as bottom elevations ``b``;
the models here use the depth below a reference level, ``H = -b``, so the
free surface is ``eta = h - H = h + b``.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from gfweno.errors import ConfigurationError, SonicStateError, UsageError
from gfweno.models import (
    BurgersModel,
    FluxBranch,
    FrictionKind,
    FrictionLaw,
    Geometry,
    GhostedState,
    Grid,
    ModelSpec,
    ShallowWaterModel,
)
from gfweno.quadrature import MultiStepRule, SingularityRegistry, multistep_weights
from gfweno.solver import (
    BoundaryPolicy,
    DirichletExact,
    Extrapolate,
    Frozen,
    SchemeConfig,
    Solver,
    SubcriticalInlet,
    SubcriticalOutlet,
    SupercriticalInlet,
)
from gfweno.steady import (
    FrictionProfile,
    SteadyProblem,
    bernoulli_constant,
    bernoulli_steady,
    burgers_steady,
    steady_sweep_extended,
    transcritical_steady,
)
from gfweno.weno import WenoOrder

Array = Any

logger = logging.getLogger(__name__)


# {{{ schemes

_SCHEME_RE = re.compile(r"^weno(?P<p>[357])(?:gf-(?P<fam>ab|am)(?P<q>[468])|-nwb)$")


@dataclass(frozen=True)
class Scheme:
    """Parsed scheme id: ``weno{3,5,7}gf-{ab,am}{4,6,8}`` or ``weno{3,5,7}-nwb``."""

    id: str
    weno: WenoOrder
    rule: MultiStepRule | None

    @classmethod
    def parse(cls, scheme_id: str) -> Scheme:
        m = _SCHEME_RE.match(scheme_id.strip().lower())
        if m is None:
            raise UsageError(
                f"unknown scheme {scheme_id!r}; expected weno{{3,5,7}}gf-{{ab,am}}{{4,6,8}} "
                "or weno{3,5,7}-nwb"
            )
        rule = None
        if m.group("fam"):
            rule = multistep_weights(m.group("fam"), int(m.group("q")))
        return cls(scheme_id.strip().lower(), WenoOrder(int(m.group("p"))), rule)

    @property
    def well_balanced(self) -> bool:
        return self.rule is not None


def list_schemes() -> list[str]:
    out = [f"weno{p}gf-{f}{q}" for p in (3, 5, 7) for f in ("ab", "am") for q in (4, 6, 8)]
    return out + [f"weno{p}-nwb" for p in (3, 5, 7)]


# }}}


# {{{ case description


@dataclass(frozen=True)
class Perturbation:
    """``dh`` added to the depth on ``[a, b]``, or a Gaussian bump ``dh exp(-w (x - c)^2)``."""

    amplitude: float
    interval: tuple[float, float] | None = None
    center: float | None = None
    width: float | None = None

    def shape(self, x: Array) -> Array:
        x = np.asarray(x, dtype=np.float64)
        if self.interval is not None:
            a, b = self.interval
            return np.where((x >= a) & (x <= b), 1.0, 0.0)
        return np.exp(-self.width * (x - self.center) ** 2)

    def apply(self, U: Array, x: Array, amplitude: float | None = None) -> Array:
        amp = self.amplitude if amplitude is None else amplitude
        out = np.array(U, dtype=np.float64, copy=True)
        out[:, 0] += amp * self.shape(x)
        return out


@dataclass
class Setup:
    """Everything needed to run one case with one scheme on one mesh."""

    case: CaseSpec
    scheme: Scheme
    grid: Grid
    model: ModelSpec
    solver: Solver
    initial: Array
    reference: Array | None
    #: the scheme's own stationary state on the ghost extended mesh, if known
    discrete: GhostedState | None = None


@dataclass
class CaseSpec:
    id: str
    description: str
    domain: tuple[float, float]
    model: Callable[[], ModelSpec]
    mode: str  # "time" or "steady"
    t_end: float | None
    n_default: int
    n_list: tuple[int, ...]
    #: exact nodal solution ``U(x, t)``, when known
    exact: Callable[[ModelSpec, Array, float], Array] | None = None
    #: sweep branch, for cases whose discrete steady state comes from a sweep
    branch: FluxBranch | None = None
    #: state at ``x_start`` used to bootstrap a sweep without exact solution
    inflow: tuple[float, ...] | None = None
    boundary: Callable[[ModelSpec, Setup | None], BoundaryPolicy] | None = None
    water_at_rest: bool = False
    perturbation: Perturbation | None = None
    perturb_t_end: float | None = None
    reference_scheme: tuple[str, int] | None = None
    #: ``initial`` compares against the initial state (preservation tests)
    error_against: str = "exact"
    #: the discrete steady state is used as the initial data
    start_from_discrete: bool = False
    notes: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    def make_grid(self, n: int) -> Grid:
        return Grid(self.domain[0], self.domain[1], n)


# }}}


# {{{ geometry helpers


def _left_of(x: Array, x_jump: float) -> Array:
    """``x <= x_jump`` with a tolerance so nodes computed as ``a + j dx`` stay left."""
    scale = max(1.0, abs(x_jump))
    return np.asarray(x) <= x_jump + 1.0e-9 * scale


def _bump(x: Array) -> Array:
    s = np.asarray(x, dtype=np.float64) - 12.5
    return 0.05 * np.sin(s) * np.exp(1.0 - s * s)


def _dbump(x: Array) -> Array:
    s = np.asarray(x, dtype=np.float64) - 12.5
    return 0.05 * np.exp(1.0 - s * s) * (np.cos(s) - 2.0 * s * np.sin(s))


def bump_geometry(step_at: float | None = None, step: float = -0.1) -> Geometry:
    """``H = -b`` for the sinusoidal bump, optionally with a step in ``b``."""
    if step_at is None:
        return Geometry(H=lambda x, t=0.0: -_bump(x), dH=lambda x, t=0.0: -_dbump(x))

    def H(x: Array, t: float = 0.0) -> Array:
        return -_bump(x) - np.where(_left_of(x, step_at), 0.0, step)

    return Geometry(H=H, dH=lambda x, t=0.0: -_dbump(x), jumps=(step_at,))


def parabolic_bump_geometry() -> Geometry:
    """``b = 0.2 - 0.05 (x - 10)^2`` on ``(8, 12)``, zero elsewhere."""

    def b(x: Array) -> Array:
        x = np.asarray(x, dtype=np.float64)
        return np.where((x > 8.0) & (x < 12.0), 0.2 - 0.05 * (x - 10.0) ** 2, 0.0)

    def db(x: Array) -> Array:
        x = np.asarray(x, dtype=np.float64)
        return np.where((x > 8.0) & (x < 12.0), -0.1 * (x - 10.0), 0.0)

    return Geometry(H=lambda x, t=0.0: -b(x), dH=lambda x, t=0.0: -db(x))


def _piecewise_linear(pieces: list[tuple[float, float]], jumps: tuple[float, ...]) -> Geometry:
    """``H = c_i + s_i x`` on the ``i``-th interval delimited by ``jumps`` (left-closed)."""

    def select(x: Array) -> Array:
        x = np.asarray(x, dtype=np.float64)
        idx = np.zeros(x.shape, dtype=np.int64)
        for xd in jumps:
            idx += ~_left_of(x, xd)
        return idx

    offsets = np.array([c for c, _ in pieces])
    slopes = np.array([s for _, s in pieces])

    def H(x: Array, t: float = 0.0) -> Array:
        i = select(x)
        return offsets[i] + slopes[i] * np.asarray(x, dtype=np.float64)

    def dH(x: Array, t: float = 0.0) -> Array:
        return slopes[select(x)]

    return Geometry(H=H, dH=dH, jumps=jumps)


def mms_geometry(x0: float = 5.0, speed: float = 1.0) -> Geometry:
    def H(x: Array, t: float = 0.0) -> Array:
        return np.exp(-((np.asarray(x) - x0 - speed * t) ** 2))

    def dH(x: Array, t: float = 0.0) -> Array:
        s = np.asarray(x) - x0 - speed * t
        return -2.0 * s * np.exp(-s * s)

    return Geometry(H=H, dH=dH)


# }}}


# {{{ registry


def _burgers_exact(model: ModelSpec, x: Array, t: float = 0.0) -> Array:
    return burgers_steady(model, x, 1.0, t)


def _dirichlet_both(model: ModelSpec, setup: Setup | None) -> BoundaryPolicy:
    case = setup.case if setup is not None else None
    if case is None or case.exact is None:
        raise ConfigurationError("exact boundary data needs an exact solution")

    def solution(x: Array, t: float) -> Array:
        return case.exact(model, x, t)

    side = DirichletExact(solution)
    return BoundaryPolicy(side, side)


def _dirichlet_held_inflow(model: ModelSpec, setup: Setup | None) -> BoundaryPolicy:
    """Exact ghosts on both sides, with the inflow node held at its exact value."""
    policy = _dirichlet_both(model, setup)
    return BoundaryPolicy(replace(policy.left, hold=True), policy.right)


def _bernoulli(q: float, h0: float, x0: float, branch: FluxBranch):
    def exact(model: ModelSpec, x: Array, t: float = 0.0) -> Array:
        H0 = float(model.H(np.array([x0]))[0])
        energy = bernoulli_constant(model, h0, q, H0)
        return bernoulli_steady(model, x, q, energy, branch)

    return exact


def _swe(geometry: Callable[[], Geometry], friction: FrictionLaw | None = None, g: float = 9.81):
    def make() -> ShallowWaterModel:
        return ShallowWaterModel(g=g, friction=friction or FrictionLaw(), geometry=geometry())

    return make


def _lake_exact(model: ModelSpec, x: Array, t: float = 0.0) -> Array:
    h = 2.0 + model.H(x)
    return np.stack([h, np.zeros_like(h)], axis=-1)


def _lake_boundary(model: ModelSpec, setup: Setup | None) -> BoundaryPolicy:
    return BoundaryPolicy(SubcriticalInlet(0.0), SubcriticalOutlet(eta=2.0))


def _friction_case(
    params: tuple[float, ...], regime: str
) -> tuple[Callable[[], ModelSpec], Callable[..., Array]]:
    profile = FrictionProfile(*params, g=1.0)

    def make() -> ShallowWaterModel:
        law = FrictionLaw(FrictionKind.QUADRATIC_DEPTH, k=profile.k)
        return ShallowWaterModel(g=profile.g, friction=law, geometry=Geometry(H=profile.H, dH=profile.dH))

    def exact(model: ModelSpec, x: Array, t: float = 0.0) -> Array:
        return profile.state(x)

    return make, exact


def _registry() -> dict[str, CaseSpec]:
    cases: list[CaseSpec] = []
    burgers_ladder = (20, 40, 80, 160, 320)
    swe_ladder = (25, 50, 100, 200, 400)

    cases.append(
        CaseSpec(
            id="burgers-mms",
            description="travelling manufactured solution, S = U - 1, H = exp(-(x - 5 - t)^2)",
            domain=(0.0, 15.0),
            model=lambda: BurgersModel(geometry=mms_geometry(), mms_speed=1.0),
            mode="time",
            t_end=2.0,
            n_default=120,
            n_list=(60, 120, 240, 480, 960),
            exact=lambda model, x, t=0.0: model.H(x, t)[:, None],
            boundary=_dirichlet_both,
            # a large regularization keeps WENO3 linear near the critical points of H
            extra={"time_order_matched": True, "weno_eps": 0.1},
        )
    )
    cases.append(
        CaseSpec(
            id="burgers-smooth-steady",
            description="S = U^2, H = x on [-1, 1], steady state e^x",
            domain=(-1.0, 1.0),
            model=lambda: BurgersModel(2, Geometry.linear()),
            mode="steady",
            t_end=None,
            n_default=80,
            n_list=burgers_ladder,
            exact=_burgers_exact,
            branch=FluxBranch.SCALAR_POSITIVE,
            boundary=_dirichlet_held_inflow,
        )
    )

    def osc_geometry() -> Geometry:
        return Geometry(
            H=lambda x, t=0.0: np.asarray(x) + 0.1 * np.sin(100.0 * np.asarray(x)),
            dH=lambda x, t=0.0: 1.0 + 10.0 * np.cos(100.0 * np.asarray(x)),
        )

    cases.append(
        CaseSpec(
            id="burgers-oscillatory",
            description="S = U^2, H = x + 0.1 sin(100 x), steady state e^H, run to t = 1",
            domain=(-1.0, 1.0),
            model=lambda: BurgersModel(2, osc_geometry()),
            mode="time",
            t_end=1.0,
            n_default=100,
            n_list=(100, 150),
            exact=_burgers_exact,
            branch=FluxBranch.SCALAR_POSITIVE,
            boundary=_dirichlet_both,
            perturbation=Perturbation(0.2, interval=(-0.7, -0.5)),
            perturb_t_end=0.7,
            reference_scheme=("weno5gf-am8", 1000),
            notes="explicit AB rules blow up at N = 100, where H_x has about three nodes per period",
            extra={"perturb_from_steady": True},
        )
    )

    def two_jumps() -> Geometry:
        return _piecewise_linear([(0.0, 0.1), (0.5, 1.0), (0.9, 1.0)], (0.0, 0.5))

    cases.append(
        CaseSpec(
            id="burgers-two-discontinuities",
            description="H with jumps at x = 0 (on a node) and x = 0.5 (inside a cell), t = 0.2",
            domain=(-1.0, 1.0),
            model=lambda: BurgersModel(2, two_jumps()),
            mode="time",
            t_end=0.2,
            n_default=102,
            n_list=(102, 204),
            exact=_burgers_exact,
            branch=FluxBranch.SCALAR_POSITIVE,
            boundary=_dirichlet_both,
        )
    )

    def one_jump() -> Geometry:
        return _piecewise_linear([(0.0, 0.1), (0.9, 1.0)], (0.0,))

    cases.append(
        CaseSpec(
            id="burgers-one-discontinuity-perturbed",
            description="H with one jump at x = 0, steady state plus 0.3 exp(-200 (x + 1/2)^2)",
            domain=(-1.0, 1.0),
            model=lambda: BurgersModel(2, one_jump()),
            mode="time",
            t_end=0.5,
            n_default=100,
            n_list=(100, 300),
            exact=_burgers_exact,
            branch=FluxBranch.SCALAR_POSITIVE,
            boundary=_dirichlet_both,
            perturbation=Perturbation(0.3, center=-0.5, width=200.0),
            perturb_t_end=0.5,
            reference_scheme=("weno5-nwb", 5000),
        )
    )

    lake = _swe(lambda: bump_geometry(step_at=14.0))
    for cid, desc, pert, t_pert in (
        ("swe-lake-at-rest", "lake at rest over a bump with a 0.1 m step at x = 14", None, None),
        (
            "swe-lake-perturbation-small",
            "lake at rest plus 1e-4 on [7.5, 9.5]",
            Perturbation(1.0e-4, interval=(7.5, 9.5)),
            1.0,
        ),
        (
            "swe-lake-riemann",
            "lake at rest plus 1 m left of x = 12",
            Perturbation(1.0, interval=(-np.inf, 12.0 - 1.0e-12)),
            1.0,
        ),
    ):
        cases.append(
            CaseSpec(
                id=cid,
                description=desc,
                domain=(0.0, 25.0),
                model=lake,
                mode="time",
                t_end=2.0 if pert is None else t_pert,
                n_default=100,
                n_list=swe_ladder,
                exact=_lake_exact,
                boundary=_lake_boundary,
                water_at_rest=True,
                perturbation=pert,
                perturb_t_end=t_pert,
                reference_scheme=("weno7gf-am8", 1000),
                error_against="initial",
                start_from_discrete=True,
            )
        )

    smooth = _swe(lambda: bump_geometry())
    sub, sup = FluxBranch.SWE_SUBCRITICAL, FluxBranch.SWE_SUPERCRITICAL
    for cid, q, h_ref, x_ref, branch, boundary in (
        (
            "swe-subcritical",
            4.42,
            2.0,
            0.0,
            sub,
            lambda m, s: BoundaryPolicy(SubcriticalInlet(4.42), SubcriticalOutlet(h=2.0)),
        ),
        (
            "swe-subcritical-reversed",
            -4.42,
            2.0,
            25.0,
            sub,
            lambda m, s: BoundaryPolicy(SubcriticalOutlet(h=2.0), SubcriticalInlet(-4.42)),
        ),
        (
            "swe-supercritical",
            24.0,
            2.0,
            0.0,
            sup,
            lambda m, s: BoundaryPolicy(SupercriticalInlet(2.0, 24.0), Extrapolate()),
        ),
        (
            "swe-supercritical-reversed",
            -24.0,
            2.0,
            25.0,
            sup,
            lambda m, s: BoundaryPolicy(Extrapolate(), SupercriticalInlet(2.0, -24.0)),
        ),
    ):
        cases.append(
            CaseSpec(
                id=cid,
                description=f"steady flow over a smooth bump, q = {q}, h = {h_ref} at x = {x_ref}",
                domain=(0.0, 25.0),
                model=smooth,
                mode="steady",
                t_end=None,
                n_default=100,
                n_list=swe_ladder,
                exact=_bernoulli(q, h_ref, x_ref, branch),
                branch=branch,
                boundary=boundary,
                perturbation=Perturbation(1.0e-4, interval=(7.5, 9.5)),
                perturb_t_end=1.0,
                reference_scheme=("weno7gf-am8", 500),
            )
        )

    def transcritical_exact(model: ModelSpec, x: Array, t: float = 0.0) -> Array:
        return transcritical_steady(model, x, 1.53, 10.0, float(model.H(np.array([10.0]))[0]))

    cases.append(
        CaseSpec(
            id="swe-transcritical",
            description="transcritical flow over b = 0.2 - 0.05 (x - 10)^2, q = 1.53",
            domain=(0.0, 25.0),
            model=_swe(parabolic_bump_geometry),
            mode="steady",
            t_end=None,
            n_default=100,
            n_list=(50, 100, 200, 400),
            exact=transcritical_exact,
            boundary=lambda m, s: BoundaryPolicy(SubcriticalInlet(1.53), Extrapolate()),
            perturbation=Perturbation(1.0e-4, interval=(7.5, 9.5)),
            perturb_t_end=0.7,
            reference_scheme=("weno7gf-am8", 1000),
        )
    )

    for cid, params, branch in (
        ("swe-friction-khq-super", (1.0, 1.5, 2.5, 0.5, 2.0, 0.3), sup),
        ("swe-friction-khq-sub", (1.0, 0.3, 2.5, 0.25, 0.5, 0.5), sub),
    ):
        make, exact = _friction_case(params, branch.value)
        cases.append(
            CaseSpec(
                id=cid,
                description=f"friction k h|q| with closed-form steady state {params}",
                domain=(0.0, 1.0),
                model=make,
                mode="steady",
                t_end=None,
                n_default=80,
                n_list=burgers_ladder,
                exact=exact,
                branch=branch,
                boundary=_dirichlet_both,
                perturbation=Perturbation(1.0e-4, interval=(0.1, 0.2)),
                perturb_t_end=0.08,
                reference_scheme=("weno5gf-am8", 2000),
            )
        )

    manning = FrictionLaw(FrictionKind.MANNING, k=0.05, mu=7.0 / 3.0)
    for cid, inflow, branch, t_pert in (
        ("swe-friction-manning-super", (2.0, 40.0), sup, 0.7),
        ("swe-friction-manning-sub", (2.0, 3.0), sub, 1.0),
    ):
        cases.append(
            CaseSpec(
                id=cid,
                description=f"Manning friction 0.05 over a smooth bump, inflow (h, q) = {inflow}",
                domain=(0.0, 25.0),
                model=_swe(lambda: bump_geometry(), manning),
                mode="time",
                t_end=2.0,
                n_default=100,
                n_list=(20, 40, 80, 160, 320),
                branch=branch,
                inflow=inflow,
                perturbation=Perturbation(1.0e-4, interval=(7.5, 9.5)),
                perturb_t_end=t_pert,
                reference_scheme=("weno7gf-ab8", 1000),
                error_against="initial",
                start_from_discrete=True,
            )
        )

    return {c.id: c for c in cases}


CASES: dict[str, CaseSpec] = _registry()


def list_cases() -> list[str]:
    return list(CASES)


def get_case(case_id: str) -> CaseSpec:
    try:
        return CASES[case_id]
    except KeyError:
        raise UsageError(
            f"unknown case {case_id!r}; known cases: {', '.join(CASES)}"
        ) from None


# }}}


# {{{ setup


def discrete_steady_state(case: CaseSpec, scheme: Scheme, grid: Grid, solver: Solver) -> GhostedState | None:
    """The scheme's own stationary state, when it can be computed directly.

    Lakes at rest with the bathymetry correction are exactly ``eta = 2``
    over the quadrature bathymetry; other cases use a sweep on the ghost
    extended mesh. Returns ``None`` when neither applies (baseline scheme,
    transcritical flow).
    """
    model = solver.model
    if not scheme.well_balanced:
        return None
    if case.water_at_rest:
        Ht = solver.bathymetry
        U = np.stack([2.0 + Ht, np.zeros_like(Ht)], axis=-1)
        return GhostedState(grid, solver.ghost, U)
    if case.branch is None:
        return None

    exact = None
    if case.exact is not None:
        exact = lambda x: case.exact(model, x, 0.0)  # noqa: E731
    problem = SteadyProblem(
        model,
        scheme.rule,
        grid,
        case.branch,
        registry=solver.config.registry,
        exact=exact,
        initial=None if case.inflow is None else np.array(case.inflow),
        ghost=solver.ghost,
    )
    try:
        return steady_sweep_extended(problem)
    except SonicStateError as exc:
        if case.exact is None:
            raise
        # coarse sweeps can choke in the ghost band; the exact state still serves
        logger.info("no discrete steady state for %s: %s", case.id, exc)
        return None


def build_solver(case: CaseSpec, scheme: Scheme, n: int, **overrides: Any) -> tuple[ModelSpec, Grid, Solver]:
    model = case.model()
    grid = case.make_grid(n)
    registry = SingularityRegistry()
    if scheme.well_balanced:
        registry = SingularityRegistry.from_geometry(model.geometry, grid)
    cfg_kwargs: dict[str, Any] = dict(
        weno=scheme.weno,
        rule=scheme.rule,
        registry=registry,
        water_at_rest_fix=case.water_at_rest and scheme.well_balanced,
    )
    if case.extra.get("time_order_matched"):
        # keep the RK3 time error below the spatial one: dt ~ dx^(r/3)
        r = scheme.weno.p if scheme.rule is None else min(scheme.weno.p, scheme.rule.order)
        cfg_kwargs["dt_exponent"] = max(1.0, r / 3.0)
    if "weno_eps" in case.extra:
        cfg_kwargs["weno_eps"] = case.extra["weno_eps"]
    cfg_kwargs.update(overrides)
    provisional = SchemeConfig(**cfg_kwargs)
    solver = Solver(model, grid, provisional)
    return model, grid, solver


def prepare(case_id: str | CaseSpec, scheme_id: str | Scheme, n: int, **overrides: Any) -> Setup:
    """Model, solver, initial data and reference values for one run."""
    case = get_case(case_id) if isinstance(case_id, str) else case_id
    scheme = Scheme.parse(scheme_id) if isinstance(scheme_id, str) else scheme_id
    boundary_override = overrides.pop("boundary", None)
    model, grid, solver = build_solver(case, scheme, n, **overrides)
    x = grid.nodes()

    setup = Setup(case, scheme, grid, model, solver, np.empty(0), None)
    discrete = discrete_steady_state(case, scheme, grid, solver)

    if boundary_override is not None:
        boundary = boundary_override
    elif case.boundary is not None:
        boundary = case.boundary(model, setup)
    elif discrete is not None:
        boundary = Frozen.from_ghosted(discrete)
    else:
        boundary = BoundaryPolicy()
    cfg = SchemeConfig(**{**solver.config.__dict__, "boundary": boundary})
    solver = Solver(model, grid, cfg)
    setup.solver = solver

    if case.start_from_discrete and discrete is not None:
        initial = discrete.physical.copy()
    elif case.exact is not None:
        initial = case.exact(model, x, 0.0)
    elif case.inflow is not None:
        # baseline scheme on a case without closed form: use an accurate sweep
        fallback = Scheme.parse(f"weno{scheme.weno.p}gf-am8")
        _, _, fb_solver = build_solver(case, fallback, n)
        initial = discrete_steady_state(case, fallback, grid, fb_solver).physical.copy()
    else:
        raise ConfigurationError(f"case {case.id} has no initial data")

    setup.initial = np.asarray(initial, dtype=np.float64)
    setup.discrete = discrete
    if case.error_against == "initial":
        setup.reference = setup.initial.copy()
    elif case.exact is not None:
        t_ref = case.t_end if case.mode == "time" else 0.0
        setup.reference = case.exact(model, x, t_ref or 0.0)
    return setup


# }}}
