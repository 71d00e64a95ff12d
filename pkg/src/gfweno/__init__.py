"""High-order well-balanced WENO schemes with global-flux quadrature."""

from __future__ import annotations

from gfweno.benchmark import (
    convergence_study,
    l1_error,
    observed_order,
    perturbation_study,
    run_case,
)
from gfweno.cases import CASES, Scheme, get_case, list_cases, list_schemes, prepare
from gfweno.errors import (
    BlowUpError,
    ConfigurationError,
    DivergenceError,
    DomainError,
    GFWenoError,
    InadmissibleJumpError,
    IterationError,
    NoRootError,
    SingularJumpError,
    SonicStateError,
    UsageError,
)
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
    State,
)
from gfweno.quadrature import (
    Family,
    MultiStepRule,
    SingularityRegistry,
    build_global_flux,
    multistep_weights,
    reduced_weights,
)
from gfweno.solver import (
    BoundaryPolicy,
    DirichletExact,
    Extrapolate,
    Periodic,
    RunResult,
    SchemeConfig,
    Solver,
    SubcriticalInlet,
    SubcriticalOutlet,
    SupercriticalInlet,
)
from gfweno.steady import SteadyProblem, steady_residual, steady_sweep, steady_sweep_extended
from gfweno.weno import WenoOrder, weno_reconstruct_left, weno_reconstruct_right

__all__ = [
    "CASES",
    "BlowUpError",
    "BoundaryPolicy",
    "BurgersModel",
    "ConfigurationError",
    "DirichletExact",
    "DivergenceError",
    "DomainError",
    "Extrapolate",
    "Family",
    "FluxBranch",
    "FrictionKind",
    "FrictionLaw",
    "GFWenoError",
    "Geometry",
    "GhostedState",
    "Grid",
    "InadmissibleJumpError",
    "IterationError",
    "ModelSpec",
    "MultiStepRule",
    "NoRootError",
    "Periodic",
    "RunResult",
    "SchemeConfig",
    "Scheme",
    "ShallowWaterModel",
    "SingularJumpError",
    "SingularityRegistry",
    "Solver",
    "SonicStateError",
    "State",
    "SteadyProblem",
    "SubcriticalInlet",
    "SubcriticalOutlet",
    "SupercriticalInlet",
    "UsageError",
    "WenoOrder",
    "build_global_flux",
    "convergence_study",
    "get_case",
    "l1_error",
    "list_cases",
    "list_schemes",
    "multistep_weights",
    "observed_order",
    "perturbation_study",
    "prepare",
    "reduced_weights",
    "run_case",
    "steady_residual",
    "steady_sweep",
    "steady_sweep_extended",
    "weno_reconstruct_left",
    "weno_reconstruct_right",
]
