"""First Robin eigenvalue of the p-Laplacian on the exterior of a ball.

Main entry points:

* :func:`robinext.shooting.solve_lambda1_ball` -- nonlinear shooting solver
  (bisection on a Riccati log-derivative ODE);
* :mod:`robinext.besselref` -- exact p = 2 reference via modified Bessel
  functions;
* :mod:`robinext.variational` -- independent truncated Rayleigh-quotient
  minimization;
* :mod:`robinext.geometry` -- notched-disk divergence and ellipsoid
  curvature comparisons;
* :mod:`robinext.verify` -- cross-validation property suites.
"""

from .core import (
    EigenvalueBracket,
    NoBracket,
    NoNegativeEigenvalue,
    ProblemParams,
    StepFailure,
    critical_sandwich_bounds,
    decay_rate,
    lambda1_halfline,
    scale_eigenvalue,
    scale_problem,
    small_alpha_envelope,
    steklov_threshold,
    strong_coupling_expansion,
)
from .shooting import (
    EigenResult,
    GTrajectory,
    ShotClass,
    SolverOptions,
    TerminationCause,
    classify_shot,
    effective_robin_ratio,
    eigenfunction_from_g,
    integrate_g,
    solve_lambda1_ball,
)
from .besselref import BesselUnderflow, bessel_k, lambda1_ball_p2, segura_ratio_gap
from .variational import (
    DidNotConverge,
    QuotientBreakdown,
    RadialProfile,
    minimize_truncated,
    rayleigh_quotient,
)
from .geometry import (
    EllipsoidSpec,
    PacDomainSpec,
    comparator_threshold,
    ellipsoid_hmax_ext,
    equal_volume_ball_hmax_ext,
    expansion_comparator,
    pac_quotient,
)
from .verify import VerificationReport, run_all, run_check

__version__ = "0.1.0"

__all__ = [
    "BesselUnderflow",
    "DidNotConverge",
    "EigenResult",
    "EigenvalueBracket",
    "EllipsoidSpec",
    "GTrajectory",
    "NoBracket",
    "NoNegativeEigenvalue",
    "PacDomainSpec",
    "ProblemParams",
    "QuotientBreakdown",
    "RadialProfile",
    "ShotClass",
    "SolverOptions",
    "StepFailure",
    "TerminationCause",
    "VerificationReport",
    "bessel_k",
    "classify_shot",
    "comparator_threshold",
    "critical_sandwich_bounds",
    "decay_rate",
    "effective_robin_ratio",
    "eigenfunction_from_g",
    "ellipsoid_hmax_ext",
    "equal_volume_ball_hmax_ext",
    "expansion_comparator",
    "integrate_g",
    "lambda1_ball_p2",
    "lambda1_halfline",
    "minimize_truncated",
    "pac_quotient",
    "rayleigh_quotient",
    "run_all",
    "run_check",
    "scale_eigenvalue",
    "scale_problem",
    "segura_ratio_gap",
    "small_alpha_envelope",
    "solve_lambda1_ball",
    "steklov_threshold",
    "strong_coupling_expansion",
    "__version__",
]
