"""Three-body power-law oscillators on a line: exact trigonometric closed
forms, potential landscape analysis, strong-repulsion harmonic spectra and
desk-scale finite-difference validation."""

from .coordinates import (
    WEDGE,
    JacobiConfig,
    ParticleConfig,
    PolarConfig,
    from_jacobi,
    pair_differences,
    polar_map,
    to_jacobi,
)
from .eigensolver import (
    EigenResult,
    Grid1D,
    SeparableParts,
    WedgeGrid,
    assemble_wedge_operator,
    detect_separability,
    radial_grid_for,
    solve_radial,
    solve_separable,
    solve_wedge,
    wedge_grid_for,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    CriticalRadiusNotFound,
    GridTooCoarseError,
    NoMinimumError,
    NonConvexError,
    NotAMinimumError,
    SingularConfigurationError,
    SolverError,
)
from .landscape import (
    CONFINING,
    MID_ANGLE,
    NON_CONFINING,
    CriticalPoint,
    LandscapeReport,
    angular_minima,
    classify,
    confinement_bound,
    critical_radius,
    hessian_at_minimum,
    landscape_report,
    symmetry_line_minimum,
)
from .osculation import (
    HarmonicApproximation,
    RadialPotential,
    SpectrumTable,
    approximate_spectrum,
    harmonic_approximation,
    radial_taylor,
    rho_approx_spectrum,
    sho_exact_spectrum,
    sho_osculate,
)
from .trigform import (
    LaurentPoly,
    PotentialPartials,
    PotentialSpec,
    TrigForm,
    brute_force_omega,
    closed_form_omega,
    evaluate_potential,
    form_to_json_dict,
    form_to_text,
    potential_partials,
    power_sum,
)

__version__ = "0.1.0"

__all__ = [
    "WEDGE", "JacobiConfig", "ParticleConfig", "PolarConfig",
    "from_jacobi", "pair_differences", "polar_map", "to_jacobi",
    "EigenResult", "Grid1D", "SeparableParts", "WedgeGrid",
    "assemble_wedge_operator", "detect_separability", "radial_grid_for",
    "solve_radial", "solve_separable", "solve_wedge", "wedge_grid_for",
    "ConfigError", "ConvergenceError", "CriticalRadiusNotFound",
    "GridTooCoarseError", "NoMinimumError", "NonConvexError",
    "NotAMinimumError", "SingularConfigurationError", "SolverError",
    "CONFINING", "MID_ANGLE", "NON_CONFINING", "CriticalPoint",
    "LandscapeReport", "angular_minima", "classify", "confinement_bound",
    "critical_radius", "hessian_at_minimum", "landscape_report",
    "symmetry_line_minimum",
    "HarmonicApproximation", "RadialPotential", "SpectrumTable",
    "approximate_spectrum", "harmonic_approximation", "radial_taylor",
    "rho_approx_spectrum", "sho_exact_spectrum", "sho_osculate",
    "LaurentPoly", "PotentialPartials", "PotentialSpec", "TrigForm",
    "brute_force_omega", "closed_form_omega", "evaluate_potential",
    "form_to_json_dict", "form_to_text", "potential_partials", "power_sum",
    "__version__",
]
