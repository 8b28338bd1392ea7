"""2-D periodic pseudospectral lab for the cubic NLS and its dispersion-managed variant."""

__version__ = "0.1.0"

from .grid import (
    Field2D,
    GridSpec,
    TailMonitorError,
    band_limited_field,
    free_propagate,
    gaussian_field,
    gradient,
    laplacian,
    make_grid,
    mass,
    plane_wave,
    project_high,
    project_low,
)
from .nonlinearity import (
    QuadratureRule,
    cubic,
    defect,
    dH_dtau,
    dm_nonlinearity,
    gauss_legendre_01,
    shifted_cubic,
)
from .evolution import (
    PicardNonContraction,
    SolverInstabilityError,
    SolverParams,
    Trace,
    picard_short_time,
    solve_dmnls,
    solve_nls,
)
from .analysis import (
    DecompositionReport,
    NormReport,
    decomposition_terms,
    rescale,
    scattering_diagnostic,
    shifted_duhamel_ratio,
    spacetime_norms,
)
from .experiments import (
    ExperimentReport,
    defect_scan,
    limit_study,
    selftest,
    stability_probe,
    strichartz_probe,
)

__all__ = [
    "__version__",
    "Field2D",
    "GridSpec",
    "TailMonitorError",
    "band_limited_field",
    "free_propagate",
    "gaussian_field",
    "gradient",
    "laplacian",
    "make_grid",
    "mass",
    "plane_wave",
    "project_high",
    "project_low",
    "QuadratureRule",
    "cubic",
    "defect",
    "dH_dtau",
    "dm_nonlinearity",
    "gauss_legendre_01",
    "shifted_cubic",
    "PicardNonContraction",
    "SolverInstabilityError",
    "SolverParams",
    "Trace",
    "picard_short_time",
    "solve_dmnls",
    "solve_nls",
    "DecompositionReport",
    "NormReport",
    "decomposition_terms",
    "rescale",
    "scattering_diagnostic",
    "shifted_duhamel_ratio",
    "spacetime_norms",
    "ExperimentReport",
    "defect_scan",
    "limit_study",
    "selftest",
    "stability_probe",
    "strichartz_probe",
]
