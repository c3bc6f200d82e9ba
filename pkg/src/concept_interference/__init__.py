"""Two-concept interference models: data handling, fitting, rendering.

The package fits a complex amplitude model to typicality tables (three
probability columns per exemplar: concept A, concept B, combined concept),
producing per-exemplar interference phases, signed magnitudes, a closing
coefficient, explicit state vectors and verification residuals, and renders
the corresponding two-Gaussian interference landscapes as raster grids.
"""

from .dataset import (
    DEFAULT_SUM_TOLERANCE,
    ExemplarRecord,
    TypicalityTable,
    fruits_vegetables,
    fruits_vegetables_csv,
    parse_table,
    render_csv,
    validate_and_normalize,
)
from .errors import (
    ConceptInterferenceError,
    DegeneracyError,
    DimensionError,
    FitError,
    InfeasibilityError,
    OrthogonalityError,
    ParseError,
    ValidationError,
)
from .hilbert import (
    ProjectorLayout,
    as_state_vector,
    inner_product,
    norm,
    project_probability,
    superpose_normalized,
)
from .solver import (
    Classification,
    FeasibilityReport,
    InterferenceSolution,
    SignStep,
    VerificationReport,
    assign_signs,
    build_state_vectors,
    classify_exemplars,
    compute_cm,
    compute_deviations,
    compute_lambda_magnitudes,
    compute_phases,
    measure_residuals,
    sign_assignment_trace,
    solve,
    verify_solution,
)
from .thresholds import CONFIG_ENV_VAR, Thresholds
from .wavefield import (
    ConstantPhaseField,
    GaussianField,
    PhaseField,
    Placement,
    PlacementMap,
    RasterGrid,
    circle_intersections,
    cos_deg,
    default_window,
    fit_gaussian_fields,
    grid_to_csv,
    grid_to_pgm,
    interpolate_phase,
    place_exemplars,
    placements_to_csv,
    render_grids,
)

__version__ = "0.1.0"

__all__ = [
    "CONFIG_ENV_VAR",
    "Classification",
    "ConceptInterferenceError",
    "ConstantPhaseField",
    "DEFAULT_SUM_TOLERANCE",
    "DegeneracyError",
    "DimensionError",
    "ExemplarRecord",
    "FeasibilityReport",
    "FitError",
    "GaussianField",
    "InfeasibilityError",
    "InterferenceSolution",
    "OrthogonalityError",
    "ParseError",
    "PhaseField",
    "Placement",
    "PlacementMap",
    "ProjectorLayout",
    "RasterGrid",
    "SignStep",
    "Thresholds",
    "TypicalityTable",
    "ValidationError",
    "VerificationReport",
    "as_state_vector",
    "assign_signs",
    "build_state_vectors",
    "circle_intersections",
    "classify_exemplars",
    "compute_cm",
    "compute_deviations",
    "compute_lambda_magnitudes",
    "compute_phases",
    "cos_deg",
    "default_window",
    "fit_gaussian_fields",
    "fruits_vegetables",
    "fruits_vegetables_csv",
    "grid_to_csv",
    "grid_to_pgm",
    "inner_product",
    "interpolate_phase",
    "measure_residuals",
    "norm",
    "parse_table",
    "place_exemplars",
    "placements_to_csv",
    "project_probability",
    "render_csv",
    "render_grids",
    "sign_assignment_trace",
    "solve",
    "superpose_normalized",
    "validate_and_normalize",
    "verify_solution",
]
