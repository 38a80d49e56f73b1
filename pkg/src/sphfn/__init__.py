"""Spherical functions for Euclidean motion groups R^n x K.

The central object is the K-averaged plane wave

    phi_xi(x) = average over k in K of exp(i b(x, k xi)),

where b is the bilinear (not Hermitian) extension of the dot product to
complex arguments and K is a closed subgroup of O(n).  The package
evaluates phi_xi exactly for finite K, by quadrature for tori, in closed
Bessel form when K acts transitively on spheres, and by Haar Monte Carlo
otherwise.  On top of evaluation it offers the functional-equation and
Laplacian eigenvalue checks, invariant fingerprints that decide when two
spectra give the same function, positive-definiteness verdicts for Gram
matrices, and the spherical transform of radial or grid profiles.
"""

from .bessel import (
    ClosedFormQuery,
    bessel_j,
    closed_form_spherical,
    closed_form_values,
    normalization_constant,
    poisson_integral_form,
)
from .errors import (
    BasisMismatch,
    ConfigError,
    DegenerateBasis,
    DegreeCapExceeded,
    DimensionMismatch,
    FingerprintUnsupported,
    GridTooCoarse,
    GroupTooLarge,
    NonOrthogonalGenerator,
    NonUnitaryInput,
    NotFinite,
    OrbitTestUnsupported,
    OverflowRisk,
    ProbeAtZero,
    SeriesNotConverged,
    SphfnError,
    UnsupportedSampler,
)
from .evaluate import (
    METHOD_CLOSED_FORM,
    METHOD_FINITE_SUM,
    METHOD_MONTE_CARLO,
    METHOD_TORUS_QUADRATURE,
    EvalConfig,
    EvalResult,
    FunctionalEquationReport,
    SpectralParam,
    bilinear_form,
    eigen_check,
    eval_spherical,
    eval_spherical_batch,
    induced_average,
    lattice_compatible,
    quasicharacter,
    spectral_scale,
    verify_functional_equation,
)
from .groups import (
    GroupElement,
    GroupHandle,
    GroupSpec,
    build_group,
    close_generated,
    haar_samples,
    orbit_equal_real,
    realify,
    realify_quaternion,
)
from .invariants import (
    InvariantPolynomial,
    QuotientPoint,
    compare_points,
    equivalent,
    fingerprint,
    reynolds_basis,
    separation_probe,
)
from .motions import MotionElement, motion_identity, translation
from .posdef import (
    VERDICT_CONSISTENT,
    VERDICT_VIOLATED,
    GramReport,
    GridFunction,
    RadialProfile,
    TransformResult,
    gram_matrix,
    posdef_verdict,
    sphere_area,
    spherical_transform,
)

__version__ = "0.1.0"

__all__ = [
    "BasisMismatch",
    "ClosedFormQuery",
    "ConfigError",
    "DegenerateBasis",
    "DegreeCapExceeded",
    "DimensionMismatch",
    "EvalConfig",
    "EvalResult",
    "FingerprintUnsupported",
    "FunctionalEquationReport",
    "GramReport",
    "GridFunction",
    "GridTooCoarse",
    "GroupElement",
    "GroupHandle",
    "GroupSpec",
    "GroupTooLarge",
    "InvariantPolynomial",
    "METHOD_CLOSED_FORM",
    "METHOD_FINITE_SUM",
    "METHOD_MONTE_CARLO",
    "METHOD_TORUS_QUADRATURE",
    "MotionElement",
    "NonOrthogonalGenerator",
    "NonUnitaryInput",
    "NotFinite",
    "OrbitTestUnsupported",
    "OverflowRisk",
    "ProbeAtZero",
    "QuotientPoint",
    "RadialProfile",
    "SeriesNotConverged",
    "SpectralParam",
    "SphfnError",
    "TransformResult",
    "UnsupportedSampler",
    "VERDICT_CONSISTENT",
    "VERDICT_VIOLATED",
    "bessel_j",
    "bilinear_form",
    "build_group",
    "close_generated",
    "closed_form_spherical",
    "closed_form_values",
    "compare_points",
    "eigen_check",
    "equivalent",
    "eval_spherical",
    "eval_spherical_batch",
    "fingerprint",
    "gram_matrix",
    "haar_samples",
    "induced_average",
    "lattice_compatible",
    "motion_identity",
    "normalization_constant",
    "orbit_equal_real",
    "poisson_integral_form",
    "posdef_verdict",
    "quasicharacter",
    "realify",
    "realify_quaternion",
    "reynolds_basis",
    "separation_probe",
    "spectral_scale",
    "sphere_area",
    "spherical_transform",
    "translation",
    "verify_functional_equation",
]
