"""studentconv: exact densities, samplers and validation oracles for sums
of independent multivariate Student-t vectors (and Gaussian + Student-t),
through their infinite convex-combination decompositions."""

__version__ = "0.1.0"

from .densities import (
    ConvolutionSpec,
    RadialDensity,
    TruncationPolicy,
    fy_density,
    fz_density,
    g_component,
    gauss_student_sum_density,
    phi_component,
    student_cf,
    student_density,
    student_pair_sum_density,
    subordination_check,
)
from .errors import MomentUndefinedError, QuadratureError, TruncationError
from .mixing import (
    CoefficientSequence,
    GaussStudentParams,
    StudentPairParams,
    alpha_coeff,
    alpha_nb_limit,
    alpha_sequence,
    alpha_tail_mass,
    alpha_tail_moment,
    c_coeff,
    c_sequence,
    c_tail_mass,
    c_tail_moment,
    complete_monotonicity_defect,
    k_mean,
    k_moments,
    k_variance,
    n_mean,
    n_moments,
    n_variance,
    tau_coeff,
)
from .oracle import (
    ValidationReport,
    convolve_quadrature_1d,
    fourier_product_check,
    mc_density_check,
)
from .sampling import (
    MixingDraws,
    SampleBatch,
    sample_k,
    sample_n,
    sample_uniform_sphere,
    sample_y,
    sample_z,
)
from .specfun import (
    QuadratureConfig,
    integrate_finite,
    integrate_semi_infinite,
    kummer_psi,
    log_beta,
    log_gamma,
    log_pochhammer,
    macdonald_k,
)

__all__ = [
    "__version__",
    "QuadratureConfig",
    "log_gamma",
    "log_beta",
    "log_pochhammer",
    "macdonald_k",
    "kummer_psi",
    "integrate_finite",
    "integrate_semi_infinite",
    "GaussStudentParams",
    "StudentPairParams",
    "CoefficientSequence",
    "alpha_coeff",
    "alpha_sequence",
    "c_coeff",
    "c_sequence",
    "k_mean",
    "k_variance",
    "k_moments",
    "n_mean",
    "n_variance",
    "n_moments",
    "alpha_nb_limit",
    "complete_monotonicity_defect",
    "tau_coeff",
    "alpha_tail_mass",
    "c_tail_mass",
    "alpha_tail_moment",
    "c_tail_moment",
    "RadialDensity",
    "TruncationPolicy",
    "ConvolutionSpec",
    "student_density",
    "g_component",
    "phi_component",
    "fz_density",
    "fy_density",
    "gauss_student_sum_density",
    "student_pair_sum_density",
    "student_cf",
    "subordination_check",
    "SampleBatch",
    "MixingDraws",
    "sample_uniform_sphere",
    "sample_k",
    "sample_n",
    "sample_z",
    "sample_y",
    "ValidationReport",
    "convolve_quadrature_1d",
    "mc_density_check",
    "fourier_product_check",
    "QuadratureError",
    "TruncationError",
    "MomentUndefinedError",
]
