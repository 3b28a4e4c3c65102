"""Numerical laboratory for linear summability means of Fourier series.

Submodules:

- ``periodic``: periodic functions, Fourier coefficients, partial sums
- ``kernels``: trigonometric polynomials, classical kernels, L1 norms
- ``multipliers``: multiplier functions, method catalog, linear means
- ``points``: d-point/l-point classification and witness functions
- ``lab``: convergence experiments producing ``ExperimentRecord`` rows
- ``wiener``: Wiener-algebra diagnostics for multiplier functions
- ``catalog`` / ``cli``: descriptor parsing and the command-line runner
"""

from .catalog import DescriptorError, parse_function, parse_method, parse_multiplier
from .kernels import (
    IDENTITIES,
    BoundsReport,
    TrigPolynomial,
    conjugate_dirichlet_kernel,
    conjugate_fejer_kernel,
    dirichlet_kernel,
    fejer_kernel,
    identity_residual,
    l1_norm,
    sidon_bound_check,
)
from .lab import (
    ExperimentRecord,
    converges_over,
    l_point_settling,
    convergence_equivalence,
    divergence_experiment,
    fejer_mean,
    fejer_rate_check,
    lebesgue_method_identity,
    method_comparison,
    necessary_condition_experiment,
    records_to_csv,
    records_to_json,
    salem_checks,
    theorem1_constant,
    theorem1_experiment,
)
from .multipliers import (
    DiscreteMeasure,
    MultiplierFamily,
    MultiplierFunction,
    catalog_family,
    endpoint_corrected,
    kernel_of,
    linear_means,
    multiplier_function,
)
from .periodic import (
    PeriodicFunction,
    averaged_primitive,
    fourier_coefficient,
    fourier_coefficients,
    modulus_of_continuity,
    partial_sum,
)
from .points import (
    CounterexampleParams,
    PointClassification,
    classify_point,
    counterexample_pair,
    oscillating_witness,
)
from .wiener import (
    ADensityReport,
    Theorem2Report,
    a_density,
    lemma_quantities,
    phi_n_family_norms,
    theorem2_report,
)

__version__ = "0.1.0"
