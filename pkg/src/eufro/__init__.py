"""Euler-Frobenius numbers, rounded uniform sums, and their applications.

An exact-arithmetic kernel (triangle recursion, row polynomials, special
number sequences) backs every other layer: the distribution of rounded
sums of uniforms, floating-point asymptotics, seeded rounding and
apportionment experiments, and cardinal-spline evaluation.  The `eufro`
command-line tool exposes all of it for batch use; `eufro selftest` runs
the exact identity suite.
"""

from .ef_core import (
    EFTable,
    RhoPoly,
    bernoulli_number,
    benoumhani_poly,
    ef_explicit,
    ef_number,
    ef_number_poly,
    ef_row,
    ef_row_poly,
    euler_number,
    euler_polynomial_value,
    geometric_moment,
    tangent_number,
    type_b,
)
from .uniform_sum import (
    EFDistribution,
    IntPmf,
    QuadratureError,
    char_fn_exact,
    char_fn_series,
    ef_cdf,
    ef_cumulant,
    ef_distribution,
    ef_moment,
    ef_pgf_eval,
    ef_pmf,
    ef_via_integral,
    irwin_hall_cdf,
    irwin_hall_moment,
    irwin_hall_pdf,
    pdf_via_ef,
    slice_volume,
)
from .asymptotics import (
    SaddleResult,
    clt_zscore,
    hermite_poly,
    ldev_approx,
    llt_approx,
    q_poly,
    saddle_solve,
)
from .rounding_apportion import (
    ApportionmentError,
    ApportionmentOutcome,
    ApportionmentTieError,
    DiscrepancyExperiment,
    DiscrepancyResult,
    RngStream,
    apportion_divisor,
    apportion_droop,
    apportion_hare,
    discrepancy_exact_pmf,
    hare_bias_density,
    rho_round,
    sample_simplex,
    simulate_discrepancy,
    simulate_rounded_sum,
    simulate_seat_bias,
    simulate_symmetric,
)
from .spline_kit import (
    BernoulliFactors,
    RootList,
    bernoulli_factors,
    bspline_eval,
    cardinal_solvable,
    ef_roots,
    exp_spline,
)

__version__ = "0.1.0"
