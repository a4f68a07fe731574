"""Christoffel and Geronimus (Darboux) transformations of complex Jacobi
matrices, with the zero-location, spectral, and recurrence-relation
machinery to verify their properties at desk scale."""

from .core import (
    CHEBYSHEV_KINDS,
    DEFAULT_N_MAX,
    Family,
    RecurrenceCoeffs,
    SymmetricJacobi,
    family_coeffs,
    moments,
    symmetrize,
)
from .darboux import (
    GeronimusChain,
    TransformPoint,
    TransformedCoeffs,
    cauchy_s0star,
    christoffel,
    christoffel_two,
    geronimus,
    geronimus_cauchy,
    geronimus_eval,
    kernel_eval,
)
from .errors import (
    ConfigurationError,
    DarbouxError,
    DegeneracyError,
    EigenSolverError,
    ExistenceError,
    FactorBreakdownError,
    PoleError,
    PrefixError,
    QuadratureError,
    QuasiDefinitenessError,
    ResidualCheckError,
    ZeroHitError,
)
from .factorization import (
    LowerFactor,
    UpperFactor,
    build_JC,
    build_JG,
    lower_from_upper,
    lu_factor,
    ul_factor,
)
from .polyeval import EvalTriple, RatioSequence, eval_P, eval_Q, eval_R, evaluate, ratio_sequence
from .rseq import (
    QuasiOrthogonal,
    RICoefficients,
    RIICoefficients,
    r1_coeffs,
    r1_general,
    r2_coeffs,
    rational_eval,
    varying_measure_polys,
)
from .spectral import (
    MFunctionSeries,
    NevaiDiagnostics,
    ZeroCloud,
    mfunction_series,
    nevai_diagnostics,
    ratio_asymptotic_check,
    ratio_limit_f,
    strip_check,
    truncation_spectrum,
    verify_m_identities,
    zero_dynamics,
    zeros,
)

__version__ = "0.1.0"
