"""Spectral toolkit for the canonical Laplacian on O(m) over the projective line."""
from .bessel import (
    DEFAULT_POLICY,
    EvalPolicy,
    bessel_i,
    bessel_j,
    bessel_j_orders,
    bessel_j_prime,
    bessel_j_zeros,
    bessel_jp_zeros,
)
from .errors import (
    CanonLapError,
    ConsistencyError,
    CSVFormatError,
    DomainError,
    NumericError,
    RangeError,
    ZeroFindingError,
)
from .expansion import (
    ExpansionCoefficients,
    delta_nu,
    expand,
    monomial_bessel_integral,
    monomial_identity_error,
    parseval_defect,
    partial_sum,
)
from .hilbert import (
    DEFAULT_QUADRATURE,
    Eigenfunction,
    Quadrature,
    RadialFunction,
    eigenfunction_eval,
    eigenfunction_norm_closed,
    inner_product_m,
    norm_m,
    orthogonality_matrix,
)
from .laplacian import ModeSection, apply_laplacian_mode, dirichlet_form, strong_weak_consistency
from .lfun import LFun, g_eval, l_eval, l_leading_term, l_prime
from .spectrum import SpectralLine, compute_spectrum, domain_seminorm, weak_eigen_certificate
from .zeros import ZeroSet, count_zeros, find_zeros, first_zeros

__version__ = "0.1.0"
