"""Closed-form moments of weighted mean squares of Dirichlet L-functions on
the critical line, Taylor coefficients of the attached period functions, and
the numerical oracles that cross-check both.

Characters follow the Conrey labeling convention (q, n) as used by the LMFDB.
All floating computation runs through mpmath at a caller-chosen bit precision.
"""

from .arith import (
    NonConvergenceError,
    NonFiniteError,
    PrecisionContext,
    PrecisionError,
)
from .characters import (
    CharacterLabel,
    DirichletCharacter,
    GaussSumValue,
    char_value,
    character,
    conductor,
    conjugate,
    enumerate_primitive,
    euler_phi,
    gauss_sum,
    general_gauss_sum,
    is_primitive,
    parity,
)
from .closedform import (
    MomentResult,
    PsiCoeff,
    b_coeff,
    c1_coeff,
    c_minus1_coeff,
    kappa,
    moment0_odd_quadratic,
    moment_closed,
    psi_coeff,
    psi_coeffs,
    t_factor,
)
from .combinat import (
    bernoulli_number,
    bernoulli_poly,
    bernoulli_product_classes,
    gen_bernoulli,
    stirling2,
    stirling_noncentral_half,
)
from .emsum import (
    CAnalyticDescriptor,
    EMExpansion,
    desc_exp,
    desc_fchi,
    desc_fermi,
    desc_gauss,
    em_direct_sum,
    em_eval,
    em_expand,
    exp_shift_sum,
    shift_constant,
)
from .lfunc import (
    LEvalParams,
    auto_params,
    completed_l,
    f_chi,
    f_chi_complex,
    funceq_residual,
    hurwitz_zeta,
    l_value,
    q_chi,
    switch_point,
)
from .oracles import (
    a_chi_continued,
    a_chi_direct,
    eisenstein,
    mellin_check,
    moment_quadrature,
    psi_chi,
    psi_coeff_oracle,
    r_chi,
    verify_epm1,
    verify_fund_lemma,
)
from .quadrature import (
    QuadratureSpec,
    gauss_legendre_nodes,
    geometric_edges,
    integrate,
    linear_edges,
)

__version__ = "0.1.0"

__all__ = [
    "CAnalyticDescriptor",
    "CharacterLabel",
    "DirichletCharacter",
    "EMExpansion",
    "GaussSumValue",
    "LEvalParams",
    "MomentResult",
    "NonConvergenceError",
    "NonFiniteError",
    "PrecisionContext",
    "PrecisionError",
    "PsiCoeff",
    "QuadratureSpec",
    "a_chi_continued",
    "a_chi_direct",
    "auto_params",
    "b_coeff",
    "bernoulli_number",
    "bernoulli_poly",
    "bernoulli_product_classes",
    "c1_coeff",
    "c_minus1_coeff",
    "char_value",
    "character",
    "completed_l",
    "conductor",
    "conjugate",
    "desc_exp",
    "desc_fchi",
    "desc_fermi",
    "desc_gauss",
    "eisenstein",
    "em_direct_sum",
    "em_eval",
    "em_expand",
    "enumerate_primitive",
    "euler_phi",
    "exp_shift_sum",
    "f_chi",
    "f_chi_complex",
    "funceq_residual",
    "gauss_legendre_nodes",
    "gauss_sum",
    "gen_bernoulli",
    "general_gauss_sum",
    "geometric_edges",
    "hurwitz_zeta",
    "integrate",
    "is_primitive",
    "kappa",
    "l_value",
    "linear_edges",
    "mellin_check",
    "moment0_odd_quadratic",
    "moment_closed",
    "moment_quadrature",
    "parity",
    "psi_chi",
    "psi_coeff",
    "psi_coeff_oracle",
    "psi_coeffs",
    "q_chi",
    "r_chi",
    "shift_constant",
    "stirling2",
    "stirling_noncentral_half",
    "switch_point",
    "t_factor",
    "verify_epm1",
    "verify_fund_lemma",
]
