from .theta import (
    ThetaResult,
    conductor_excess,
    TruncationError,
    char_component,
    degree_bound,
    delta_sigma,
    euler_product,
    frobenius_counts,
    product_of_components,
    theta,
)
from .verify import (
    VerificationReport,
    h2_module,
    tl_motive_model,
    verify_brumer_stark,
    verify_coates_sinnott_genus0,
    verify_fitting_identity_finite_level,
    verify_mu_annihilation,
)
