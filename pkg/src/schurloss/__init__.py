"""Balanced realizations of lossless discrete-time systems and the tangential Schur algorithm."""

from .canonical import StableSystem, input_normal_form, lossless_completion, output_normal_form
from .errors import NumericalError, SchurLossError, ValidationError
from .jtheory import (
    ElementaryFactor,
    blaschke,
    caratheodory,
    flip,
    halmos,
    jinner_residuals,
    junitary_decompose,
    s_factor,
    signature,
    theta_dual,
    theta_eval,
    theta_hat_eval,
    theta_hat_factor,
    x_family,
    y_family,
)
from .lft import (
    UnitaryPair,
    elementary_apply,
    elementary_deflate,
    fuv_apply,
    fuv_pointwise,
    lft_pointwise,
    mobius,
    phi_from_uv,
    uhat_vhat,
)
from .matnum import DEFAULT_TOL, ToleranceProfile, solve_stein, unitary_completion
from .realization import (
    GramianPair,
    LosslessCertificate,
    Realization,
    balance_lossless,
    cascade,
    evaluate,
    evaluate_sharp,
    gramians,
    is_lossless,
    minimal_reduce,
    random_lossless,
    random_stable,
    winding_degree,
)
from .schur import (
    Chart,
    SchurData,
    chart_contains,
    default_chart,
    pick_direction,
    random_schur_data,
    schur_decompose,
    schur_reconstruct,
)

__version__ = "0.1.0"
