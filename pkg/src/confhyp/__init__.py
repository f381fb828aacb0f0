"""Products of confluent hypergeometric functions and their integrals.

The central object is W(alpha, beta, gamma, delta; z), the solution of

    -z f'(z) + beta f(z) = E(alpha+1; delta; z) E(alpha+gamma; beta; -z)

built from MacRobert's E-function, together with the Kampe de Feriet and
Appell F2 double series it leads to.
"""

from .core import EvalResult, binomial, gamma, loggamma, pochhammer, reciprocal_gamma, stirling_magnitude
from .doubleseries import AppellF2Spec, KdFSpec, appell_f2, kdf_eval
from .errors import (
    DomainError,
    NoConvergence,
    ParameterError,
    PoleError,
    QuadratureFailure,
    SpecialFunctionError,
)
from .hyperseries import DEFAULT_CONTROL, ParamList, SeriesControl, kummer_m, pfq
from .identities import IdentityReport, recurrence_8, sum_identity_10
from .integrals import (
    IntegralSpec,
    LaplaceSpec,
    integral_closed_general,
    integral_closed_l0,
    integral_closed_l0_alt,
    laplace_integral_f2,
    quadrature_oracle,
)
from .macrobert import EFunctionSpec, e_eval, e_moment_sum, efun
from .wfunction import (
    WArgs,
    ode_residual,
    tail_estimate,
    w_inverse_power_coefficients,
    w_asymptotic_infinity,
    w_asymptotic_zero,
    w_eval,
    w_eval_eseries,
    w_eval_integral,
    w_eval_kdf,
)

__version__ = "0.1.0"
