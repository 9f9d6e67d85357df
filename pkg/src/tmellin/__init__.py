"""Twisted Mellin transform: M f(s) = int f(x) x**s e**-x dx / Gamma(s+1)."""
from ._backend import BACKEND
from .asymptotics import (
    ExpansionResult,
    expansion,
    n_expansion,
    n_expansion_coefficients,
    n_expansion_terms,
    n_twisted,
    remainder_scan,
)
from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    FitError,
    ScaleError,
    TMellinError,
    TruncationWarning,
    UnsupportedError,
)
from .functions import (
    Combination,
    Const,
    Cosine,
    Damped,
    Derivative,
    ExpDecay,
    FunctionSpec,
    Gaussian,
    Geom,
    LogPower,
    LogTimes,
    Poly,
    Power,
    ProductPower,
    RationalDecay,
    Sampled,
    Scaled,
    Sine,
    Todd,
)
from .quadrature import (
    GaussLaguerreRule,
    TransformValue,
    adaptive_transform,
    build_rule,
    integrate,
    monte_carlo_oracle,
)
from .specfun import (
    SpecFunConfig,
    complex_ln_gamma,
    digamma,
    gamma_ratio,
    ln_gamma,
    polygamma,
    zeta,
)
from .transform import (
    alpha_twisted,
    check_identity,
    closed_form,
    complex_closed_form,
    invert,
    schwartz_decay_probe,
    twisted_mellin,
)

__version__ = "0.1.0"
