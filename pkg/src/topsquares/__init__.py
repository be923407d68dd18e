"""Computations with unstable modules carrying only their top Steenrod squares.

Layers:
    f2linalg        bit-packed linear algebra over F_2
    steenrod        Adem normalization, lower/upper index conventions
    unstable        finite modules, free modules, functors, validation
    lambda_algebra  truncated lambda complexes and the inclusion/projection pair
    ext             Ext tables by two independent routes, structural checks
    cli             command-line front end
"""

from .ext import (
    ExtTable,
    ext_sphere,
    ext_via_lambda,
    ext_via_resolution,
    minimal_resolution,
    stabilization_check,
)
from .lambda_algebra import lambda_k_m_basis, module_complex, sphere_complex
from .steenrod import adem_normalize, binom_mod2, verify_lower_adem
from .unstable import (
    INF,
    FiniteUModule,
    FreeDescriptor,
    free_module,
    loop,
    sphere,
    suspend,
    tensor,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ExtTable",
    "ext_sphere",
    "ext_via_lambda",
    "ext_via_resolution",
    "minimal_resolution",
    "stabilization_check",
    "lambda_k_m_basis",
    "module_complex",
    "sphere_complex",
    "adem_normalize",
    "binom_mod2",
    "verify_lower_adem",
    "INF",
    "FiniteUModule",
    "FreeDescriptor",
    "free_module",
    "loop",
    "sphere",
    "suspend",
    "tensor",
    "validate",
    "__version__",
]
