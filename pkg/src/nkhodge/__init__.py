"""Exact verification of nearly Kahler operator identities on Lie-algebra models."""

__version__ = "0.1.0"

from .exterior import Form, GramData
from .models import (
    LieAlgebraModel,
    builtin_model,
    model_from_json,
    model_to_json,
    nearly_kahler_residual,
    product_model,
    su3_extract,
    validate_model,
)
from .scalars import Scalar

__all__ = [
    "Form",
    "GramData",
    "LieAlgebraModel",
    "Scalar",
    "builtin_model",
    "model_from_json",
    "model_to_json",
    "nearly_kahler_residual",
    "product_model",
    "su3_extract",
    "validate_model",
    "__version__",
]
