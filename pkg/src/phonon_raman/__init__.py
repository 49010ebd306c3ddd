"""Detecting condensate phonons by doubly detuned Raman transfer, with analogue-gravity estimators."""

__version__ = "0.1.0"

from .errors import ConsistencyError, DomainError, IntegrationError
from .units_params import CondensateParams, SiConversion, derive_condensate

__all__ = [
    "CondensateParams",
    "ConsistencyError",
    "DomainError",
    "IntegrationError",
    "SiConversion",
    "derive_condensate",
]
