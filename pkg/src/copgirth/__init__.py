"""Cops and robbers on graphs of large girth, digraphs and expanders."""

__version__ = "0.1.0"

from .errors import (AdversaryFaultError, BoundExceededError, CopGirthError, InternalError,  # noqa: E402
                     InvalidInputError, NumericalError, PreconditionError, ResourceError)
from .graph import Digraph, Graph  # noqa: E402

__all__ = ["__version__", "Graph", "Digraph", "CopGirthError", "InvalidInputError", "AdversaryFaultError",
           "PreconditionError", "ResourceError", "BoundExceededError", "NumericalError", "InternalError"]
