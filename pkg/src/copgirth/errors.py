"""Exception hierarchy. Each class carries the CLI exit code for its category."""


class CopGirthError(Exception):
    exit_code = 1


class InvalidInputError(CopGirthError, ValueError):
    exit_code = 2


class AdversaryFaultError(InvalidInputError):
    """A cop strategy callback returned an illegal move."""


class PreconditionError(CopGirthError):
    exit_code = 3


class ResourceError(CopGirthError):
    exit_code = 4

    def __init__(self, message, required=None, budget=None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class BoundExceededError(CopGirthError):
    exit_code = 4

    def __init__(self, k_max):
        super().__init__(f"no cop-win found with k <= {k_max}")
        self.k_max = k_max


class NumericalError(CopGirthError):
    exit_code = 5

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InternalError(CopGirthError):
    exit_code = 70
