"""Exception and warning types shared across the package."""


class NonclassicalError(Exception):
    """Base class for all package errors."""


class BoundsError(NonclassicalError, ValueError):
    """An order or index exceeds a configured limit."""


class DegenerateStateError(NonclassicalError):
    """Photon subtraction annihilates the input state, so it cannot be normalized."""


class UndefinedWitnessError(NonclassicalError):
    """A witness has a vanishing denominator for this state."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class ConvergenceError(NonclassicalError):
    """An iterative procedure did not converge within its budget."""

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class SmallSqueezingError(NonclassicalError, ValueError):
    """Raised when the raw Hermite argument A is requested at r <= EPS_R, where it diverges."""


class ErratumError(NonclassicalError):
    """No candidate convention of a closed form agrees with the Fock oracle."""


class TruncationWarning(UserWarning):
    """Fock-space cutoff leaves non-negligible weight near the truncation edge."""
