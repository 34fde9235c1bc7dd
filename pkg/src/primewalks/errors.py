"""Exception types shared across the package."""


class EmptyDomainError(ValueError):
    """Requested range contains nothing to compute (e.g. sieve limit < 2)."""


class OutOfRangeError(IndexError):
    """A table is too short for the request.

    ``required`` carries the table size (sieve limit, coefficient count)
    that would satisfy the call, when it can be estimated.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at a pole."""


class SingularFactorError(ArithmeticError):
    """An Euler factor vanishes at the evaluation point."""

    def __init__(self, message, prime):
        super().__init__(message)
        self.prime = prime


class InsufficientCoefficientsError(OutOfRangeError):
    """Coefficient table too short to reach the requested accuracy."""


class NoRootFoundError(RuntimeError):
    """No sign change found while bracketing a root.

    ``interval`` is the last interval scanned.
    """

    def __init__(self, message, interval):
        super().__init__(message)
        self.interval = interval


class VanishingCoefficientError(ArithmeticError):
    """A cusp-form coefficient c(p) is zero (Lehmer-type event)."""

    def __init__(self, message, prime):
        super().__init__(message)
        self.prime = prime


class ResourceError(MemoryError):
    """A computation would exceed the configured memory budget.

    ``estimate`` is the required number of bytes.
    """

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate
