"""Exception types shared across the package."""


class DomainError(ValueError):
    """A quantum-number argument lies outside its allowed range."""


class ParseError(ValueError):
    """A half-integer token could not be parsed."""


class BlockedTransitionError(DomainError):
    """A requested walk step has a vanishing coupling and cannot be driven."""


class TomographyError(RuntimeError):
    """Reconstruction input is inconsistent or degenerate."""
