"""Exception types shared across the package."""


class FullDickeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FullDickeError, ValueError):
    """Input outside the physical or documented domain of an operation."""


class PhaseError(DomainError):
    """Operation called in the wrong thermodynamic phase."""


class ConvergenceError(FullDickeError, RuntimeError):
    """An iterative or truncated numerical scheme did not stabilize."""


class NonrealError(FullDickeError, RuntimeError):
    """A collective mode energy came out non-real.

    Inside the valid phase regions all excitation energies are real, so this
    signals an internal inconsistency or an out-of-phase call; it is never
    silently clamped away.
    """


class CapacityError(FullDickeError, RuntimeError):
    """Requested matrix dimension exceeds the configured bound."""


class TruncationError(FullDickeError, RuntimeError):
    """Observables are not stable under a Fock-cutoff increase."""


class ConfigError(FullDickeError, ValueError):
    """Malformed sweep configuration document."""
