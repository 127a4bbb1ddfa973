"""Exception types shared across the package."""


class EcsError(Exception):
    """Base class for all package errors."""


class DistributionFormatError(EcsError, ValueError):
    """Raised on a malformed or invalid distribution file."""


class BudgetExceededError(EcsError):
    """An exact enumeration would exceed the configured budget."""


class UnknownSymbolError(EcsError, KeyError):
    """Symbol is not part of the codebook's alphabet."""


class UndecodableBlockError(EcsError, ValueError):
    """No codeword is a prefix of the given bit stream or block."""


class EnvelopeFormatError(EcsError, ValueError):
    """Ciphertext envelope bytes are malformed."""


class KeyFileError(EcsError, ValueError):
    """Key file is malformed or inconsistent."""


class ParameterMismatchError(EcsError, ValueError):
    """Envelope/key parameters do not match the derived cipher parameters."""


class KeyReuseError(EcsError):
    """A one-time key handle was used more than once."""
