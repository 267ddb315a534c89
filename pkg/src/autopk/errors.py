"""Exception types shared across the package."""


class AutoPkError(Exception):
    """Base class for all package-specific errors."""


class MalformedInput(AutoPkError):
    """An input table or sidecar violates the declared format."""


class DimensionMismatch(AutoPkError):
    """Embedding vectors of different dimensionality were compared."""


class ProviderUnavailable(AutoPkError):
    """A remote provider (chat or embedding) failed after retries."""


class ReplayMiss(AutoPkError):
    """A replay-backed request has no recorded response."""


class UnboundPlaceholder(AutoPkError):
    """A prompt template placeholder was left without a binding."""


class UnparseableVerdict(AutoPkError):
    """A validation response contained no YES/NO token."""


class NoTableFound(AutoPkError):
    """A model response contained no parseable CSV table."""


class EmptySelection(AutoPkError):
    """Row filtering removed every row of a table."""


class MissingGold(AutoPkError):
    """No gold annotation exists for a table id."""


class InputTooLarge(AutoPkError):
    """A serialized table exceeds the configured context budget."""
