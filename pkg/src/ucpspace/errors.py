"""Error types shared across the toolkit."""


class UcpError(Exception):
    """Base class for toolkit errors."""


class SizeError(UcpError):
    """Instance exceeds a documented size cap, or a dimension is unsupported."""


class StructuralError(UcpError):
    """Input tables are malformed (distinct from an axiom failing)."""


class ConditioningUndefinedError(UcpError):
    """Conditioning on an event of zero probability."""


class CapacityError(UcpError):
    """Enumeration would exceed the documented capacity guard."""


class DecompositionError(UcpError):
    """Spectral decomposition failed its reconstruction residual check."""


class SynthesisError(UcpError):
    """State-space synthesis cannot proceed (non-unique conditional, span gap)."""


class PreconditionError(UcpError):
    """An operation's stated precondition does not hold for the given input."""


class ParseError(UcpError):
    """A file did not match its documented format."""
