"""Exception hierarchy shared by the toolkit and mapped to CLI exit codes."""


class FPPError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(FPPError, ValueError):
    """Malformed distribution parameters or experiment configuration."""


class DomainError(FPPError, ValueError):
    """Arguments outside the mathematical domain of an operation."""


class ContractError(FPPError, ValueError):
    """A precondition on paths, vectors or shear sequences was violated."""


class OracleScopeError(FPPError, RuntimeError):
    """A brute-force oracle was asked to enumerate too many candidates."""


class EnvironmentPathologyError(FPPError, RuntimeError):
    """A search over the environment exceeded its configured cap."""


class RangeError(FPPError, OverflowError):
    """An exact count does not fit into a signed 64-bit integer."""
