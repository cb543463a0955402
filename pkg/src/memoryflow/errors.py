"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedCaseError(ValueError):
    """The requested parameter regime has no implemented formula."""


class ResourceLimitError(RuntimeError):
    """A configured size/budget cap would be exceeded."""


class NumericError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract."""


class ConfigError(ValueError):
    """A run configuration is malformed or inconsistent."""
