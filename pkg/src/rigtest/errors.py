"""Exception types raised across the package."""


class RigTestError(ValueError):
    """Base class for invalid input to any test or generator."""


class LengthError(RigTestError):
    pass


class InputError(RigTestError):
    pass


class DomainError(RigTestError):
    pass


class ShapeError(RigTestError):
    pass


class InsufficientDataError(LengthError):
    pass


class DataError(RigTestError):
    """The data make a statistic undefined (constant series, empty dichotomy)."""


class ParameterError(RigTestError):
    pass


class ConfigurationError(RigTestError):
    pass
