class PufCodesError(Exception):
    """Base class for all errors raised by pufcodes."""


class UsageError(PufCodesError, ValueError):
    """Invalid arguments, mismatched fields, wrong vector lengths."""


class FieldMismatchError(UsageError):
    pass


class InversionOfZero(PufCodesError, ZeroDivisionError):
    pass


class TableTooLarge(PufCodesError, ValueError):
    pass


class ZeroPolynomial(PufCodesError, ValueError):
    pass


class MessageTooLong(UsageError):
    pass


class RadiusTooLarge(PufCodesError, ValueError):
    pass


class InternalSolvabilityViolation(PufCodesError, RuntimeError):
    pass


class InstanceTooLarge(PufCodesError, ValueError):
    pass


class ConfigError(UsageError):
    pass
