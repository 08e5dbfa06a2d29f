"""Exception hierarchy shared by all modules."""


class LanglandsError(Exception):
    """Base class for every error raised by this package."""


class NotSymmetric(LanglandsError, ValueError):
    pass


class ImaginaryPartNotPositiveDefinite(LanglandsError, ValueError):
    pass


class SingularSystem(LanglandsError, ArithmeticError):
    pass


class ResolutionMismatch(LanglandsError, ValueError):
    pass


class ResolutionTooLow(LanglandsError, ValueError):
    pass


class ZeroMultiplier(LanglandsError, ZeroDivisionError):
    pass


class ShapeMismatch(LanglandsError, ValueError):
    pass


class NotPrime(LanglandsError, ValueError):
    pass


class FieldMismatch(LanglandsError, ValueError):
    pass


class UnsupportedBundleCase(LanglandsError, ValueError):
    pass


class ZeroInput(LanglandsError, ValueError):
    pass


class NotCoprime(LanglandsError, ValueError):
    pass


class UnknownSuite(LanglandsError, ValueError):
    pass


class BadFlag(LanglandsError, ValueError):
    pass
