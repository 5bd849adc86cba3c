class KotheError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidIndex(KotheError):
    pass


class UndefinedForZero(KotheError):
    pass


class ParseError(KotheError):
    pass


class WindowExhausted(KotheError):
    """A finite search window contained no admissible candidate.

    This is a refusal, not a negative verdict: widening the window may succeed.
    """
