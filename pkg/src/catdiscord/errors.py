"""Exception hierarchy shared by all catdiscord modules."""


class CatDiscordError(Exception):
    """Base class for every error raised by this package."""


class SingularNormalization(CatDiscordError, ValueError):
    """The cat-state normalization ``1 + p**n cos(m pi)`` vanishes."""


class DimensionError(CatDiscordError, ValueError):
    """Qubit counts, indices or matrix shapes are inconsistent."""


class SizeLimit(CatDiscordError, ValueError):
    """The requested object would exceed a dense-storage bound."""


class UnsupportedK(CatDiscordError, ValueError):
    """No explicit closed form exists for the requested subsystem size."""


class InvariantError(CatDiscordError, ArithmeticError):
    """A numerical invariant (hermiticity, reality, trace, ...) failed."""
