"""Exception hierarchy shared by the library and the command line."""


class FqPolylogError(Exception):
    """Base class for all library errors."""


class ConfigError(FqPolylogError):
    """Invalid field data, moduli, or run configuration."""


class ResourceBoundError(FqPolylogError):
    """A configured desk-scale bound (ramification, extension degree, iterations) was exceeded."""


class DomainError(FqPolylogError):
    """An argument lies outside the certified convergence domain."""


class PrecisionError(FqPolylogError):
    """A requested precision could not be certified."""


class ClassMismatchError(FqPolylogError):
    """Two polynomials do not define the same extension class."""


class UnsupportedTailError(FqPolylogError):
    """An operation would need products of symbolic Artin-Schreier tails."""
