"""Exception hierarchy shared by all plab modules."""


class PlabError(Exception):
    """Base class for every error raised by plab."""


class InvalidVertexError(PlabError, ValueError):
    """A vertex tuple does not belong to the product shape at hand."""


class SizeCapError(PlabError):
    """An enumeration would exceed its configured size cap."""


class PreconditionError(PlabError, ValueError):
    """An operation was called outside its documented precondition."""


class TotalityError(PlabError, ValueError):
    """A vertex map is not defined on every vertex of the product."""


class ConstructionError(PlabError, ValueError):
    """A homomorphism could not be assembled from the given factors."""


class FactorizationError(PlabError):
    """An injective homomorphism failed to factor componentwise.

    Such a map is a counterexample to componentwise factorization on its
    shape, so the offending vertex is kept on the exception for the report.
    """

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class HypothesisError(PlabError):
    """A map does not satisfy the hypothesis a check relies on."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DomainError(PlabError, ValueError):
    """A point lies outside the domain of a map or of the unit ball."""


class SamplingError(PlabError):
    """Points with the requested norm profile could not be generated."""


class ConfigError(PlabError, ValueError):
    """A run configuration is malformed."""
