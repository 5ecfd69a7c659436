"""Exception types raised across the package.

Every error derives from :class:`PCSTError`; the CLI reports the class name
as a machine-readable error code.
"""


class PCSTError(Exception):
    """Base class for all package errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# instance construction / parsing
class InstanceFormatError(PCSTError, ValueError):
    pass


class DuplicateEdgeId(PCSTError, ValueError):
    pass


class UnknownVertex(PCSTError, ValueError):
    pass


class NonPositiveCost(PCSTError, ValueError):
    pass


class NegativePrize(PCSTError, ValueError):
    pass


class UnreachablePrizeVertex(PCSTError, ValueError):
    pass


# subgraph calculus
class NotARootedSubtree(PCSTError, ValueError):
    pass


class ForeignEdgeId(PCSTError, KeyError):
    pass


class AmbiguousAnchor(PCSTError, ValueError):
    """The vertex closest to the root is not unique and no base tree was given."""


class NotInTree(PCSTError, KeyError):
    pass


class NotATree(PCSTError, ValueError):
    pass


class NoPrizeLeft(PCSTError, ValueError):
    pass


# exhaustive oracles
class InstanceTooLarge(PCSTError, ValueError):
    pass


class TreeTooLarge(InstanceTooLarge):
    pass


class InvalidOrdering(PCSTError, ValueError):
    pass


class BadParameter(PCSTError, ValueError):
    pass
