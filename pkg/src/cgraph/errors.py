"""Exception types shared across the package.

The service layer maps these onto HTTP error bodies; everything else
raises them directly.
"""


class CgraphError(Exception):
    """Base class for all cgraph errors."""


class UnknownAdapter(CgraphError):
    """A feed adapter id is not registered."""


class InvalidHostname(CgraphError):
    """A string does not parse as a hostname."""


class NonConsecutiveDays(CgraphError):
    """A seed-extraction window is not 7 consecutive days."""


class EmptyFeed(CgraphError):
    """A required daily feed contains no entries."""


class NodeNotFound(CgraphError):
    """A (kind, label) or domain lookup found no graph node."""


class KindConflict(CgraphError):
    """A label already exists under an incompatible kind for the same role."""


class InvalidRange(CgraphError):
    """A date range is empty or inverted."""


class CorruptStore(CgraphError):
    """A persisted store failed checksum or structural validation."""


class VersionMismatch(CgraphError):
    """A persisted snapshot was written by an unsupported format version."""


class EpsilonOutOfRange(CgraphError):
    """Homophily strength outside [0, 0.5)."""


class EmptySubgraph(CgraphError):
    """Inference was asked to run on a subgraph with no nodes."""


class TooLarge(CgraphError):
    """Exact enumeration requested on a subgraph above the node cap."""
