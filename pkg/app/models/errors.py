class NetlabError(Exception):
    """Base class for every error raised by the lab."""


class GraphError(NetlabError, ValueError):
    """Invalid graph size, node id, edge or edge-list text."""


class ParamsError(NetlabError, ValueError):
    """Benefit/cost parameters, grid steps or rationals outside their domain."""


class OracleLimitError(NetlabError, ValueError):
    """Exhaustive enumeration requested for more nodes than allowed."""


class InvariantViolation(NetlabError, RuntimeError):
    """An internal consistency check failed (e.g. a converged run that is not stable)."""
