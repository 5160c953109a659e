"""Exception hierarchy shared by every module.

All errors derive from :class:`BreakdivError`, which the CLI maps to exit
status 2.
"""


class BreakdivError(ValueError):
    """Base class for invalid-input conditions."""


class DisconnectedGraph(BreakdivError):
    pass


class LoopEdge(BreakdivError):
    pass


class NonPositiveLength(BreakdivError):
    pass


class DuplicateId(BreakdivError):
    pass


class OffsetOutOfRange(BreakdivError):
    pass


class OverlappingSets(BreakdivError):
    pass


class EdgeInTree(BreakdivError):
    pass


class UnknownVertex(BreakdivError):
    pass


class UnknownEdge(BreakdivError):
    pass


class NotOrientable(BreakdivError):
    pass


class AlreadyQOrientable(BreakdivError):
    pass


class NoProperSubset(BreakdivError):
    pass


class WrongDegree(BreakdivError):
    pass


class NotQConnected(BreakdivError):
    pass


class PointOffGraph(BreakdivError):
    pass


class NotASemiModel(BreakdivError):
    pass


class EmptyCut(BreakdivError):
    pass


class WrongGenus(BreakdivError):
    pass


class SearchTooLarge(BreakdivError):
    """An exhaustive subset search would exceed ``BREAKDIV_MAX_VERTICES``."""
