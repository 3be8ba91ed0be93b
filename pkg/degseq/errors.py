#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"


class DegseqError(Exception):
    """Base class of every error raised by ``degseq``."""


class ParseError(DegseqError):
    """Malformed table input (wrong shape, non-integer entries, bad JSON)."""


class ConsistencyError(DegseqError):
    """Table input that is well formed but contradicts itself, e.g. x_ji != N_ij - x_ij."""


class SizeError(DegseqError):
    """An exhaustive routine was asked for a problem beyond its enumeration cap."""


class ParameterError(DegseqError):
    """Parameters outside the range where a statement or routine applies."""


class NumericalFailure(DegseqError):
    """Floating point simplex gave up (cycling or ill conditioning). Retry in exact mode."""


class LpFailure(DegseqError):
    """A linear program that must be solvable came back infeasible or unbounded."""


class NonexistentMLE(DegseqError):
    """The sufficient statistic lies on the boundary, the MLE does not exist.

    :ivar facial_set: the facial set found while deciding existence, if any
    """
    def __init__(self, message: str, facial_set=None):
        super().__init__(message)
        self.facial_set = facial_set


class NoConvergence(DegseqError):
    """An iterative fit hit its iteration cap before meeting the tolerance."""
