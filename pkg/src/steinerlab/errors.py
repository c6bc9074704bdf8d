"""Exception types shared across the toolkit.

Infeasibility of a full-tree construction is NOT an exception; it is a
normal outcome modeled by ``steinerlab.fulltree.Infeasible``.
"""


class SteinerlabError(Exception):
    """Base class for all domain errors raised by steinerlab."""


class DegeneratePoint(SteinerlabError):
    """Coincident points (within the point tolerance) where distinct ones are required."""


class TooFewPoints(SteinerlabError):
    """An operation received fewer points than its minimum."""


class DegenerateInput(SteinerlabError):
    """Input admits no meaningful result, e.g. all points collinear for a hull."""


class DegenerateDirection(SteinerlabError):
    """A direction vector collapsed to (near) zero length."""


class NonPositiveLength(SteinerlabError):
    """A length that must be strictly positive was not."""


class ParseError(SteinerlabError):
    """Malformed terminal-file or export-document content."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NoConvergence(SteinerlabError):
    """An iterative relaxation exceeded its iteration budget."""


class NotConnectedYet(SteinerlabError):
    """Finish requested while the connection matrix still has several components."""


class EmptyUndoStack(SteinerlabError):
    """Undo requested with no prior state recorded."""


class InvalidAction(SteinerlabError):
    """Action is not applicable in the session's current phase or has bad payload."""


class DuplicatePointWarning(UserWarning):
    """Two parsed terminals coincide within the point tolerance."""
