"""Exception types shared across the toolkit."""

from __future__ import annotations


class LexmergeError(Exception):
    """Base class for all toolkit errors."""


class UnknownSenseError(LexmergeError):
    """A sense id does not resolve in the resource it names."""


class UnknownRelationError(LexmergeError):
    """A hierarchy relation name is not defined for the resource."""


class UnknownSynsetError(LexmergeError):
    """A synset id does not exist in the resource."""


class NoSensesError(LexmergeError):
    """A word required to have senses in a resource has none."""


class ParseError(LexmergeError):
    """A resource or dictionary file failed to parse.

    Carries the file path and 1-based line number when known.
    """

    def __init__(self, message: str, path: str | None = None, line_no: int | None = None):
        self.path = path
        self.line_no = line_no
        prefix = ""
        if path is not None:
            prefix = f"{path}:{line_no}: " if line_no is not None else f"{path}: "
        super().__init__(prefix + message)


class DanglingReferenceError(ParseError):
    """A relation or synset refers to a sense id that was never loaded."""


class CycleError(ParseError):
    """A hierarchy relation contains a cycle."""

    def __init__(self, message: str, cycle: list | None = None,
                 path: str | None = None, line_no: int | None = None):
        self.cycle = list(cycle or [])
        super().__init__(message, path=path, line_no=line_no)


class DuplicateMatchError(LexmergeError):
    """A sense id is already bound by another match in a one-to-one list."""


class DuplicateQueueError(LexmergeError):
    """A merge run was enqueued for verification twice."""


class UnknownItemError(LexmergeError):
    """A verdict referenced a verification item that does not exist."""


class ConfigError(LexmergeError):
    """A configuration value is missing or out of range."""
