"""lexmerge: semi-automatic alignment of lexical resources.

Three merging algorithms over word senses — definition match, hierarchy
match, and bilingual match — plus a pipeline that runs them in sequence,
an inconsistency detector for the merged result, and a human verification
workflow served over HTTP.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import LexmergeError, ParseError
from .model import Match, MatchList, Resource, Sense, SenseId, display_sense

__all__ = [
    "__version__",
    "LexmergeError",
    "Match",
    "MatchList",
    "ParseError",
    "Resource",
    "Sense",
    "SenseId",
    "display_sense",
]
