"""Core data model: senses, resources, taxonomies, synsets, and matches.

A Resource is an immutable, fully indexed collection of word senses with one
or more named, acyclic hierarchy relations ("hypernym", "genus") and optional
synset grouping.  All query primitives the matchers rely on live here.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from .errors import (
    CycleError,
    DanglingReferenceError,
    DuplicateMatchError,
    LexmergeError,
    UnknownRelationError,
    UnknownSenseError,
    UnknownSynsetError,
)

# Provenance phases a match can carry, in rough pipeline order.
MATCH_PHASES = (
    "seed",
    "unambiguous",
    "local-unambiguous",
    "ancestor-scan",
    "defmatch",
    "synset-coincide",
    "near-synset",
    "single-translation",
    "field-code",
)

MATCH_STATUSES = ("proposed", "accepted", "rejected", "corrected")


@dataclass(frozen=True, order=True)
class SenseId:
    """Identity of one sense: (resource, word, homograph, sense number).

    Homograph-numbered resources use the (word h s) scheme; synset-style
    resources keep homograph fixed at 0 and number senses directly.
    """

    resource: str
    word: str
    homograph: int
    sense_no: int

    def __post_init__(self) -> None:
        if not self.word:
            raise ValueError("sense id needs a non-empty word")
        if ":" in self.resource or ":" in self.word:
            raise ValueError(f"':' not allowed in resource or word: {self!r}")
        if self.word != self.word.lower():
            object.__setattr__(self, "word", self.word.lower())
        if self.homograph < 0 or self.sense_no < 0:
            raise ValueError(f"negative numbering in {self!r}")

    def __str__(self) -> str:
        return f"{self.resource}:{self.word}:{self.homograph}:{self.sense_no}"

    @classmethod
    def parse(cls, text: str) -> SenseId:
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"sense id must have 4 ':'-separated parts: {text!r}")
        resource, word, h, s = parts
        try:
            return cls(resource, word, int(h), int(s))
        except ValueError as e:
            raise ValueError(f"bad sense id {text!r}: {e}") from e


def display_sense(sid: SenseId, style: str = "homograph") -> str:
    """Human-readable form: "(word h s)" or, for synset-style, "WORD-s"."""
    if style == "synset":
        return f"{sid.word.upper().replace(' ', '-')}-{sid.sense_no}"
    return f"({sid.word} {sid.homograph} {sid.sense_no})"


@dataclass(frozen=True)
class Sense:
    """One meaning of a word in one resource."""

    id: SenseId
    pos: str = "n"
    definition: tuple[str, ...] = ()
    examples: tuple[tuple[str, ...], ...] = ()
    gloss: str = ""
    example_glosses: tuple[str, ...] = ()
    synset: str | None = None
    hypernyms: tuple[SenseId, ...] = ()
    genus: tuple[SenseId, ...] = ()
    semantic_code: str | None = None
    field_codes: tuple[str, ...] = ()
    synonyms: tuple[str, ...] = ()

    @property
    def word(self) -> str:
        return self.id.word

    def links(self, relation: str) -> tuple[SenseId, ...]:
        if relation == "hypernym":
            return self.hypernyms
        if relation == "genus":
            return self.genus
        raise UnknownRelationError(f"unknown relation {relation!r}")

    def display_gloss(self) -> str:
        return self.gloss or " ".join(self.definition)


RELATION_NAMES = ("hypernym", "genus")


class Resource:
    """A named, immutable collection of senses with hierarchy and synsets.

    Validates on construction: unique sense ids, resolvable relation and
    synset references, and acyclicity of every named relation.  Read-only
    afterwards, so concurrent readers are safe.
    """

    def __init__(self, name: str, senses: Iterable[Sense], style: str | None = None):
        self.name = name
        self._by_id: dict[SenseId, Sense] = {}
        by_word: dict[str, list[SenseId]] = {}
        for sense in senses:
            if sense.id.resource != name:
                raise LexmergeError(
                    f"sense {sense.id} does not belong to resource {name!r}")
            if sense.id in self._by_id:
                raise LexmergeError(f"duplicate sense id {sense.id}")
            self._by_id[sense.id] = sense
            by_word.setdefault(sense.id.word, []).append(sense.id)
        self._by_word = {
            w: tuple(sorted(ids, key=lambda i: (i.homograph, i.sense_no)))
            for w, ids in by_word.items()
        }

        self._relations: dict[str, dict[SenseId, tuple[SenseId, ...]]] = {}
        self._children: dict[str, dict[SenseId, tuple[SenseId, ...]]] = {}
        for relation in RELATION_NAMES:
            parents: dict[SenseId, tuple[SenseId, ...]] = {}
            children: dict[SenseId, list[SenseId]] = {}
            for sense in self._by_id.values():
                targets = sense.links(relation)
                if not targets:
                    continue
                for target in targets:
                    if target not in self._by_id:
                        raise DanglingReferenceError(
                            f"{relation} link from {sense.id} to unknown sense {target}")
                    children.setdefault(target, []).append(sense.id)
                parents[sense.id] = targets
            self._relations[relation] = parents
            self._children[relation] = {
                t: tuple(sorted(c)) for t, c in children.items()
            }
            self._check_acyclic(relation)

        synsets: dict[str, list[SenseId]] = {}
        for sense in self._by_id.values():
            if sense.synset is not None:
                synsets.setdefault(sense.synset, []).append(sense.id)
        self._synsets = {sid: tuple(sorted(members)) for sid, members in synsets.items()}

        if style is None:
            style = "synset" if self._synsets else "homograph"
        self.style = style

    # ------------------------------------------------------------------
    # Sense lookup
    # ------------------------------------------------------------------

    def sense(self, sid: SenseId) -> Sense:
        try:
            return self._by_id[sid]
        except KeyError:
            raise UnknownSenseError(f"no sense {sid} in resource {self.name!r}") from None

    def __contains__(self, sid: SenseId) -> bool:
        return sid in self._by_id

    def __len__(self) -> int:
        return len(self._by_id)

    def all_senses(self) -> Iterator[Sense]:
        for sid in sorted(self._by_id):
            yield self._by_id[sid]

    def words(self) -> list[str]:
        return sorted(self._by_word)

    def senses_of_word(self, word: str) -> list[Sense]:
        """All senses of the case-normalized headword, in (homograph, sense) order."""
        ids = self._by_word.get(word.lower(), ())
        return [self._by_id[sid] for sid in ids]

    def is_unambiguous(self, word: str) -> bool:
        return len(self._by_word.get(word.lower(), ())) == 1

    def display(self, sid: SenseId) -> str:
        return display_sense(sid, self.style)

    # ------------------------------------------------------------------
    # Hierarchy queries
    # ------------------------------------------------------------------

    def relation_names(self) -> tuple[str, ...]:
        return tuple(self._relations)

    def _relation(self, relation: str) -> dict[SenseId, tuple[SenseId, ...]]:
        try:
            return self._relations[relation]
        except KeyError:
            raise UnknownRelationError(
                f"resource {self.name!r} has no relation {relation!r}") from None

    def parents(self, relation: str, sid: SenseId) -> tuple[SenseId, ...]:
        self.sense(sid)
        return self._relation(relation).get(sid, ())

    def children(self, relation: str, sid: SenseId) -> tuple[SenseId, ...]:
        self.sense(sid)
        self._relation(relation)
        return self._children[relation].get(sid, ())

    def ancestors(self, relation: str, sid: SenseId) -> list[SenseId]:
        """Transitive closure of links from sid, nearest first.

        Breadth-first over the (possibly DAG-shaped) relation; ties within a
        level break by sense id order, giving a deterministic sequence.
        """
        self.sense(sid)
        parents = self._relation(relation)
        seen: set[SenseId] = {sid}
        order: list[SenseId] = []
        frontier = [sid]
        while frontier:
            level: set[SenseId] = set()
            for node in frontier:
                for parent in parents.get(node, ()):
                    if parent not in seen:
                        level.add(parent)
            frontier = sorted(level)
            for node in frontier:
                seen.add(node)
                order.append(node)
        return order

    def subtree(self, relation: str, root: SenseId) -> set[SenseId]:
        """The root plus all transitive descendants under the relation."""
        self.sense(root)
        self._relation(relation)
        children = self._children[relation]
        seen = {root}
        queue = deque([root])
        while queue:
            node = queue.popleft()
            for child in children.get(node, ()):
                if child not in seen:
                    seen.add(child)
                    queue.append(child)
        return seen

    def _check_acyclic(self, relation: str) -> None:
        parents = self._relations[relation]
        # Iterative DFS with colors; reports one offending cycle.
        WHITE, GREY, BLACK = 0, 1, 2
        color: dict[SenseId, int] = {}
        for start in sorted(parents):
            if color.get(start, WHITE) != WHITE:
                continue
            stack: list[tuple[SenseId, Iterator[SenseId]]] = [
                (start, iter(parents.get(start, ())))]
            color[start] = GREY
            path = [start]
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    state = color.get(nxt, WHITE)
                    if state == GREY:
                        cycle = path[path.index(nxt):] + [nxt]
                        raise CycleError(
                            f"relation {relation!r} has a cycle: "
                            + " -> ".join(str(c) for c in cycle),
                            cycle=cycle,
                        )
                    if state == WHITE:
                        color[nxt] = GREY
                        path.append(nxt)
                        stack.append((nxt, iter(parents.get(nxt, ()))))
                        advanced = True
                        break
                if not advanced:
                    color[node] = BLACK
                    path.pop()
                    stack.pop()

    # ------------------------------------------------------------------
    # Synset queries
    # ------------------------------------------------------------------

    def synset_ids(self) -> list[str]:
        return sorted(self._synsets)

    def synset_of(self, sid: SenseId) -> str | None:
        return self.sense(sid).synset

    def synset_members(self, synset_id: str) -> set[SenseId]:
        try:
            return set(self._synsets[synset_id])
        except KeyError:
            raise UnknownSynsetError(
                f"no synset {synset_id!r} in resource {self.name!r}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Resource):
            return NotImplemented
        return (self.name == other.name and self.style == other.style
                and self._by_id == other._by_id)


@dataclass
class Match:
    """A proposed pairing of one sense in each of two resources.

    ``alternatives`` is a ranked candidate list for the verifier: the
    proposal first, then the remaining right-side candidates with whatever
    confidence evidence the producing phase had.
    """

    left: SenseId
    right: SenseId
    confidence: float
    phase: str
    status: str = "proposed"
    corrected_right: SenseId | None = None
    alternatives: tuple[tuple[SenseId, float], ...] = ()

    def __post_init__(self) -> None:
        if self.left.resource == self.right.resource:
            raise LexmergeError(
                f"match must cross resources: {self.left} / {self.right}")
        if self.confidence < 0:
            raise LexmergeError(f"negative confidence {self.confidence}")
        if self.phase not in MATCH_PHASES:
            raise LexmergeError(f"unknown phase {self.phase!r}")
        if self.status not in MATCH_STATUSES:
            raise LexmergeError(f"unknown status {self.status!r}")
        if self.status == "corrected" and self.corrected_right is None:
            raise LexmergeError("corrected match needs corrected_right")

    def pair(self) -> tuple[SenseId, SenseId]:
        return (self.left, self.right)

    def final_right(self) -> SenseId:
        """The right side after any correction."""
        if self.status == "corrected" and self.corrected_right is not None:
            return self.corrected_right
        return self.right

    def with_status(self, status: str, corrected_right: SenseId | None = None) -> Match:
        return replace(self, status=status, corrected_right=corrected_right)


class MatchList:
    """An ordered, one-to-one list of matches (no sense id used twice)."""

    def __init__(self, label: str = "output", matches: Iterable[Match] = ()):
        self.label = label
        self._matches: list[Match] = []
        self._lefts: set[SenseId] = set()
        self._rights: set[SenseId] = set()
        for m in matches:
            self.append(m)

    def append(self, match: Match) -> None:
        if match.left in self._lefts:
            raise DuplicateMatchError(f"left sense {match.left} already matched")
        if match.right in self._rights:
            raise DuplicateMatchError(f"right sense {match.right} already matched")
        self._lefts.add(match.left)
        self._rights.add(match.right)
        self._matches.append(match)

    def extend(self, matches: Iterable[Match]) -> None:
        for m in matches:
            self.append(m)

    def __iter__(self) -> Iterator[Match]:
        return iter(self._matches)

    def __len__(self) -> int:
        return len(self._matches)

    def __getitem__(self, index: int) -> Match:
        return self._matches[index]

    @property
    def lefts(self) -> set[SenseId]:
        return set(self._lefts)

    @property
    def rights(self) -> set[SenseId]:
        return set(self._rights)

    def pairs(self) -> set[tuple[SenseId, SenseId]]:
        return {m.pair() for m in self._matches}
