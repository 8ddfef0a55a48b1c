"""Hierarchy Match: align senses by exploiting both taxonomies at once.

Starting from words that are unambiguous in both resources and from a
small file of hand-made seed matches, the algorithm alternates two moves
until nothing new appears:

* subtree scan — inside the two subtrees rooted at an established match,
  a word with exactly one unmatched sense on each side is locally
  unambiguous and gets matched;
* ancestor scan — walking upward from an established match, a word that
  appears exactly once in each ancestor chain gets matched.

Matches flow through three staging lists: M1 (awaiting ancestor scan),
M2 (awaiting subtree scan), M3 (retired, final).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import LexmergeError, ParseError
from .model import Match, MatchList, Resource, SenseId

log = logging.getLogger(__name__)

SEED_CONFIDENCE = 1.0
UNAMBIGUOUS_CONFIDENCE = 1.0
LOCAL_CONFIDENCE = 0.9
ANCESTOR_CONFIDENCE = 0.8


@dataclass
class HierarchyStats:
    """Per-phase proposal counts, in execution order."""

    rows: list[tuple[str, int]] = field(default_factory=list)

    def add(self, phase: str, count: int) -> None:
        self.rows.append((phase, count))

    def total(self) -> int:
        return sum(count for _, count in self.rows)


def default_relation(resource: Resource) -> str:
    """The relation actually used by a resource: the one with more links."""
    counts = {relation: 0 for relation in resource.relation_names()}
    for sense in resource.all_senses():
        for relation in counts:
            counts[relation] += len(sense.links(relation))
    return max(counts, key=lambda r: (counts[r], r))


def load_seeds(path: str | Path, left: Resource,
               right: Resource) -> list[tuple[SenseId, SenseId]]:
    """Read seed matches (JSON lines with "left" and "right" sense ids).

    The format is the match-line format, so a verifier's exported seeds
    feed straight back in; scoring fields are ignored here.  Every id must
    resolve in its resource.
    """
    path = Path(path)
    seeds: list[tuple[SenseId, SenseId]] = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read seeds: {exc}", path=str(path)) from exc
    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}",
                             path=str(path), line_no=line_no) from exc
        if not isinstance(record, dict) or "left" not in record or "right" not in record:
            raise ParseError("seed line needs 'left' and 'right' ids",
                             path=str(path), line_no=line_no)
        try:
            lid = SenseId.parse(record["left"])
            rid = SenseId.parse(record["right"])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad seed id: {exc}",
                             path=str(path), line_no=line_no) from exc
        for sid, resource in ((lid, left), (rid, right)):
            if sid.resource != resource.name or sid not in resource:
                raise ParseError(f"seed id {sid} not found in resource "
                                 f"{resource.name!r}",
                                 path=str(path), line_no=line_no)
        seeds.append((lid, rid))
    return seeds


def _word_occurrences(resource: Resource, ids: Iterable[SenseId],
                      skip: set[SenseId]) -> dict[str, list[SenseId]]:
    words: dict[str, list[SenseId]] = {}
    for sid in sorted(ids):
        if sid not in skip:
            words.setdefault(sid.word, []).append(sid)
    return words


class _Session:
    """One run's mutable state: staging lists plus the one-to-one guard."""

    def __init__(self, left: Resource, right: Resource,
                 left_relation: str, right_relation: str):
        self.left = left
        self.right = right
        self.left_relation = left_relation
        self.right_relation = right_relation
        self.matched_left: set[SenseId] = set()
        self.matched_right: set[SenseId] = set()

    def propose(self, lid: SenseId, rid: SenseId, confidence: float,
                phase: str, dest: list[Match]) -> bool:
        if lid in self.matched_left or rid in self.matched_right:
            return False
        self.matched_left.add(lid)
        self.matched_right.add(rid)
        dest.append(Match(left=lid, right=rid, confidence=confidence, phase=phase))
        return True

    def subtree_scan(self, match: Match, dest: list[Match],
                     confidence: float) -> None:
        lsub = self.left.subtree(self.left_relation, match.left)
        rsub = self.right.subtree(self.right_relation, match.right)
        lwords = _word_occurrences(self.left, lsub, self.matched_left)
        rwords = _word_occurrences(self.right, rsub, self.matched_right)
        for word in sorted(set(lwords) & set(rwords)):
            if len(lwords[word]) == 1 and len(rwords[word]) == 1:
                self.propose(lwords[word][0], rwords[word][0], confidence,
                             "local-unambiguous", dest)

    def ancestor_scan(self, match: Match, dest: list[Match],
                      confidence: float) -> None:
        lchain = self.left.ancestors(self.left_relation, match.left)
        rchain = self.right.ancestors(self.right_relation, match.right)
        lwords = _chain_occurrences(lchain)
        rwords = _chain_occurrences(rchain)
        # Propose nearest shared ancestors first (left-chain order).
        for lid in lchain:
            word = lid.word
            if word in rwords and len(lwords[word]) == 1 and len(rwords[word]) == 1:
                self.propose(lid, rwords[word][0], confidence,
                             "ancestor-scan", dest)


def _chain_occurrences(chain: Sequence[SenseId]) -> dict[str, list[SenseId]]:
    words: dict[str, list[SenseId]] = {}
    for sid in chain:
        words.setdefault(sid.word, []).append(sid)
    return words


def run_hierarchy_match(
    left: Resource,
    right: Resource,
    seeds: Sequence[tuple[SenseId, SenseId]] = (),
    left_relation: str | None = None,
    right_relation: str | None = None,
    seed_confidence: float = SEED_CONFIDENCE,
    unambiguous_confidence: float = UNAMBIGUOUS_CONFIDENCE,
    local_confidence: float = LOCAL_CONFIDENCE,
    ancestor_confidence: float = ANCESTOR_CONFIDENCE,
) -> tuple[MatchList, HierarchyStats]:
    """Run Hierarchy Match to completion.

    Returns the retired matches (M3) in retirement order and the per-phase
    proposal counts.  The loop provably terminates: an iteration that
    proposes nothing empties both staging lists.
    """
    left_relation = left_relation or default_relation(left)
    right_relation = right_relation or default_relation(right)
    session = _Session(left, right, left_relation, right_relation)
    stats = HierarchyStats()
    m3 = MatchList("hiermatch")

    # Step 1(a): words unambiguous in both resources.
    m1: list[Match] = []
    for word in sorted(set(left.words()) & set(right.words())):
        left_senses = left.senses_of_word(word)
        right_senses = right.senses_of_word(word)
        if len(left_senses) == 1 and len(right_senses) == 1:
            session.propose(left_senses[0].id, right_senses[0].id,
                            unambiguous_confidence, "unambiguous", m1)

    # Step 1(b): hand-made seeds.
    m2: list[Match] = []
    for lid, rid in seeds:
        if not session.propose(lid, rid, seed_confidence, "seed", m2):
            log.warning("seed (%s, %s) duplicates an earlier match; skipped",
                        lid, rid)
    stats.add("Step 1", len(m1) + len(m2))

    bound = len(left) + len(right) + 2
    iterations = 0
    while m1 or m2:
        iterations += 1
        if iterations > bound:
            raise LexmergeError("hierarchy match failed to terminate "
                                f"after {iterations} iterations")

        # 2(a): subtree scan everything awaiting it; fresh matches join M1.
        new_local: list[Match] = []
        for match in m2:
            session.subtree_scan(match, new_local, local_confidence)
        stats.add("Step 2(a)", len(new_local))
        m1.extend(new_local)

        # 2(b): retire the scanned matches.
        for match in m2:
            m3.append(match)
        m2 = []

        # 2(c): ancestor scan; fresh matches join M2.
        new_ancestor: list[Match] = []
        for match in m1:
            session.ancestor_scan(match, new_ancestor, ancestor_confidence)
        stats.add("Step 2(c)", len(new_ancestor))

        # 2(d): everything scanned upward now awaits a subtree scan.
        m2 = new_ancestor + m1
        m1 = []

    return m3, stats
