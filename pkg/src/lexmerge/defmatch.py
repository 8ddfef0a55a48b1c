"""Definition Match: align senses of a shared headword by definition overlap.

For a word present in both resources, the stems surrounding it form a
context vector; a left matrix L scores each left sense against each
context stem, a right matrix W scores each context stem against each
right sense, and the product SIM = L @ W scores sense pairs.  Matches are
read off SIM greedily, best cell first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import Match, MatchList, Resource, SenseId
from .stemming import Stemmer, content_words

# Left-matrix weights: a context stem either occurs in the left sense's
# definition text (including examples) or it does not.
L_PRESENT = 1.0
L_ABSENT = 0.01

# Right-matrix weights, strongest evidence class wins per (stem, sense).
W_SYNONYM = 1.0
W_SUPERORDINATE = 1.0
W_DEFINITION = 0.8
W_EXAMPLE = 0.8
W_SIBLING = 0.6
W_GRANDPARENT = 0.6
W_ABSENT = 0.01

# Reporting priority when one stem reaches a sense by several routes.
PROVENANCE_ORDER = (
    "definition", "example", "synonym", "superordinate", "sibling",
    "super-superordinate",
)

_TAG_WEIGHT = {
    "definition": W_DEFINITION,
    "example": W_EXAMPLE,
    "synonym": W_SYNONYM,
    "superordinate": W_SUPERORDINATE,
    "sibling": W_SIBLING,
    "super-superordinate": W_GRANDPARENT,
}


def _definition_stems(resource: Resource, sid: SenseId, stemmer: Stemmer) -> set[str]:
    sense = resource.sense(sid)
    return content_words(sense.definition, stemmer)


def _example_stems(resource: Resource, sid: SenseId, stemmer: Stemmer) -> set[str]:
    sense = resource.sense(sid)
    stems: set[str] = set()
    for example in sense.examples:
        stems |= content_words(example, stemmer)
    return stems


def _concept_stems(resource: Resource, sid: SenseId, stemmer: Stemmer) -> set[str]:
    """Stems naming the concept at sid: its word, synset mates, synonyms."""
    sense = resource.sense(sid)
    words = {sense.word, *sense.synonyms}
    if sense.synset is not None:
        for member in resource.synset_members(sense.synset):
            words.add(member.word)
    stems: set[str] = set()
    for word in words:
        stems |= content_words(word.split(), stemmer)
    return stems


def right_evidence(resource: Resource, sid: SenseId,
                   stemmer: Stemmer) -> dict[str, set[str]]:
    """Stems reachable from a right-hand sense, keyed by evidence class.

    Synonyms come from the sense's synset and synonym list; superordinates
    from the immediate hypernyms (and their synset mates); siblings from
    co-hyponyms of those hypernyms; super-superordinates from hypernyms
    two levels up.
    """
    relation = "hypernym" if resource.parents("hypernym", sid) else "genus"
    evidence: dict[str, set[str]] = {
        "definition": _definition_stems(resource, sid, stemmer),
        "example": _example_stems(resource, sid, stemmer),
        "synonym": _concept_stems(resource, sid, stemmer),
        "superordinate": set(),
        "sibling": set(),
        "super-superordinate": set(),
    }
    for parent in resource.parents(relation, sid):
        evidence["superordinate"] |= _concept_stems(resource, parent, stemmer)
        for sibling in resource.children(relation, parent):
            if sibling != sid:
                evidence["sibling"] |= _concept_stems(resource, sibling, stemmer)
        for grandparent in resource.parents(relation, parent):
            evidence["super-superordinate"] |= _concept_stems(
                resource, grandparent, stemmer)
    return evidence


@dataclass(frozen=True)
class Context:
    """Everything Definition Match needs about one shared headword."""

    word: str
    stems: tuple[str, ...]
    left_senses: tuple[SenseId, ...]
    right_senses: tuple[SenseId, ...]
    # stem -> highest-priority evidence class it arrived through (right side)
    provenance: dict[str, str]


def build_context(left: Resource, right: Resource, word: str,
                  stemmer: Stemmer) -> Context:
    """Context stems for a word: left-text stems that the right side can score.

    The word's own stems are excluded; a stem qualifies when it occurs in
    the left definitions or examples of the word and is reachable from at
    least one right sense of the word through any evidence class.
    """
    left_senses = tuple(s.id for s in left.senses_of_word(word))
    right_senses = tuple(s.id for s in right.senses_of_word(word))
    own = content_words(word.split(), stemmer) | {stemmer.stem(t) for t in word.split()}

    left_stems: set[str] = set()
    for sid in left_senses:
        left_stems |= _definition_stems(left, sid, stemmer)
        left_stems |= _example_stems(left, sid, stemmer)

    rank = {tag: k for k, tag in enumerate(PROVENANCE_ORDER)}
    right_stems: set[str] = set()
    provenance: dict[str, str] = {}
    for sid in right_senses:
        evidence = right_evidence(right, sid, stemmer)
        for tag in PROVENANCE_ORDER:
            for stem in evidence[tag]:
                right_stems.add(stem)
                if stem not in provenance or rank[tag] < rank[provenance[stem]]:
                    provenance[stem] = tag
    stems = tuple(sorted((left_stems & right_stems) - own))
    return Context(
        word=word,
        stems=stems,
        left_senses=left_senses,
        right_senses=right_senses,
        provenance={s: provenance[s] for s in stems},
    )


def build_matrices(context: Context, left: Resource, right: Resource,
                   stemmer: Stemmer) -> tuple[np.ndarray, np.ndarray]:
    """The score matrices L (left senses x stems) and W (stems x right senses)."""
    n_left = len(context.left_senses)
    n_right = len(context.right_senses)
    n_stems = len(context.stems)
    column = {stem: k for k, stem in enumerate(context.stems)}

    L = np.full((n_left, n_stems), L_ABSENT)
    for i, sid in enumerate(context.left_senses):
        present = (_definition_stems(left, sid, stemmer)
                   | _example_stems(left, sid, stemmer))
        for stem in present:
            k = column.get(stem)
            if k is not None:
                L[i, k] = L_PRESENT

    W = np.full((n_stems, n_right), W_ABSENT)
    for j, sid in enumerate(context.right_senses):
        evidence = right_evidence(right, sid, stemmer)
        for tag, weight in _TAG_WEIGHT.items():
            for stem in evidence[tag]:
                k = column.get(stem)
                if k is not None and weight > W[k, j]:
                    W[k, j] = weight
    return L, W


def sim_matrix(L: np.ndarray, W: np.ndarray) -> np.ndarray:
    return L @ W


def greedy_extract(sim: np.ndarray, floor: float = 0.0) -> list[tuple[int, int, float]]:
    """Read matches off a similarity matrix, largest value first.

    Each pick removes its row and column.  Ties break toward the smaller
    row index, then the smaller column index.  Extraction stops when the
    best remaining value drops below the floor or a side is exhausted.
    """
    working = np.asarray(sim, dtype=float).copy()
    if working.ndim != 2:
        raise ValueError("similarity matrix must be two-dimensional")
    picks: list[tuple[int, int, float]] = []
    rounds = min(working.shape)
    for _ in range(rounds):
        flat = int(np.argmax(working))
        i, j = divmod(flat, working.shape[1])
        value = float(working[i, j])
        if value < floor:
            break
        picks.append((i, j, value))
        working[i, :] = -np.inf
        working[:, j] = -np.inf
    return picks


def match_word(left: Resource, right: Resource, word: str, stemmer: Stemmer,
               floor: float = 0.0) -> list[Match]:
    """Definition Match for one shared headword."""
    context = build_context(left, right, word, stemmer)
    if not context.stems or not context.left_senses or not context.right_senses:
        return []
    L, W = build_matrices(context, left, right, stemmer)
    sim = sim_matrix(L, W)
    matches = []
    for i, j, value in greedy_extract(sim, floor=floor):
        row = sim[i]
        others = sorted(
            (k for k in range(len(context.right_senses)) if k != j),
            key=lambda k: (-row[k], k),
        )
        alternatives = tuple(
            [(context.right_senses[j], float(row[j]))]
            + [(context.right_senses[k], float(row[k])) for k in others]
        )
        matches.append(Match(
            left=context.left_senses[i],
            right=context.right_senses[j],
            confidence=value,
            phase="defmatch",
            alternatives=alternatives,
        ))
    return matches


def shared_words(left: Resource, right: Resource) -> list[str]:
    return sorted(set(left.words()) & set(right.words()))


def run_definition_match(left: Resource, right: Resource,
                         stemmer: Stemmer | None = None, floor: float = 0.0,
                         words: Sequence[str] | None = None) -> MatchList:
    """Run Definition Match over every shared headword.

    Output is ordered by confidence (descending), then left sense id, so
    the strongest proposals reach the verifier first.
    """
    stemmer = stemmer if stemmer is not None else Stemmer.default()
    if words is None:
        candidates: Iterable[str] = shared_words(left, right)
    else:
        candidates = sorted(set(w.lower() for w in words))
    collected: list[Match] = []
    for word in candidates:
        collected.extend(match_word(left, right, word, stemmer, floor=floor))
    collected.sort(key=lambda m: (-m.confidence, m.left))
    return MatchList("defmatch", collected)
