"""Bilingual Match: attach bilingual entries to ontology concepts.

Each translation group of an entry is tried against four signals in
order of strength:

1. synset coincidence — several translations share one synset;
2. near-synset — two translations have senses with a close common
   ancestor, confidence discounted per link traversed;
3. single unambiguous translation;
4. field codes — an ambiguous single translation whose group code pairs
   with a sense-level code in the correlation table built from the whole
   dictionary (pairs seen fewer than ``threshold`` times are pruned).

The first signal that produces a candidate decides the group's mapping;
runners-up are kept as ranked alternatives for the verifier.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ingest import BilingualEntry, TranslationGroup
from .model import Resource, SenseId

PENALTY = 0.8
MAX_LINKS = 4
CODE_THRESHOLD = 6
SINGLE_TRANSLATION_CONFIDENCE = 0.95
FIELD_CODE_CONFIDENCE = 0.9

MAPPING_KINDS = ("synset-coincide", "near-synset", "single-translation",
                 "field-code")


@dataclass(frozen=True)
class Mapping:
    """One proposed link from a bilingual sense group to the ontology."""

    headword: str
    pos: str
    group_index: int
    translations: tuple[str, ...]
    field_code: str | None
    kind: str
    concept: str
    senses: tuple[SenseId, ...]
    support: tuple[SenseId, ...] = ()
    confidence: float = 0.0
    alternatives: tuple[tuple[str, float], ...] = ()


@dataclass
class CodeTable:
    """Correlation counts between bilingual group codes and sense codes."""

    counts: Counter[tuple[str, str]] = field(default_factory=Counter)
    threshold: int = CODE_THRESHOLD

    def surviving(self) -> dict[tuple[str, str], int]:
        return {pair: n for pair, n in self.counts.items() if n >= self.threshold}

    def senses_codes_for(self, bilingual_code: str) -> list[tuple[str, int]]:
        """Surviving sense-level codes for a group code, strongest first."""
        rows = [(mono, n) for (bi, mono), n in self.surviving().items()
                if bi == bilingual_code]
        rows.sort(key=lambda r: (-r[1], r[0]))
        return rows


def build_code_table(entries: Iterable[BilingualEntry], onto: Resource,
                     threshold: int = CODE_THRESHOLD) -> CodeTable:
    """Count (group code, sense code) co-occurrences over the dictionary.

    Every coded group votes once per distinct translation word for each
    code on each ontology sense of that word; ambiguity puts spurious
    pairs in the table, which the threshold prunes.
    """
    table = CodeTable(threshold=threshold)
    for entry in entries:
        for group in entry.groups:
            if group.field_code is None:
                continue
            for word in sorted(set(group.translations)):
                for sense in onto.senses_of_word(word):
                    for code in sense.field_codes:
                        table.counts[(group.field_code, code)] += 1
    return table


def _synset_coincidence(group: TranslationGroup, onto: Resource,
                        base: float = 1.0) -> list[tuple[str, float, tuple[SenseId, ...]]]:
    """Synsets shared by at least two distinct translations, best first."""
    words = sorted(set(group.translations))
    if len(words) < 2:
        return []
    by_synset: dict[str, dict[str, SenseId]] = {}
    for word in words:
        for sense in onto.senses_of_word(word):
            if sense.synset is not None:
                by_synset.setdefault(sense.synset, {}).setdefault(word, sense.id)
    candidates = []
    for synset, covered in by_synset.items():
        if len(covered) >= 2:
            confidence = base * len(covered) / len(words)
            senses = tuple(covered[w] for w in sorted(covered))
            candidates.append((synset, confidence, senses))
    candidates.sort(key=lambda c: (-c[1], c[0]))
    return candidates


def _hop_counts(onto: Resource, relation: str, sid: SenseId) -> dict[SenseId, int]:
    distances = {sid: 0}
    queue = deque([sid])
    while queue:
        node = queue.popleft()
        for parent in onto.parents(relation, node):
            if parent not in distances:
                distances[parent] = distances[node] + 1
                queue.append(parent)
    return distances


def _near_synset(group: TranslationGroup, onto: Resource, penalty: float,
                 max_links: int) -> list[tuple[SenseId, float, tuple[SenseId, SenseId]]]:
    """Common ancestors of sense pairs across translations, best first.

    Confidence starts at 1.0 and is multiplied by ``penalty`` for every
    hierarchy link between the two senses through the ancestor.
    """
    words = sorted(set(group.translations))
    if len(words) < 2:
        return []
    relation = default_links(onto)
    candidates = []
    for a_idx in range(len(words)):
        for b_idx in range(a_idx + 1, len(words)):
            for sa in onto.senses_of_word(words[a_idx]):
                da = _hop_counts(onto, relation, sa.id)
                for sb in onto.senses_of_word(words[b_idx]):
                    db = _hop_counts(onto, relation, sb.id)
                    for ancestor in sorted(set(da) & set(db)):
                        links = da[ancestor] + db[ancestor]
                        if 0 < links <= max_links:
                            candidates.append((
                                ancestor, penalty ** links, (sa.id, sb.id)))
    candidates.sort(key=lambda c: (-c[1], c[0]))
    return candidates


def default_links(onto: Resource) -> str:
    """The hierarchy relation the ontology actually uses."""
    hyper = genus = 0
    for sense in onto.all_senses():
        hyper += len(sense.hypernyms)
        genus += len(sense.genus)
    return "genus" if genus > hyper else "hypernym"


def _concept_label(onto: Resource, sid: SenseId) -> str:
    synset = onto.synset_of(sid)
    return synset if synset is not None else str(sid)


def match_group(entry: BilingualEntry, group_index: int, onto: Resource,
                table: CodeTable, penalty: float = PENALTY,
                max_links: int = MAX_LINKS,
                single_confidence: float = SINGLE_TRANSLATION_CONFIDENCE,
                code_confidence: float = FIELD_CODE_CONFIDENCE) -> Mapping | None:
    """Apply the four signals to one translation group."""
    group = entry.groups[group_index]
    words = sorted(set(group.translations))

    def mapping(kind: str, concept: str, senses: tuple[SenseId, ...],
                confidence: float, support: tuple[SenseId, ...] = (),
                alternatives: Sequence[tuple[str, float]] = ()) -> Mapping:
        return Mapping(
            headword=entry.headword, pos=entry.pos, group_index=group_index,
            translations=group.translations, field_code=group.field_code,
            kind=kind, concept=concept, senses=senses, support=support,
            confidence=confidence, alternatives=tuple(alternatives),
        )

    if len(words) >= 2:
        coincident = _synset_coincidence(group, onto)
        if coincident:
            synset, confidence, senses = coincident[0]
            return mapping(
                "synset-coincide", synset, senses, confidence,
                alternatives=[(s, c) for s, c, _ in coincident[1:]],
            )
        near = _near_synset(group, onto, penalty, max_links)
        if near:
            ancestor, confidence, support = near[0]
            seen = {ancestor}
            alternatives = []
            for other, conf, _ in near[1:]:
                if other not in seen:
                    seen.add(other)
                    alternatives.append((_concept_label(onto, other), conf))
            return mapping(
                "near-synset", _concept_label(onto, ancestor), (ancestor,),
                confidence, support=support, alternatives=alternatives,
            )
        return None

    word = words[0]
    senses = onto.senses_of_word(word)
    if not senses:
        return None
    if len(senses) == 1:
        sid = senses[0].id
        return mapping("single-translation", _concept_label(onto, sid), (sid,),
                       single_confidence)
    if group.field_code is not None:
        surviving = dict(table.senses_codes_for(group.field_code))
        scored = []
        for sense in senses:
            best = max((surviving[c] for c in sense.field_codes if c in surviving),
                       default=0)
            if best > 0:
                scored.append((sense.id, best))
        if scored:
            scored.sort(key=lambda s: (-s[1], s[0]))
            top_count = scored[0][1]
            alternatives = [
                (_concept_label(onto, sid), code_confidence * count / top_count)
                for sid, count in scored[1:]
            ]
            sid = scored[0][0]
            return mapping("field-code", _concept_label(onto, sid), (sid,),
                           code_confidence, alternatives=alternatives)
    return None


@dataclass
class BilingualRun:
    mappings: list[Mapping]
    table: CodeTable
    unresolved: list[tuple[str, int]]  # (headword, group index)


def run_bilingual_match(entries: Sequence[BilingualEntry], onto: Resource,
                        table: CodeTable | None = None,
                        penalty: float = PENALTY, max_links: int = MAX_LINKS,
                        threshold: int = CODE_THRESHOLD,
                        single_confidence: float = SINGLE_TRANSLATION_CONFIDENCE,
                        code_confidence: float = FIELD_CODE_CONFIDENCE) -> BilingualRun:
    """Match every group of every entry; strongest mappings first."""
    if table is None:
        table = build_code_table(entries, onto, threshold=threshold)
    mappings: list[Mapping] = []
    unresolved: list[tuple[str, int]] = []
    for entry in entries:
        for group_index in range(len(entry.groups)):
            result = match_group(
                entry, group_index, onto, table, penalty=penalty,
                max_links=max_links, single_confidence=single_confidence,
                code_confidence=code_confidence)
            if result is None:
                unresolved.append((entry.headword, group_index))
            else:
                mappings.append(result)
    mappings.sort(key=lambda m: (-m.confidence, m.headword, m.group_index))
    return BilingualRun(mappings=mappings, table=table, unresolved=unresolved)
