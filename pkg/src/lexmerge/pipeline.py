"""End-to-end merging pipeline and merge-quality checks.

Order of operations follows the practical recipe: Hierarchy Match first
(it is cheap and precise), remove its matches from both resources, then
Definition Match on what remains, then — when a bilingual dictionary is
configured — Bilingual Match against the merged ontology.  The detector
for hierarchy inconsistencies runs over the combined matches.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .bimatch import BilingualRun, run_bilingual_match
from .config import MergeConfig
from .defmatch import run_definition_match
from .errors import ConfigError
from .hiermatch import HierarchyStats, load_seeds, run_hierarchy_match
from .ingest import parse_bilingual, parse_monolingual, serialize_monolingual
from .model import Match, MatchList, Resource, Sense, SenseId
from .stemming import Stemmer
from . import store


class RemovalView:
    """A resource with some senses hidden from word-level lookups.

    Hidden senses stay reachable by id and in hierarchy walks — a matched
    sense must not tear a hole in the taxonomy — but they no longer count
    for ambiguity, word lists, or candidate enumeration.
    """

    def __init__(self, base: Resource, removed: Iterable[SenseId]):
        self._base = base
        self._removed = frozenset(removed)
        self.name = base.name
        self.style = base.style

    @property
    def removed(self) -> frozenset[SenseId]:
        return self._removed

    def sense(self, sid: SenseId) -> Sense:
        return self._base.sense(sid)

    def __contains__(self, sid: SenseId) -> bool:
        return sid in self._base

    def __len__(self) -> int:
        return len(self._base) - len(self._removed)

    def all_senses(self) -> Iterator[Sense]:
        for sense in self._base.all_senses():
            if sense.id not in self._removed:
                yield sense

    def words(self) -> list[str]:
        return sorted({s.id.word for s in self.all_senses()})

    def senses_of_word(self, word: str) -> list[Sense]:
        return [s for s in self._base.senses_of_word(word)
                if s.id not in self._removed]

    def is_unambiguous(self, word: str) -> bool:
        return len(self.senses_of_word(word)) == 1

    def display(self, sid: SenseId) -> str:
        return self._base.display(sid)

    # Hierarchy and synset queries pass through unfiltered.

    def relation_names(self):
        return self._base.relation_names()

    def parents(self, relation: str, sid: SenseId):
        return self._base.parents(relation, sid)

    def children(self, relation: str, sid: SenseId):
        return self._base.children(relation, sid)

    def ancestors(self, relation: str, sid: SenseId):
        return self._base.ancestors(relation, sid)

    def subtree(self, relation: str, root: SenseId):
        return self._base.subtree(relation, root)

    def synset_ids(self):
        return self._base.synset_ids()

    def synset_of(self, sid: SenseId):
        return self._base.synset_of(sid)

    def synset_members(self, synset_id: str):
        return self._base.synset_members(synset_id)


# ----------------------------------------------------------------------
# Merged-ontology export and enrichment
# ----------------------------------------------------------------------

ONTOLOGY_NAME = "ontology"


def merge_resources(left: Resource, right: Resource,
                    matches: Iterable[Match],
                    name: str = ONTOLOGY_NAME) -> Resource:
    """Fuse matched pairs into one ontology built on the right taxonomy.

    Every right sense becomes a concept (renamed into ``name``); a matched
    concept additionally carries the left word as a synonym and inherits
    the left sense's field codes and semantic code.
    """
    by_right: dict[SenseId, SenseId] = {}
    for match in matches:
        by_right[match.final_right()] = match.left

    def rename(sid: SenseId) -> SenseId:
        return replace(sid, resource=name)

    merged: list[Sense] = []
    for sense in right.all_senses():
        partner = by_right.get(sense.id)
        synonyms = set(sense.synonyms)
        field_codes = list(sense.field_codes)
        semantic_code = sense.semantic_code
        if partner is not None:
            left_sense = left.sense(partner)
            if left_sense.word != sense.word:
                synonyms.add(left_sense.word)
            for code in left_sense.field_codes:
                if code not in field_codes:
                    field_codes.append(code)
            if semantic_code is None:
                semantic_code = left_sense.semantic_code
        merged.append(replace(
            sense,
            id=rename(sense.id),
            hypernyms=tuple(rename(t) for t in sense.hypernyms),
            genus=tuple(rename(t) for t in sense.genus),
            synonyms=tuple(sorted(synonyms)),
            field_codes=tuple(field_codes),
            semantic_code=semantic_code,
        ))
    return Resource(name, merged, style=right.style)


def export_ontology(left: Resource, right: Resource, matches: Iterable[Match],
                    path: str | Path) -> Resource:
    """Write the merged ontology; the file reloads with parse_monolingual."""
    merged = merge_resources(left, right, matches)
    serialize_monolingual(merged, path)
    return merged


# ----------------------------------------------------------------------
# Inconsistency detection
# ----------------------------------------------------------------------

INCONSISTENCY_KINDS = ("divergent-ancestry", "code-conflict")


@dataclass(frozen=True)
class Inconsistency:
    kind: str
    left: SenseId
    right: SenseId
    detail: str

    def render(self) -> str:
        return f"{self.kind}: ({self.left} ~ {self.right}) {self.detail}"


def detect_inconsistencies(left: Resource, right: Resource,
                           matches: Sequence[Match],
                           left_relation: str | None = None,
                           right_relation: str | None = None) -> list[Inconsistency]:
    """Find matched pairs whose parents pull in different directions.

    For a match (l, r), let pl be a parent of l and pr a parent of r.  If
    pl and pr are themselves matched, but not to each other, and neither
    partner lies on the other's ancestor line, the two resources disagree
    about where the concept sits — usually one side linked l to the wrong
    homograph.  A match whose two senses carry different semantic codes is
    flagged separately.
    """
    from .hiermatch import default_relation

    left_relation = left_relation or default_relation(left)
    right_relation = right_relation or default_relation(right)
    partner_of_left: dict[SenseId, SenseId] = {}
    partner_of_right: dict[SenseId, SenseId] = {}
    for match in matches:
        partner_of_left[match.left] = match.final_right()
        partner_of_right[match.final_right()] = match.left

    findings: list[Inconsistency] = []
    for match in matches:
        l, r = match.left, match.final_right()
        for pl in left.parents(left_relation, l):
            if pl not in partner_of_left:
                continue
            for pr in right.parents(right_relation, r):
                if pr not in partner_of_right:
                    continue
                if partner_of_left[pl] == pr:
                    continue
                # Same lineage, different levels: not a conflict.
                r_line = {partner_of_left[pl]}
                r_line.update(right.ancestors(right_relation, partner_of_left[pl]))
                l_line = {partner_of_right[pr]}
                l_line.update(left.ancestors(left_relation, partner_of_right[pr]))
                if pr in r_line or pl in l_line:
                    continue
                findings.append(Inconsistency(
                    kind="divergent-ancestry", left=l, right=r,
                    detail=(f"left parent {pl} aligns with "
                            f"{partner_of_left[pl]}, but right parent {pr} "
                            f"aligns with {partner_of_right[pr]}"),
                ))
        left_code = left.sense(l).semantic_code
        right_code = right.sense(r).semantic_code
        if left_code is not None and right_code is not None and left_code != right_code:
            findings.append(Inconsistency(
                kind="code-conflict", left=l, right=r,
                detail=f"semantic codes disagree: {left_code!r} vs {right_code!r}",
            ))
    return findings


# ----------------------------------------------------------------------
# Pipeline runs
# ----------------------------------------------------------------------

@dataclass
class RunResult:
    run_id: str
    out_dir: Path
    hierarchy: MatchList
    hierarchy_stats: HierarchyStats
    definition: MatchList
    combined: MatchList
    ontology: Resource
    bilingual: BilingualRun | None
    inconsistencies: list[Inconsistency]


def _digest_file(path: Path, hasher: "hashlib._Hash") -> None:
    hasher.update(path.name.encode("utf-8"))
    hasher.update(path.read_bytes())


def compute_run_id(config: MergeConfig) -> str:
    """A stable fingerprint of every input byte plus the parameters."""
    hasher = hashlib.sha256()
    hasher.update(f"schema={store.SCHEMA_VERSION}".encode())
    for path in (config.left, config.right, config.seeds,
                 config.bilingual_match.dictionary):
        if path is not None:
            _digest_file(Path(path), hasher)
    parameters = {
        "floor": config.definition_match.floor,
        "hierarchy": vars(config.hierarchy_match).copy(),
        "bilingual": {k: v for k, v in vars(config.bilingual_match).items()
                      if k != "dictionary"},
    }
    hasher.update(json.dumps(parameters, sort_keys=True, default=str).encode())
    return hasher.hexdigest()[:12]


def run_pipeline(config: MergeConfig, out_dir: str | Path,
                 stemmer: Stemmer | None = None) -> RunResult:
    """Run the whole pipeline and write every artifact under out_dir.

    Outputs are deterministic: rerunning with identical inputs reproduces
    every file byte for byte except run.json, which carries timestamps.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.time()
    stemmer = stemmer if stemmer is not None else Stemmer.default()

    left = parse_monolingual(config.left)
    right = parse_monolingual(config.right)
    if left.name == right.name:
        raise ConfigError("left and right resources must have distinct names")
    seeds = load_seeds(config.seeds, left, right) if config.seeds else []

    hier, hier_stats = run_hierarchy_match(
        left, right, seeds,
        left_relation=config.hierarchy_match.left_relation,
        right_relation=config.hierarchy_match.right_relation,
        seed_confidence=config.hierarchy_match.seed_confidence,
        unambiguous_confidence=config.hierarchy_match.unambiguous_confidence,
        local_confidence=config.hierarchy_match.local_confidence,
        ancestor_confidence=config.hierarchy_match.ancestor_confidence,
    )
    store.write_matches(out / "hierarchy-matches.jsonl", hier)
    store.write_stats(out / "hierarchy-stats.tsv", hier_stats)

    left_view = RemovalView(left, hier.lefts)
    right_view = RemovalView(right, hier.rights)
    definition = run_definition_match(
        left_view, right_view, stemmer=stemmer,
        floor=config.definition_match.floor)
    store.write_matches(out / "definition-matches.jsonl", definition)

    combined = MatchList("combined")
    combined.extend(hier)
    combined.extend(definition)
    store.write_matches(out / "matches.jsonl", combined)

    ontology = export_ontology(left, right, combined, out / "ontology.jsonl")

    bilingual: BilingualRun | None = None
    if config.bilingual_match.dictionary is not None:
        entries = parse_bilingual(config.bilingual_match.dictionary)
        bilingual = run_bilingual_match(
            entries, ontology,
            penalty=config.bilingual_match.penalty,
            max_links=config.bilingual_match.max_links,
            threshold=config.bilingual_match.field_code_threshold,
            single_confidence=config.bilingual_match.single_translation_confidence,
            code_confidence=config.bilingual_match.field_code_confidence,
        )
        store.write_mappings(out / "mappings.jsonl", bilingual.mappings)
        store.write_code_table(out / "code-table.tsv", bilingual.table)

    inconsistencies = detect_inconsistencies(
        left, right, list(combined),
        left_relation=config.hierarchy_match.left_relation,
        right_relation=config.hierarchy_match.right_relation)
    with (out / "inconsistencies.txt").open("w", encoding="utf-8") as handle:
        for finding in inconsistencies:
            handle.write(finding.render() + "\n")

    run_id = compute_run_id(config)
    manifest = {
        "run_id": run_id,
        "schema_version": store.SCHEMA_VERSION,
        "inputs": {
            "left": str(config.left),
            "right": str(config.right),
            "seeds": str(config.seeds) if config.seeds else None,
            "dictionary": (str(config.bilingual_match.dictionary)
                           if config.bilingual_match.dictionary else None),
        },
        "counts": {
            "hierarchy": len(hier),
            "definition": len(definition),
            "combined": len(combined),
            "mappings": len(bilingual.mappings) if bilingual else 0,
            "inconsistencies": len(inconsistencies),
        },
        "started": started,
        "finished": time.time(),
    }
    (out / "run.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    return RunResult(
        run_id=run_id, out_dir=out, hierarchy=hier,
        hierarchy_stats=hier_stats, definition=definition, combined=combined,
        ontology=ontology, bilingual=bilingual,
        inconsistencies=inconsistencies,
    )
