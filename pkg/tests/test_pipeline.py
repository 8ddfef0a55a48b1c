from __future__ import annotations

import json

import pytest

from lexmerge.config import load_config
from lexmerge.errors import ConfigError
from lexmerge.ingest import parse_monolingual
from lexmerge.model import Match, Resource, Sense, SenseId
from lexmerge.pipeline import (
    ONTOLOGY_NAME,
    RemovalView,
    compute_run_id,
    detect_inconsistencies,
    export_ontology,
    merge_resources,
    run_pipeline,
)

ARTIFACTS = [
    "code-table.tsv",
    "definition-matches.jsonl",
    "hierarchy-matches.jsonl",
    "hierarchy-stats.tsv",
    "inconsistencies.txt",
    "mappings.jsonl",
    "matches.jsonl",
    "ontology.jsonl",
    "run.json",
]


@pytest.fixture(scope="module")
def pipeline_run(fixtures_dir, tmp_path_factory):
    config = load_config(fixtures_dir / "pipeline" / "merge.toml")
    out = tmp_path_factory.mktemp("run")
    return config, run_pipeline(config, out)


def _sense(resource, word, h, s, **kwargs):
    return Sense(id=SenseId(resource, word, h, s), **kwargs)


def _pairs(matches):
    return {(str(m.left), str(m.right)) for m in matches}


# ----------------------------------------------------------------------
# RemovalView
# ----------------------------------------------------------------------

def test_removal_view_hides_word_lookups(hiermatch_pair):
    left, _ = hiermatch_pair
    removed = SenseId.parse("ldoce-fixture:animal:1:2")
    view = RemovalView(left, [removed])
    assert [str(s.id) for s in view.senses_of_word("animal")] == [
        "ldoce-fixture:animal:1:1"]
    assert view.is_unambiguous("animal")
    assert len(view) == len(left) - 1
    assert removed not in {s.id for s in view.all_senses()}


def test_removal_view_drops_fully_removed_words(hiermatch_pair):
    left, _ = hiermatch_pair
    animal = [s.id for s in left.senses_of_word("animal")]
    view = RemovalView(left, animal)
    assert "animal" in left.words()
    assert "animal" not in view.words()
    assert view.senses_of_word("animal") == []


def test_removal_view_keeps_hierarchy_traversal(hiermatch_pair):
    left, _ = hiermatch_pair
    removed = SenseId.parse("ldoce-fixture:animal:1:2")
    view = RemovalView(left, [removed])
    seal = SenseId.parse("ldoce-fixture:seal:2:1")
    # The removed sense is still an ancestor link, an id, and a member.
    assert removed in view.ancestors("genus", seal)
    assert view.sense(removed).id == removed
    assert removed in view


def test_removal_view_preserves_identity(hiermatch_pair):
    left, _ = hiermatch_pair
    view = RemovalView(left, [])
    assert view.name == left.name
    assert view.style == left.style
    assert view.words() == left.words()


# ----------------------------------------------------------------------
# Merge and export
# ----------------------------------------------------------------------

def _merge_pair():
    left = Resource("l", [
        _sense("l", "car", 1, 1, semantic_code="V", field_codes=("AU",)),
    ])
    right = Resource("r", [
        _sense("r", "automobile", 0, 1, synset="CAR",
               hypernyms=(SenseId.parse("r:vehicle:0:1"),),
               field_codes=("TRANS",)),
        _sense("r", "vehicle", 0, 1, synset="VEHICLE"),
    ])
    match = Match(left=SenseId.parse("l:car:1:1"),
                  right=SenseId.parse("r:automobile:0:1"),
                  confidence=1.0, phase="seed")
    return left, right, match


def test_merge_renames_and_rewrites_links():
    left, right, match = _merge_pair()
    merged = merge_resources(left, right, [match])
    auto = merged.sense(SenseId.parse("ontology:automobile:0:1"))
    assert auto.id.resource == ONTOLOGY_NAME
    assert [str(t) for t in auto.hypernyms] == ["ontology:vehicle:0:1"]
    assert len(merged) == len(right)


def test_merge_enriches_matched_concepts():
    left, right, match = _merge_pair()
    merged = merge_resources(left, right, [match])
    auto = merged.sense(SenseId.parse("ontology:automobile:0:1"))
    assert auto.synonyms == ("car",)
    assert auto.field_codes == ("TRANS", "AU")
    assert auto.semantic_code == "V"


def test_merge_keeps_right_semantic_code():
    left, right, match = _merge_pair()
    right2 = Resource("r", [
        _sense("r", "automobile", 0, 1, semantic_code="W"),
    ])
    merged = merge_resources(left, right2, [match])
    assert merged.sense(
        SenseId.parse("ontology:automobile:0:1")).semantic_code == "W"


def test_merge_same_word_adds_no_synonym():
    left = Resource("l", [_sense("l", "seal", 2, 1)])
    right = Resource("r", [_sense("r", "seal", 0, 7)])
    match = Match(left=SenseId.parse("l:seal:2:1"),
                  right=SenseId.parse("r:seal:0:7"),
                  confidence=1.0, phase="seed")
    merged = merge_resources(left, right, [match])
    assert merged.sense(SenseId.parse("ontology:seal:0:7")).synonyms == ()


def test_merge_honors_corrections():
    left, right, match = _merge_pair()
    corrected = Match(
        left=match.left, right=match.right, confidence=1.0, phase="seed",
        status="corrected", corrected_right=SenseId.parse("r:vehicle:0:1"))
    merged = merge_resources(left, right, [corrected])
    assert merged.sense(SenseId.parse("ontology:vehicle:0:1")).synonyms == ("car",)
    assert merged.sense(SenseId.parse("ontology:automobile:0:1")).synonyms == ()


def test_export_reloads_identically(tmp_path):
    left, right, match = _merge_pair()
    path = tmp_path / "ontology.jsonl"
    merged = export_ontology(left, right, [match], path)
    assert parse_monolingual(path) == merged


# ----------------------------------------------------------------------
# Inconsistency detection
# ----------------------------------------------------------------------

def test_planted_divergent_ancestry(inconsistency_pair, fixtures_dir):
    from lexmerge.store import read_matches
    left, right = inconsistency_pair
    matches = read_matches(
        fixtures_dir / "inconsistency" / "matches.jsonl", left, right)
    findings = detect_inconsistencies(left, right, matches)
    assert len(findings) == 1
    finding = findings[0]
    assert finding.kind == "divergent-ancestry"
    assert str(finding.left) == "ldoce-fixture:savings bank:0:0"
    assert "ldoce-fixture:bank:1:1" in finding.detail
    assert "wn-fixture:bank:0:2" in finding.detail


def test_consistent_matches_are_clean(pipeline_run):
    _, result = pipeline_run
    assert result.inconsistencies == []


def test_code_conflict_detected():
    left = Resource("l", [_sense("l", "seal", 2, 1, semantic_code="A")])
    right = Resource("r", [_sense("r", "seal", 0, 7, semantic_code="B")])
    match = Match(left=SenseId.parse("l:seal:2:1"),
                  right=SenseId.parse("r:seal:0:7"),
                  confidence=1.0, phase="seed")
    findings = detect_inconsistencies(left, right, [match])
    assert [f.kind for f in findings] == ["code-conflict"]
    assert "'A' vs 'B'" in findings[0].detail


def test_code_conflict_needs_both_codes():
    left = Resource("l", [_sense("l", "seal", 2, 1, semantic_code="A")])
    right = Resource("r", [_sense("r", "seal", 0, 7)])
    match = Match(left=SenseId.parse("l:seal:2:1"),
                  right=SenseId.parse("r:seal:0:7"),
                  confidence=1.0, phase="seed")
    assert detect_inconsistencies(left, right, [match]) == []


def test_same_lineage_levels_not_flagged():
    """Parents that align to different levels of one line are no conflict."""
    left = Resource("l", [
        _sense("l", "a", 0, 1, genus=(SenseId.parse("l:b:0:1"),)),
        _sense("l", "b", 0, 1),
        _sense("l", "x", 0, 1),
    ])
    right = Resource("r", [
        _sense("r", "a", 0, 1, hypernyms=(SenseId.parse("r:c:0:1"),)),
        _sense("r", "b", 0, 1, hypernyms=(SenseId.parse("r:c:0:1"),)),
        _sense("r", "c", 0, 1),
    ])
    matches = [
        Match(left=SenseId.parse("l:a:0:1"), right=SenseId.parse("r:a:0:1"),
              confidence=1.0, phase="seed"),
        Match(left=SenseId.parse("l:b:0:1"), right=SenseId.parse("r:b:0:1"),
              confidence=1.0, phase="seed"),
        Match(left=SenseId.parse("l:x:0:1"), right=SenseId.parse("r:c:0:1"),
              confidence=1.0, phase="seed"),
    ]
    assert detect_inconsistencies(left, right, matches,
                                  left_relation="genus",
                                  right_relation="hypernym") == []


# ----------------------------------------------------------------------
# Full pipeline runs
# ----------------------------------------------------------------------

def test_run_id_frozen(pipeline_run):
    _, result = pipeline_run
    assert result.run_id == "1cf481dc1794"


def test_pipeline_hierarchy_results(pipeline_run):
    _, result = pipeline_run
    assert _pairs(result.hierarchy) == {
        ("ldoce-fixture:animal:1:2", "wn-fixture:animal:0:1"),
        ("ldoce-fixture:person:0:1", "wn-fixture:person:0:1"),
        ("ldoce-fixture:seal:2:1", "wn-fixture:seal:0:7"),
        ("ldoce-fixture:animal:1:1", "wn-fixture:animal:0:2"),
    }
    assert result.hierarchy_stats.rows == [
        ("Step 1", 2), ("Step 2(a)", 1), ("Step 2(c)", 0),
        ("Step 2(a)", 1), ("Step 2(c)", 0),
        ("Step 2(a)", 0), ("Step 2(c)", 0),
    ]


def test_pipeline_definition_results(pipeline_run):
    _, result = pipeline_run
    assert _pairs(result.definition) == {
        ("ldoce-fixture:batter:2:0", "wn-fixture:batter:0:2"),
        ("ldoce-fixture:seal:1:1", "wn-fixture:seal:0:1"),
        ("ldoce-fixture:batter:3:0", "wn-fixture:batter:0:1"),
    }
    confidences = {str(m.left): round(m.confidence, 4)
                   for m in result.definition}
    assert confidences["ldoce-fixture:seal:1:1"] == 2.6


def test_pipeline_stage_exclusivity(pipeline_run):
    """A sense matched by hierarchy never reappears in definition match."""
    _, result = pipeline_run
    assert not result.hierarchy.lefts & result.definition.lefts
    assert not result.hierarchy.rights & result.definition.rights
    assert len(result.combined) == len(result.hierarchy) + len(result.definition)


def test_pipeline_splits_seal_between_stages(pipeline_run):
    _, result = pipeline_run
    hier = {str(m.left) for m in result.hierarchy}
    defn = {str(m.left) for m in result.definition}
    assert "ldoce-fixture:seal:2:1" in hier
    assert "ldoce-fixture:seal:1:1" in defn


def test_pipeline_bilingual_results(pipeline_run):
    _, result = pipeline_run
    assert result.bilingual is not None
    assert [(m.headword, m.kind, m.concept) for m in result.bilingual.mappings] == [
        ("persona", "single-translation", "syn-person")]
    assert result.bilingual.unresolved == [("foca", 0)]


def test_pipeline_ontology_enriched(pipeline_run):
    _, result = pipeline_run
    enriched = result.ontology.sense(SenseId.parse("ontology:batter:0:2"))
    assert enriched.semantic_code == "T"


def test_pipeline_artifacts(pipeline_run):
    _, result = pipeline_run
    assert sorted(p.name for p in result.out_dir.iterdir()) == ARTIFACTS
    reloaded = parse_monolingual(result.out_dir / "ontology.jsonl")
    assert reloaded == result.ontology


def test_pipeline_manifest(pipeline_run):
    _, result = pipeline_run
    manifest = json.loads((result.out_dir / "run.json").read_text())
    assert manifest["run_id"] == result.run_id
    assert manifest["schema_version"] == 1
    assert manifest["counts"] == {
        "hierarchy": 4, "definition": 3, "combined": 7,
        "mappings": 1, "inconsistencies": 0,
    }
    assert manifest["finished"] >= manifest["started"]


def test_rerun_is_byte_identical_except_manifest(pipeline_run, tmp_path):
    config, result = pipeline_run
    again = run_pipeline(config, tmp_path / "again")
    for name in ARTIFACTS:
        first = (result.out_dir / name).read_bytes()
        second = (tmp_path / "again" / name).read_bytes()
        if name == "run.json":
            strip = lambda raw: {k: v for k, v in json.loads(raw).items()
                                 if k not in ("started", "finished")}
            assert strip(first) == strip(second)
        else:
            assert first == second, f"{name} differs between reruns"


def test_run_id_tracks_parameters(pipeline_run, fixtures_dir):
    config, result = pipeline_run
    assert compute_run_id(config) == result.run_id
    from dataclasses import replace
    bumped = replace(config, definition_match=replace(
        config.definition_match, floor=0.5))
    assert compute_run_id(bumped) != result.run_id


def test_run_id_tracks_input_bytes(fixtures_dir, tmp_path):
    config = load_config(fixtures_dir / "pipeline" / "merge.toml")
    base = compute_run_id(config)
    copy = tmp_path / "ldoce-fixture.jsonl"
    text = config.left.read_text(encoding="utf-8")
    copy.write_text(text + "\n", encoding="utf-8")
    from dataclasses import replace
    assert compute_run_id(replace(config, left=copy)) != base


def test_identical_resource_names_rejected(fixtures_dir, tmp_path):
    config = load_config(fixtures_dir / "pipeline" / "merge.toml")
    from dataclasses import replace
    bad = replace(config, right=config.left)
    with pytest.raises(ConfigError, match="distinct names"):
        run_pipeline(bad, tmp_path / "out")
