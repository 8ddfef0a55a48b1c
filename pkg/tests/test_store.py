from __future__ import annotations

from dataclasses import replace

import pytest

from lexmerge.bimatch import CodeTable, Mapping, run_bilingual_match
from lexmerge.errors import DanglingReferenceError, ParseError
from lexmerge.hiermatch import HierarchyStats
from lexmerge.model import Match, SenseId
from lexmerge.store import (
    match_record,
    read_code_table,
    read_matches,
    read_mappings,
    read_stats,
    write_code_table,
    write_matches,
    write_mappings,
    write_stats,
)


def _match(**overrides):
    fields = dict(
        left=SenseId.parse("ldoce:bank:1:1"),
        right=SenseId.parse("wn:bank:0:2"),
        confidence=0.9,
        phase="defmatch",
    )
    fields.update(overrides)
    return Match(**fields)


# ----------------------------------------------------------------------
# Match lines
# ----------------------------------------------------------------------

def test_match_roundtrip(tmp_path):
    matches = [
        _match(),
        _match(left=SenseId.parse("ldoce:seal:2:1"),
               right=SenseId.parse("wn:seal:0:7"),
               confidence=0.123456789, phase="local-unambiguous",
               status="corrected",
               corrected_right=SenseId.parse("wn:seal:0:1"),
               alternatives=((SenseId.parse("wn:seal:0:7"), 0.9),
                             (SenseId.parse("wn:seal:0:1"), 0.1))),
    ]
    path = tmp_path / "matches.jsonl"
    write_matches(path, matches)
    loaded = read_matches(path)
    assert [(str(m.left), str(m.right), m.phase, m.status) for m in loaded] == [
        ("ldoce:bank:1:1", "wn:bank:0:2", "defmatch", "proposed"),
        ("ldoce:seal:2:1", "wn:seal:0:7", "local-unambiguous", "corrected"),
    ]
    assert loaded[1].confidence == pytest.approx(0.123457)  # rounded at 6 places
    assert str(loaded[1].corrected_right) == "wn:seal:0:1"
    assert [(str(s), c) for s, c in loaded[1].alternatives] == [
        ("wn:seal:0:7", 0.9), ("wn:seal:0:1", 0.1)]


def test_match_record_omits_empty_fields():
    record = match_record(_match())
    assert "corrected_right" not in record
    assert "alternatives" not in record
    assert list(record) == ["left", "right", "confidence", "phase", "status"]


def test_read_matches_checks_membership(tmp_path, hiermatch_pair):
    left, right = hiermatch_pair
    path = tmp_path / "matches.jsonl"
    write_matches(path, [Match(
        left=SenseId.parse("ldoce-fixture:zebra:0:0"),
        right=SenseId.parse("wn-fixture:dive:0:3"),
        confidence=1.0, phase="seed")])
    with pytest.raises(DanglingReferenceError, match=r"matches\.jsonl:1"):
        read_matches(path, left=left, right=right)
    # Without resources the same file loads fine.
    assert len(read_matches(path)) == 1


@pytest.mark.parametrize("line, message", [
    ("not json", "invalid JSON"),
    ('["a", "b"]', "expected a JSON object"),
    ('{"right": "wn:a:0:1"}', "missing 'left'"),
    ('{"left": "nonsense", "right": "wn:a:0:1"}', "bad sense id"),
    ('{"left": 3, "right": "wn:a:0:1"}', "sense id must be a string"),
    ('{"left": "l:a:0:1", "right": "r:a:0:1", "alternatives": [["r:a:0:1"]]}',
     r"alternatives must be \[id, confidence\] pairs"),
    ('{"left": "l:a:0:1", "right": "r:a:0:1", "phase": "bogus"}',
     "bad match line"),
])
def test_read_matches_diagnostics(tmp_path, line, message):
    path = tmp_path / "matches.jsonl"
    path.write_text(line + "\n", encoding="utf-8")
    with pytest.raises(ParseError, match=message) as excinfo:
        read_matches(path)
    assert excinfo.value.line_no == 1


def test_read_matches_missing_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read matches"):
        read_matches(tmp_path / "absent.jsonl")


def test_write_matches_deterministic(tmp_path):
    matches = [_match(), _match(left=SenseId.parse("ldoce:seal:2:1"),
                                right=SenseId.parse("wn:seal:0:7"))]
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_matches(a, matches)
    write_matches(b, matches)
    assert a.read_bytes() == b.read_bytes()


# ----------------------------------------------------------------------
# Mapping lines
# ----------------------------------------------------------------------

def test_mapping_roundtrip(tmp_path, bimatch_fixture):
    onto, entries = bimatch_fixture
    run = run_bilingual_match(entries, onto)
    path = tmp_path / "mappings.jsonl"
    write_mappings(path, run.mappings)
    loaded = read_mappings(path)
    # Confidences are canonicalized to six decimal places on disk.
    expected = [replace(m, confidence=round(m.confidence, 6),
                        alternatives=tuple((label, round(conf, 6))
                                           for label, conf in m.alternatives))
                for m in run.mappings]
    assert loaded == expected


def test_mapping_roundtrip_with_alternatives(tmp_path):
    mapping = Mapping(
        headword="banco", pos="n", group_index=4, translations=("bank",),
        field_code="COM", kind="field-code", concept="FINANCE-BANK",
        senses=(SenseId.parse("onto:bank:0:2"),),
        support=(SenseId.parse("onto:firm:0:1"),),
        confidence=0.9, alternatives=(("DATA-BANK", 0.45),))
    path = tmp_path / "mappings.jsonl"
    write_mappings(path, [mapping])
    assert read_mappings(path) == [mapping]


def test_read_mappings_diagnostics(tmp_path):
    path = tmp_path / "mappings.jsonl"
    path.write_text('{"headword": "x"}\n', encoding="utf-8")
    with pytest.raises(ParseError, match="bad mapping line"):
        read_mappings(path)


# ----------------------------------------------------------------------
# Code table
# ----------------------------------------------------------------------

def test_code_table_roundtrip(tmp_path):
    table = CodeTable(threshold=6)
    table.counts.update({("COM", "ECZB"): 6, ("ZOOL", "SPORT"): 1})
    path = tmp_path / "table.tsv"
    write_code_table(path, table)
    text = path.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "bilingual_code\tmono_code\tcount\tsurviving"
    assert "COM\tECZB\t6\tyes" in text
    assert "ZOOL\tSPORT\t1\tno" in text
    loaded = read_code_table(path, threshold=6)
    assert dict(loaded.counts) == dict(table.counts)
    assert loaded.surviving() == {("COM", "ECZB"): 6}


def test_code_table_sorted_by_count(tmp_path):
    table = CodeTable(threshold=1)
    table.counts.update({("A", "x"): 2, ("B", "y"): 9, ("A", "w"): 2})
    path = tmp_path / "table.tsv"
    write_code_table(path, table)
    rows = [line.split("\t")[:2] for line in
            path.read_text(encoding="utf-8").splitlines()[1:]]
    assert rows == [["B", "y"], ["A", "w"], ["A", "x"]]


def test_read_code_table_rejects_other_files(tmp_path):
    path = tmp_path / "table.tsv"
    path.write_text("something else\n", encoding="utf-8")
    with pytest.raises(ParseError, match="not a code table"):
        read_code_table(path, threshold=6)


def test_read_code_table_bad_count(tmp_path):
    path = tmp_path / "table.tsv"
    path.write_text("bilingual_code\tmono_code\tcount\tsurviving\n"
                    "COM\tECZB\tmany\tyes\n", encoding="utf-8")
    with pytest.raises(ParseError, match="bad count"):
        read_code_table(path, threshold=6)


# ----------------------------------------------------------------------
# Phase stats
# ----------------------------------------------------------------------

def test_stats_roundtrip(tmp_path):
    stats = HierarchyStats()
    for phase, count in [("Step 1", 4), ("Step 2(a)", 2), ("Step 2(c)", 1)]:
        stats.add(phase, count)
    path = tmp_path / "stats.tsv"
    write_stats(path, stats)
    text = path.read_text(encoding="utf-8")
    assert text.endswith("total\t7\n")
    loaded = read_stats(path)
    assert loaded.rows == stats.rows
    assert loaded.total() == 7


def test_read_stats_rejects_other_files(tmp_path):
    path = tmp_path / "stats.tsv"
    path.write_text("wrong header\n", encoding="utf-8")
    with pytest.raises(ParseError, match="not a stats file"):
        read_stats(path)
