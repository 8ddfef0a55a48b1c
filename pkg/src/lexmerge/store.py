"""On-disk formats: match lines, mapping lines, code table, phase stats.

Everything row-oriented is JSON lines or TSV, written in a canonical
order so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .bimatch import CodeTable, Mapping
from .errors import DanglingReferenceError, ParseError
from .hiermatch import HierarchyStats
from .model import Match, Resource, SenseId

SCHEMA_VERSION = 1


def match_record(match: Match) -> dict:
    record: dict = {
        "left": str(match.left),
        "right": str(match.right),
        "confidence": round(match.confidence, 6),
        "phase": match.phase,
        "status": match.status,
    }
    if match.corrected_right is not None:
        record["corrected_right"] = str(match.corrected_right)
    if match.alternatives:
        record["alternatives"] = [
            [str(sid), round(conf, 6)] for sid, conf in match.alternatives
        ]
    return record


def write_matches(path: str | Path, matches: Iterable[Match]) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for match in matches:
            handle.write(json.dumps(match_record(match), ensure_ascii=False) + "\n")


def _parse_id(text: object, path: Path, line_no: int) -> SenseId:
    if not isinstance(text, str):
        raise ParseError("sense id must be a string", path=str(path), line_no=line_no)
    try:
        return SenseId.parse(text)
    except ValueError as exc:
        raise ParseError(f"bad sense id {text!r}: {exc}",
                         path=str(path), line_no=line_no) from exc


def read_matches(path: str | Path, left: Resource | None = None,
                 right: Resource | None = None) -> list[Match]:
    """Load match lines; ids are checked against the resources when given."""
    path = Path(path)
    matches: list[Match] = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read matches: {exc}", path=str(path)) from exc
    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}",
                             path=str(path), line_no=line_no) from exc
        if not isinstance(record, dict):
            raise ParseError("expected a JSON object",
                             path=str(path), line_no=line_no)
        for key in ("left", "right"):
            if key not in record:
                raise ParseError(f"match line missing {key!r}",
                                 path=str(path), line_no=line_no)
        lid = _parse_id(record["left"], path, line_no)
        rid = _parse_id(record["right"], path, line_no)
        corrected = record.get("corrected_right")
        corrected_id = (_parse_id(corrected, path, line_no)
                        if corrected is not None else None)
        alternatives = []
        for pair in record.get("alternatives", ()):
            if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                    or not isinstance(pair[1], (int, float))):
                raise ParseError("alternatives must be [id, confidence] pairs",
                                 path=str(path), line_no=line_no)
            alternatives.append((_parse_id(pair[0], path, line_no), float(pair[1])))
        for sid, resource in ((lid, left), (rid, right)):
            if resource is not None and sid not in resource:
                raise DanglingReferenceError(
                    f"match references unknown sense {sid}",
                    path=str(path), line_no=line_no)
        try:
            matches.append(Match(
                left=lid, right=rid,
                confidence=float(record.get("confidence", 0.0)),
                phase=record.get("phase", "seed"),
                status=record.get("status", "proposed"),
                corrected_right=corrected_id,
                alternatives=tuple(alternatives),
            ))
        except Exception as exc:
            raise ParseError(f"bad match line: {exc}",
                             path=str(path), line_no=line_no) from exc
    return matches


def mapping_record(mapping: Mapping) -> dict:
    record: dict = {
        "headword": mapping.headword,
        "pos": mapping.pos,
        "group": mapping.group_index,
        "translations": list(mapping.translations),
        "field_code": mapping.field_code,
        "kind": mapping.kind,
        "concept": mapping.concept,
        "senses": [str(sid) for sid in mapping.senses],
        "confidence": round(mapping.confidence, 6),
    }
    if mapping.support:
        record["support"] = [str(sid) for sid in mapping.support]
    if mapping.alternatives:
        record["alternatives"] = [
            [label, round(conf, 6)] for label, conf in mapping.alternatives
        ]
    return record


def write_mappings(path: str | Path, mappings: Iterable[Mapping]) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for mapping in mappings:
            handle.write(json.dumps(mapping_record(mapping), ensure_ascii=False) + "\n")


def read_mappings(path: str | Path) -> list[Mapping]:
    path = Path(path)
    mappings: list[Mapping] = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read mappings: {exc}", path=str(path)) from exc
    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}",
                             path=str(path), line_no=line_no) from exc
        try:
            mappings.append(Mapping(
                headword=record["headword"],
                pos=record.get("pos", ""),
                group_index=int(record["group"]),
                translations=tuple(record["translations"]),
                field_code=record.get("field_code"),
                kind=record["kind"],
                concept=record["concept"],
                senses=tuple(SenseId.parse(s) for s in record["senses"]),
                support=tuple(SenseId.parse(s) for s in record.get("support", ())),
                confidence=float(record["confidence"]),
                alternatives=tuple(
                    (label, float(conf))
                    for label, conf in record.get("alternatives", ())),
            ))
        except ParseError:
            raise
        except Exception as exc:
            raise ParseError(f"bad mapping line: {exc}",
                             path=str(path), line_no=line_no) from exc
    return mappings


def write_code_table(path: str | Path, table: CodeTable) -> None:
    """TSV dump of the code correlation table, largest counts first."""
    path = Path(path)
    surviving = table.surviving()
    rows = sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    with path.open("w", encoding="utf-8") as handle:
        handle.write("bilingual_code\tmono_code\tcount\tsurviving\n")
        for (bi, mono), count in rows:
            keep = "yes" if (bi, mono) in surviving else "no"
            handle.write(f"{bi}\t{mono}\t{count}\t{keep}\n")


def read_code_table(path: str | Path, threshold: int) -> CodeTable:
    path = Path(path)
    table = CodeTable(threshold=threshold)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].split("\t")[:3] != ["bilingual_code", "mono_code", "count"]:
        raise ParseError("not a code table file", path=str(path), line_no=1)
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split("\t")
        if len(parts) != 4:
            raise ParseError("expected 4 tab-separated columns",
                             path=str(path), line_no=line_no)
        try:
            table.counts[(parts[0], parts[1])] = int(parts[2])
        except ValueError as exc:
            raise ParseError(f"bad count {parts[2]!r}",
                             path=str(path), line_no=line_no) from exc
    return table


def write_stats(path: str | Path, stats: HierarchyStats) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        handle.write("phase\tmatches_proposed\n")
        for phase, count in stats.rows:
            handle.write(f"{phase}\t{count}\n")
        handle.write(f"total\t{stats.total()}\n")


def read_stats(path: str | Path) -> HierarchyStats:
    path = Path(path)
    stats = HierarchyStats()
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "phase\tmatches_proposed":
        raise ParseError("not a stats file", path=str(path), line_no=1)
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        phase, _, count = raw.partition("\t")
        if phase == "total":
            continue
        try:
            stats.add(phase, int(count))
        except ValueError as exc:
            raise ParseError(f"bad count {count!r}",
                             path=str(path), line_no=line_no) from exc
    return stats
