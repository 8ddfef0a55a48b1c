"""Readers and writers for the JSON-lines resource formats.

Monolingual resources are one sense per line; bilingual dictionaries are
one headword entry per line.  All diagnostics carry the file path and the
1-based line number of the offending record.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

from .errors import CycleError, DanglingReferenceError, ParseError
from .model import Resource, Sense, SenseId
from .stemming import tokenize

log = logging.getLogger(__name__)

_SENSE_KEYS = {
    "word", "homograph", "sense_no", "pos", "definition", "examples",
    "synset", "hypernyms", "genus", "semantic_code", "field_codes",
    "synonyms", "kind", "names", "aliases",
}


def _fail(path: Path, line_no: int, message: str) -> ParseError:
    return ParseError(message, path=str(path), line_no=line_no)


def _require_str(record: dict, key: str, path: Path, line_no: int) -> str:
    value = record.get(key)
    if not isinstance(value, str) or not value.strip():
        raise _fail(path, line_no, f"missing or empty {key!r}")
    return value


def _as_int(record: dict, key: str, path: Path, line_no: int, default: int = 0) -> int:
    value = record.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise _fail(path, line_no, f"{key!r} must be a non-negative integer")
    return value


def _text_tokens(value: Any, path: Path, line_no: int, key: str) -> tuple[tuple[str, ...], str]:
    """Normalise a definition/example field to (tokens, original gloss)."""
    if isinstance(value, str):
        return tuple(tokenize(value)), value
    if isinstance(value, list) and all(isinstance(t, str) for t in value):
        return tuple(t.lower() for t in value), ""
    raise _fail(path, line_no, f"{key!r} must be a string or a list of tokens")


def _id_list(record: dict, key: str, resource_name: str,
             path: Path, line_no: int) -> tuple[SenseId, ...]:
    raw = record.get(key, [])
    if not isinstance(raw, list):
        raise _fail(path, line_no, f"{key!r} must be a list of sense ids")
    out = []
    for item in raw:
        if not isinstance(item, str):
            raise _fail(path, line_no, f"{key!r} entries must be id strings")
        try:
            target = SenseId.parse(item)
        except ValueError as exc:
            raise _fail(path, line_no, f"bad sense id {item!r}: {exc}") from exc
        if target.resource != resource_name:
            raise _fail(path, line_no,
                        f"{key!r} target {item!r} names a different resource")
        out.append(target)
    return tuple(out)


def _str_list(record: dict, key: str, path: Path, line_no: int) -> tuple[str, ...]:
    raw = record.get(key, [])
    if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
        raise _fail(path, line_no, f"{key!r} must be a list of strings")
    return tuple(raw)


def parse_sense_record(record: dict, resource_name: str,
                       path: Path, line_no: int) -> Sense:
    if not isinstance(record, dict):
        raise _fail(path, line_no, "expected a JSON object")
    unknown = set(record) - _SENSE_KEYS
    if unknown:
        raise _fail(path, line_no, f"unknown keys: {', '.join(sorted(unknown))}")

    word = _require_str(record, "word", path, line_no)
    homograph = _as_int(record, "homograph", path, line_no)
    sense_no = _as_int(record, "sense_no", path, line_no)
    sid = SenseId(resource_name, word, homograph, sense_no)

    definition, gloss = _text_tokens(
        record.get("definition", ""), path, line_no, "definition")
    raw_examples = record.get("examples", [])
    if not isinstance(raw_examples, list):
        raise _fail(path, line_no, "'examples' must be a list")
    examples, example_glosses = [], []
    for example in raw_examples:
        tokens, text = _text_tokens(example, path, line_no, "examples")
        examples.append(tokens)
        example_glosses.append(text)

    pos = record.get("pos", "n")
    if not isinstance(pos, str):
        raise _fail(path, line_no, "'pos' must be a string")
    synset = record.get("synset")
    if synset is not None and not isinstance(synset, str):
        raise _fail(path, line_no, "'synset' must be a string")
    semantic_code = record.get("semantic_code")
    if semantic_code is not None and not isinstance(semantic_code, str):
        raise _fail(path, line_no, "'semantic_code' must be a string")

    return Sense(
        id=sid,
        pos=pos,
        definition=definition,
        examples=tuple(examples),
        gloss=gloss,
        example_glosses=tuple(example_glosses),
        synset=synset,
        hypernyms=_id_list(record, "hypernyms", resource_name, path, line_no),
        genus=_id_list(record, "genus", resource_name, path, line_no),
        semantic_code=semantic_code,
        field_codes=_str_list(record, "field_codes", path, line_no),
        synonyms=tuple(s.lower() for s in _str_list(record, "synonyms", path, line_no)),
    )


def parse_monolingual(path: str | Path, name: str | None = None) -> Resource:
    """Load a monolingual resource; the file stem names it by default."""
    path = Path(path)
    resource_name = name if name is not None else path.stem
    senses: list[Sense] = []
    seen: dict[SenseId, int] = {}
    link_lines: dict[SenseId, int] = {}
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read resource: {exc}", path=str(path)) from exc

    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise _fail(path, line_no, f"invalid JSON: {exc.msg}") from exc
        sense = parse_sense_record(record, resource_name, path, line_no)
        if sense.id in seen:
            raise _fail(path, line_no,
                        f"duplicate sense id {sense.id} (first at line {seen[sense.id]})")
        seen[sense.id] = line_no
        link_lines[sense.id] = line_no
        senses.append(sense)

    # Check link targets here so dangling references report a line number.
    declared = set(seen)
    for sense in senses:
        for target in sense.hypernyms + sense.genus:
            if target not in declared:
                raise DanglingReferenceError(
                    f"sense {sense.id} links to unknown sense {target}",
                    path=str(path), line_no=link_lines[sense.id])

    try:
        return Resource(resource_name, senses)
    except CycleError as exc:
        raise CycleError(str(exc), path=str(path), cycle=exc.cycle) from exc


def sense_record(sense: Sense) -> dict:
    """The JSON object for one sense, in canonical key order."""
    record: dict[str, Any] = {
        "word": sense.id.word,
        "homograph": sense.id.homograph,
        "sense_no": sense.id.sense_no,
        "pos": sense.pos,
        "definition": sense.gloss if sense.gloss else list(sense.definition),
    }
    examples = [
        text if text else list(tokens)
        for tokens, text in zip(sense.examples, sense.example_glosses)
    ]
    record["examples"] = examples
    if sense.synset is not None:
        record["synset"] = sense.synset
    if sense.hypernyms:
        record["hypernyms"] = [str(t) for t in sense.hypernyms]
    if sense.genus:
        record["genus"] = [str(t) for t in sense.genus]
    if sense.semantic_code is not None:
        record["semantic_code"] = sense.semantic_code
    if sense.field_codes:
        record["field_codes"] = list(sense.field_codes)
    if sense.synonyms:
        record["synonyms"] = list(sense.synonyms)
    return record


def serialize_monolingual(resource: Resource, path: str | Path) -> None:
    """Write the resource so that parsing it back yields an equal Resource."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for sense in resource.all_senses():
            handle.write(json.dumps(sense_record(sense), ensure_ascii=False) + "\n")


@dataclass(frozen=True)
class TranslationGroup:
    """One sense group of a bilingual entry: near-synonymous translations."""

    translations: tuple[str, ...]
    field_code: str | None = None


@dataclass(frozen=True)
class BilingualEntry:
    headword: str
    pos: str
    groups: tuple[TranslationGroup, ...]


def parse_bilingual(path: str | Path,
                    known_codes: Iterable[str] | None = None) -> list[BilingualEntry]:
    """Load a bilingual dictionary (one headword entry per line).

    ``known_codes`` is the declared field-code inventory; codes outside it
    are kept but logged, since a typo in a code silently weakens the
    field-code match stage.
    """
    path = Path(path)
    inventory = frozenset(known_codes) if known_codes is not None else None
    entries: list[BilingualEntry] = []
    seen_headwords: dict[tuple[str, str], int] = {}
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read dictionary: {exc}", path=str(path)) from exc

    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise _fail(path, line_no, f"invalid JSON: {exc.msg}") from exc
        if not isinstance(record, dict):
            raise _fail(path, line_no, "expected a JSON object")
        headword = _require_str(record, "headword", path, line_no).lower()
        pos = record.get("pos", "")
        if not isinstance(pos, str):
            raise _fail(path, line_no, "'pos' must be a string")
        key = (headword, pos)
        if key in seen_headwords:
            raise _fail(path, line_no,
                        f"duplicate entry for {headword!r} "
                        f"(first at line {seen_headwords[key]})")
        seen_headwords[key] = line_no

        raw_groups = record.get("senses")
        if not isinstance(raw_groups, list) or not raw_groups:
            raise _fail(path, line_no, "'senses' must be a non-empty list")
        groups = []
        for group in raw_groups:
            if not isinstance(group, dict):
                raise _fail(path, line_no, "each sense group must be an object")
            translations = group.get("translations")
            if (not isinstance(translations, list) or not translations
                    or not all(isinstance(t, str) and t.strip() for t in translations)):
                raise _fail(path, line_no,
                            "'translations' must be a non-empty list of words")
            code = group.get("field_code")
            if code is not None:
                if not isinstance(code, str) or not code:
                    raise _fail(path, line_no, "'field_code' must be a string or null")
                if inventory is not None and code not in inventory:
                    log.warning("%s:%d: field code %r not in the declared inventory",
                                path, line_no, code)
            groups.append(TranslationGroup(
                translations=tuple(t.strip().lower() for t in translations),
                field_code=code,
            ))
        entries.append(BilingualEntry(headword=headword, pos=pos, groups=tuple(groups)))
    return entries
