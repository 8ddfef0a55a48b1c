"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error (unparseable input,
broken references, bad config).  Batch commands are plain file-to-file
transformations; only ``verify-serve`` starts a long-running process.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .bimatch import CODE_THRESHOLD, MAX_LINKS, PENALTY, build_code_table, run_bilingual_match
from .config import load_config
from .defmatch import run_definition_match
from .errors import LexmergeError
from .hiermatch import load_seeds, run_hierarchy_match
from .ingest import parse_bilingual, parse_monolingual
from .model import MatchList
from .pipeline import detect_inconsistencies, export_ontology, run_pipeline
from .stemming import Stemmer
from . import store
from .verify import Workbench, items_from_matches

USAGE_ERROR = 1
DATA_ERROR = 2

DEFAULT_FLOOR = 0.4
DEFAULT_BIND = "127.0.0.1:8765"
BIND_ENV = "LEXMERGE_BIND"


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this project reserves 2 for
    data errors, so usage problems are remapped to exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _write_matches(matches: MatchList, out: str | None) -> None:
    if out is None:
        for match in matches:
            print(json.dumps(store.match_record(match), ensure_ascii=False))
    else:
        store.write_matches(out, matches)


def _load_pair(args) -> tuple:
    return parse_monolingual(args.left), parse_monolingual(args.right)


def cmd_ingest_check(args) -> int:
    for path in args.paths:
        if args.bilingual:
            entries = parse_bilingual(path)
            groups = sum(len(e.groups) for e in entries)
            print(f"ok {path}: {len(entries)} entries, {groups} sense groups")
        else:
            resource = parse_monolingual(path, name=args.name)
            print(f"ok {path}: resource {resource.name!r}, "
                  f"{len(resource)} senses, {len(resource.words())} words, "
                  f"style {resource.style}")
    return 0


def cmd_defmatch(args) -> int:
    left, right = _load_pair(args)
    matches = run_definition_match(
        left, right, stemmer=Stemmer.default(), floor=args.floor,
        words=args.word or None)
    _write_matches(matches, args.out)
    print(f"defmatch: {len(matches)} matches proposed", file=sys.stderr)
    return 0


def cmd_hiermatch(args) -> int:
    left, right = _load_pair(args)
    seeds = load_seeds(args.seeds, left, right) if args.seeds else []
    matches, stats = run_hierarchy_match(
        left, right, seeds,
        left_relation=args.left_relation, right_relation=args.right_relation)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    store.write_matches(out / "matches.jsonl", matches)
    store.write_stats(out / "stats.tsv", stats)
    for phase, count in stats.rows:
        print(f"{phase}\t{count}")
    print(f"total\t{stats.total()}")
    return 0


def cmd_bimatch(args) -> int:
    onto = parse_monolingual(args.onto)
    entries = parse_bilingual(args.dict)
    run = run_bilingual_match(
        entries, onto, penalty=args.penalty, max_links=args.max_links,
        threshold=args.threshold)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    store.write_mappings(out / "mappings.jsonl", run.mappings)
    store.write_code_table(out / "code-table.tsv", run.table)
    print(f"bimatch: {len(run.mappings)} mappings, "
          f"{len(run.unresolved)} unresolved groups", file=sys.stderr)
    return 0


def cmd_fieldtable(args) -> int:
    onto = parse_monolingual(args.onto)
    entries = parse_bilingual(args.dict)
    table = build_code_table(entries, onto, threshold=args.threshold)
    if args.out:
        store.write_code_table(args.out, table)
    else:
        surviving = table.surviving()
        print("bilingual_code\tmono_code\tcount\tsurviving")
        for (bi, mono), count in sorted(table.counts.items(),
                                        key=lambda kv: (-kv[1], kv[0])):
            keep = "yes" if (bi, mono) in surviving else "no"
            print(f"{bi}\t{mono}\t{count}\t{keep}")
    return 0


def cmd_pipeline(args) -> int:
    config = load_config(args.config)
    result = run_pipeline(config, args.out)
    print(f"run {result.run_id}")
    print(f"hierarchy matches: {len(result.hierarchy)}")
    print(f"definition matches: {len(result.definition)}")
    if result.bilingual is not None:
        print(f"bilingual mappings: {len(result.bilingual.mappings)}")
    print(f"inconsistencies: {len(result.inconsistencies)}")
    return 0


def cmd_inconsistencies(args) -> int:
    left, right = _load_pair(args)
    matches = store.read_matches(args.matches, left, right)
    findings = detect_inconsistencies(left, right, matches)
    lines = [finding.render() for finding in findings]
    if args.out:
        Path(args.out).write_text("".join(line + "\n" for line in lines),
                                  encoding="utf-8")
    for line in lines:
        print(line)
    print(f"{len(findings)} inconsistencies", file=sys.stderr)
    return 0


def cmd_export(args) -> int:
    left, right = _load_pair(args)
    matches = store.read_matches(args.matches, left, right)
    merged = export_ontology(left, right, matches, args.out)
    print(f"export: {len(merged)} concepts -> {args.out}", file=sys.stderr)
    return 0


def cmd_verify_serve(args) -> int:
    bench = Workbench(args.state)
    if args.matches:
        if not (args.left and args.right):
            raise SystemExit(USAGE_ERROR)
        left, right = _load_pair(args)
        matches = store.read_matches(args.matches, left, right)
        if args.queue not in bench.queue_ids():
            bench.create_queue(args.queue, items_from_matches(matches, left, right))
            print(f"queue {args.queue!r}: {len(matches)} items", file=sys.stderr)

    from .service import create_app

    app = create_app(workbench=bench, ui_dir=args.ui)
    bind = args.bind or os.environ.get(BIND_ENV, DEFAULT_BIND)
    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise SystemExit(USAGE_ERROR)

    import uvicorn

    uvicorn.run(app, host=host, port=int(port_text), log_level="info")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="lexmerge",
                     description="semi-automatic alignment of lexical resources")
    parser.add_argument(
        "--version", action="version",
        version=f"lexmerge {__version__} (schema {store.SCHEMA_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="validate resource files")
    p.add_argument("paths", nargs="+", metavar="PATH")
    p.add_argument("--bilingual", action="store_true",
                   help="treat inputs as bilingual dictionaries")
    p.add_argument("--name", help="resource name override (monolingual only)")
    p.set_defaults(func=cmd_ingest_check)

    p = sub.add_parser("defmatch", help="run Definition Match")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--floor", type=float, default=DEFAULT_FLOOR,
                   help=f"confidence floor (default {DEFAULT_FLOOR})")
    p.add_argument("--word", action="append", metavar="WORD",
                   help="restrict to this headword (repeatable)")
    p.add_argument("--out", help="output match file (default: stdout)")
    p.set_defaults(func=cmd_defmatch)

    p = sub.add_parser("hiermatch", help="run Hierarchy Match")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--seeds", help="seed match file")
    p.add_argument("--left-relation", choices=("hypernym", "genus"))
    p.add_argument("--right-relation", choices=("hypernym", "genus"))
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_hiermatch)

    p = sub.add_parser("bimatch", help="run Bilingual Match")
    p.add_argument("--dict", required=True, help="bilingual dictionary")
    p.add_argument("--onto", required=True, help="target ontology resource")
    p.add_argument("--threshold", type=int, default=CODE_THRESHOLD)
    p.add_argument("--penalty", type=float, default=PENALTY)
    p.add_argument("--max-links", type=int, default=MAX_LINKS)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_bimatch)

    p = sub.add_parser("fieldtable", help="build the field-code table only")
    p.add_argument("--dict", required=True)
    p.add_argument("--onto", required=True)
    p.add_argument("--threshold", type=int, default=CODE_THRESHOLD)
    p.add_argument("--out", help="output TSV (default: stdout)")
    p.set_defaults(func=cmd_fieldtable)

    p = sub.add_parser("pipeline", help="run the full merging pipeline")
    p.add_argument("--config", required=True, help="merge TOML config")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("inconsistencies", help="check a merge for conflicts")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--matches", required=True)
    p.add_argument("--out", help="also write findings to this file")
    p.set_defaults(func=cmd_inconsistencies)

    p = sub.add_parser("export", help="export the merged ontology")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--matches", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("verify-serve", help="serve the verification API and UI")
    p.add_argument("--state", default="verify-state",
                   help="state directory (default: verify-state)")
    p.add_argument("--queue", default="default",
                   help="queue id for preloaded matches")
    p.add_argument("--matches", help="match file to preload as a queue")
    p.add_argument("--left", help="left resource (for display glosses)")
    p.add_argument("--right", help="right resource (for display glosses)")
    p.add_argument("--ui", default="frontend/dist",
                   help="static UI directory (default: frontend/dist)")
    p.add_argument("--bind", help=f"host:port (default ${BIND_ENV} "
                                  f"or {DEFAULT_BIND})")
    p.set_defaults(func=cmd_verify_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LexmergeError as exc:
        print(f"lexmerge: error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except OSError as exc:
        print(f"lexmerge: error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
