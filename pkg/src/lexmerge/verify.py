"""Human verification workflow: queues, verdicts, stats, seed export.

A queue is an ordered list of proposals (matches or bilingual mappings),
each shown as the proposed target on top of a ranked list of
alternatives.  Verdicts go to an append-only log; the latest verdict per
item wins, and replaying the log after a restart reproduces the state
exactly.  Items being looked at are leased so two verifiers do not waste
effort on the same proposal.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .bimatch import Mapping
from .errors import (
    DuplicateQueueError,
    LexmergeError,
    ParseError,
    UnknownItemError,
)
from .model import Match, Resource, SenseId

VERDICTS = ("accept", "reject", "correct")
_STATUS_OF_VERDICT = {"accept": "accepted", "reject": "rejected",
                      "correct": "corrected"}
LEASE_SECONDS = 600.0

_QUEUE_ID_RE = re.compile(r"^[a-z0-9][a-z0-9-]*$")


@dataclass
class QueueItem:
    item_id: str
    queue_id: str
    index: int
    kind: str          # "match" or "mapping"
    payload: dict
    status: str = "pending"
    verdict: dict | None = None

    def alternatives(self) -> list[dict]:
        return list(self.payload.get("alternatives", ()))


@dataclass
class Queue:
    queue_id: str
    items: list[QueueItem] = field(default_factory=list)

    def pending(self) -> list[QueueItem]:
        return [item for item in self.items if item.status == "pending"]


def _gloss(resource: Resource, sid: SenseId) -> str:
    return resource.sense(sid).display_gloss() if sid in resource else ""


def items_from_matches(matches: Iterable[Match], left: Resource,
                       right: Resource) -> list[dict]:
    """Display payloads for match proposals, queue order preserved.

    The ranked alternative list always starts with the proposal itself,
    so a verifier keying "1" and a verifier accepting see the same thing.
    """
    payloads = []
    for match in matches:
        ranked = list(match.alternatives)
        if not ranked or ranked[0][0] != match.right:
            ranked = [(match.right, match.confidence)] + [
                (sid, conf) for sid, conf in ranked if sid != match.right]
        payloads.append({
            "kind": "match",
            "left": str(match.left),
            "right": str(match.right),
            "confidence": round(match.confidence, 6),
            "phase": match.phase,
            "left_display": left.display(match.left),
            "right_display": right.display(match.right),
            "left_gloss": _gloss(left, match.left),
            "right_gloss": _gloss(right, match.right),
            "alternatives": [
                {
                    "id": str(sid),
                    "confidence": round(conf, 6),
                    "display": right.display(sid),
                    "gloss": _gloss(right, sid),
                }
                for sid, conf in ranked
            ],
        })
    return payloads


def items_from_mappings(mappings: Iterable[Mapping],
                        onto: Resource) -> list[dict]:
    payloads = []
    for mapping in mappings:
        alternatives = [{
            "id": mapping.concept,
            "confidence": round(mapping.confidence, 6),
            "display": mapping.concept,
            "gloss": " / ".join(_gloss(onto, sid) for sid in mapping.senses),
        }]
        for label, conf in mapping.alternatives:
            alternatives.append({
                "id": label,
                "confidence": round(conf, 6),
                "display": label,
                "gloss": "",
            })
        payloads.append({
            "kind": "mapping",
            "headword": mapping.headword,
            "pos": mapping.pos,
            "group": mapping.group_index,
            "translations": list(mapping.translations),
            "field_code": mapping.field_code,
            "stage": mapping.kind,
            "concept": mapping.concept,
            "confidence": round(mapping.confidence, 6),
            "alternatives": alternatives,
        })
    return payloads


class Workbench:
    """All verification state, backed by one directory per queue.

    ``{state_dir}/{queue}/items.jsonl`` freezes the queue contents;
    ``{state_dir}/{queue}/verdicts.jsonl`` is the append-only judgement
    log.  Leases are deliberately memory-only: after a crash they simply
    expire.
    """

    def __init__(self, state_dir: str | Path,
                 clock: Callable[[], float] = time.time,
                 lease_seconds: float = LEASE_SECONDS):
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self._clock = clock
        self._lease_seconds = lease_seconds
        self._queues: dict[str, Queue] = {}
        self._leases: dict[str, tuple[str, float]] = {}  # item -> (verifier, expiry)
        self._keys: dict[tuple[str, str], dict] = {}     # (item, key) -> ack
        for items_file in sorted(self.state_dir.glob("*/items.jsonl")):
            self._load_queue(items_file.parent.name)

    # -- loading -------------------------------------------------------

    def _queue_dir(self, queue_id: str) -> Path:
        return self.state_dir / queue_id

    def _load_queue(self, queue_id: str) -> None:
        queue = Queue(queue_id)
        items_file = self._queue_dir(queue_id) / "items.jsonl"
        for index, raw in enumerate(
                items_file.read_text(encoding="utf-8").splitlines()):
            if not raw.strip():
                continue
            try:
                payload = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}",
                                 path=str(items_file), line_no=index + 1) from exc
            queue.items.append(QueueItem(
                item_id=f"{queue_id}:{index:05d}", queue_id=queue_id,
                index=index, kind=payload.get("kind", "match"),
                payload=payload))
        self._queues[queue_id] = queue
        verdict_file = self._queue_dir(queue_id) / "verdicts.jsonl"
        if verdict_file.exists():
            for raw in verdict_file.read_text(encoding="utf-8").splitlines():
                if raw.strip():
                    self._apply_verdict(json.loads(raw))

    def _apply_verdict(self, record: dict) -> None:
        item = self.item(record["item"])
        item.status = _STATUS_OF_VERDICT[record["verdict"]]
        item.verdict = record
        key = record.get("key")
        if key is not None:
            self._keys[(record["item"], key)] = record

    # -- queue management ----------------------------------------------

    def queue_ids(self) -> list[str]:
        return sorted(self._queues)

    def queue(self, queue_id: str) -> Queue:
        try:
            return self._queues[queue_id]
        except KeyError:
            raise UnknownItemError(f"no queue {queue_id!r}") from None

    def item(self, item_id: str) -> QueueItem:
        queue_id, _, index = item_id.rpartition(":")
        queue = self.queue(queue_id)
        try:
            return queue.items[int(index)]
        except (ValueError, IndexError):
            raise UnknownItemError(f"no item {item_id!r}") from None

    def create_queue(self, queue_id: str, payloads: Sequence[dict]) -> Queue:
        """Create and persist a queue; order of payloads is the priority."""
        if not _QUEUE_ID_RE.match(queue_id):
            raise LexmergeError(
                f"queue id must be lowercase [a-z0-9-]: {queue_id!r}")
        if queue_id in self._queues or self._queue_dir(queue_id).exists():
            raise DuplicateQueueError(f"queue {queue_id!r} already exists")
        if not payloads:
            raise LexmergeError("queue needs at least one item")
        directory = self._queue_dir(queue_id)
        directory.mkdir(parents=True)
        with (directory / "items.jsonl").open("w", encoding="utf-8") as handle:
            for payload in payloads:
                handle.write(json.dumps(payload, ensure_ascii=False) + "\n")
        self._load_queue(queue_id)
        return self._queues[queue_id]

    # -- the verification loop -----------------------------------------

    def _lease_active(self, item_id: str, verifier: str) -> bool:
        lease = self._leases.get(item_id)
        if lease is None:
            return False
        holder, expiry = lease
        if expiry <= self._clock():
            del self._leases[item_id]
            return False
        return holder != verifier

    def next_item(self, queue_id: str, verifier: str = "anonymous") -> QueueItem | None:
        """The highest-priority pending item not being judged by someone else.

        Calling again with the same verifier re-serves the same item and
        refreshes its lease.
        """
        for item in self.queue(queue_id).items:
            if item.status != "pending":
                continue
            if self._lease_active(item.item_id, verifier):
                continue
            self._leases[item.item_id] = (
                verifier, self._clock() + self._lease_seconds)
            return item
        return None

    def submit(self, item_id: str, verdict: str, corrected: str | None = None,
               verifier: str = "anonymous",
               idempotency_key: str | None = None) -> dict:
        """Record a verdict.  Later verdicts supersede; history is kept."""
        item = self.item(item_id)
        if verdict not in VERDICTS:
            raise LexmergeError(
                f"verdict must be one of {', '.join(VERDICTS)}: got {verdict!r}")
        if idempotency_key is not None:
            existing = self._keys.get((item_id, idempotency_key))
            if existing is not None:
                return {**existing, "replayed": True}
        if verdict == "correct":
            if corrected is None:
                raise LexmergeError("a correction needs the corrected target id")
            allowed = {alt["id"] for alt in item.alternatives()}
            if corrected not in allowed:
                raise LexmergeError(
                    f"corrected target {corrected!r} is not among the "
                    f"item's alternatives")
        elif corrected is not None:
            raise LexmergeError(f"verdict {verdict!r} does not take a correction")

        record = {
            "item": item_id,
            "verdict": verdict,
            "corrected": corrected,
            "verifier": verifier,
            "key": idempotency_key,
            "ts": self._clock(),
        }
        verdict_file = self._queue_dir(item.queue_id) / "verdicts.jsonl"
        with verdict_file.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
        self._apply_verdict(record)
        self._leases.pop(item_id, None)
        return record

    # -- reporting -----------------------------------------------------

    def stats(self, queue_id: str) -> dict:
        queue = self.queue(queue_id)
        counts = {"accepted": 0, "rejected": 0, "corrected": 0, "pending": 0}
        for item in queue.items:
            counts[item.status] += 1
        judged = counts["accepted"] + counts["rejected"] + counts["corrected"]
        pct_correct = (
            round(100.0 * (counts["accepted"] + counts["corrected"]) / judged, 2)
            if judged else None)
        return {
            "queue_id": queue_id,
            "total": len(queue.items),
            "judged": judged,
            "pct_correct": pct_correct,
            **counts,
        }

    def export_seeds(self, queue_id: str) -> list[dict]:
        """Accepted and corrected match items as seed lines for a next run."""
        seeds = []
        for item in self.queue(queue_id).items:
            if item.kind != "match":
                continue
            if item.status == "accepted":
                right = item.payload["right"]
            elif item.status == "corrected":
                right = item.verdict["corrected"] if item.verdict else None
            else:
                continue
            if right is None:
                continue
            seeds.append({
                "left": item.payload["left"],
                "right": right,
                "confidence": 1.0,
                "phase": "seed",
                "status": "accepted",
            })
        return seeds
