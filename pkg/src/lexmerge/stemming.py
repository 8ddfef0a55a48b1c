"""Suffix-stripping stemmer and content-word filtering.

The stemmer is deliberately small: an ordered table of suffix rewrites
shipped as data (so it can be swapped without code changes), applied to a
fixpoint.  It only has to make inflected forms collide ("bats" and "bat"),
not produce linguistically proper stems.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError

# Letter runs, Latin-1 accents included; hyphens and apostrophes split.
_TOKEN_RE = re.compile(r"[A-Za-zÀ-ÖØ-öø-ÿ]+")

MIN_STEM_LENGTH = 3


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens of a text; punctuation and digits dropped."""
    return [t.lower() for t in _TOKEN_RE.findall(text)]


@dataclass(frozen=True)
class StemRule:
    suffix: str
    replacement: str


def parse_rules(lines: Iterable[str], origin: str = "<rules>") -> list[StemRule]:
    """Parse "suffix -> replacement" lines; '#' starts a comment."""
    rules = []
    for no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ConfigError(f"{origin}:{no}: expected 'suffix -> replacement'")
        suffix, _, replacement = (p.strip() for p in line.partition("->"))
        if not suffix:
            raise ConfigError(f"{origin}:{no}: empty suffix")
        if len(replacement) > len(suffix):
            raise ConfigError(
                f"{origin}:{no}: replacement {replacement!r} longer than suffix")
        if len(replacement) == len(suffix) and replacement != suffix:
            raise ConfigError(
                f"{origin}:{no}: same-length rewrite must be an identity stop rule")
        rules.append(StemRule(suffix, replacement))
    return rules


def parse_stopwords(lines: Iterable[str]) -> frozenset[str]:
    words = set()
    for raw in lines:
        word = raw.split("#", 1)[0].strip().lower()
        if word:
            words.add(word)
    return frozenset(words)


class Stemmer:
    """Ordered suffix rewriting with a stopword filter.

    One round applies the first rule whose suffix matches and whose result
    keeps ``MIN_STEM_LENGTH`` characters; rounds repeat until nothing
    changes, which makes ``stem`` idempotent by construction.
    """

    def __init__(self, rules: Sequence[StemRule], stopwords: Iterable[str]):
        self.rules = list(rules)
        self.stopwords = frozenset(w.lower() for w in stopwords)

    @classmethod
    def default(cls) -> Stemmer:
        data = resources.files("lexmerge.data")
        rules = parse_rules(
            (data / "stem_rules.txt").read_text(encoding="utf-8").splitlines(),
            origin="stem_rules.txt",
        )
        stops = parse_stopwords(
            (data / "stopwords.txt").read_text(encoding="utf-8").splitlines())
        return cls(rules, stops)

    @classmethod
    def from_files(cls, rules_path: str | Path, stopwords_path: str | Path) -> Stemmer:
        rules = parse_rules(
            Path(rules_path).read_text(encoding="utf-8").splitlines(),
            origin=str(rules_path),
        )
        stops = parse_stopwords(
            Path(stopwords_path).read_text(encoding="utf-8").splitlines())
        return cls(rules, stops)

    def _apply_once(self, word: str) -> str:
        for rule in self.rules:
            if word.endswith(rule.suffix):
                candidate = word[: len(word) - len(rule.suffix)] + rule.replacement
                if len(candidate) >= MIN_STEM_LENGTH:
                    return candidate
        return word

    def stem(self, word: str) -> str:
        current = word.lower()
        while True:
            rewritten = self._apply_once(current)
            if rewritten == current:
                return current
            current = rewritten

    def is_stopword(self, word: str) -> bool:
        return word.lower() in self.stopwords


def content_words(tokens: Iterable[str], stemmer: Stemmer) -> set[str]:
    """Stems of the open-class content words among the tokens.

    Stopwords and one-letter tokens are dropped before stemming; a stem
    that lands on a stopword is dropped as well, so the result never
    contains one.
    """
    stems = set()
    for token in tokens:
        word = token.lower()
        if len(word) < 2 or stemmer.is_stopword(word):
            continue
        stem = stemmer.stem(word)
        if len(stem) < 2 or stemmer.is_stopword(stem):
            continue
        stems.add(stem)
    return stems
