from __future__ import annotations

from pathlib import Path

import pytest

from lexmerge.ingest import parse_bilingual, parse_monolingual
from lexmerge.stemming import Stemmer

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def stemmer() -> Stemmer:
    return Stemmer.default()


@pytest.fixture(scope="session")
def defmatch_pair():
    left = parse_monolingual(FIXTURES / "defmatch" / "ldoce-fixture.jsonl")
    right = parse_monolingual(FIXTURES / "defmatch" / "wn-fixture.jsonl")
    return left, right


@pytest.fixture(scope="session")
def hiermatch_pair():
    left = parse_monolingual(FIXTURES / "hiermatch" / "ldoce-fixture.jsonl")
    right = parse_monolingual(FIXTURES / "hiermatch" / "wn-fixture.jsonl")
    return left, right


@pytest.fixture(scope="session")
def inconsistency_pair():
    left = parse_monolingual(FIXTURES / "inconsistency" / "ldoce-fixture.jsonl")
    right = parse_monolingual(FIXTURES / "inconsistency" / "wn-fixture.jsonl")
    return left, right


@pytest.fixture(scope="session")
def bimatch_fixture():
    onto = parse_monolingual(FIXTURES / "bimatch" / "onto-fixture.jsonl")
    entries = parse_bilingual(FIXTURES / "bimatch" / "collins-fixture.jsonl")
    return onto, entries
