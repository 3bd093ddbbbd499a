import pathlib

import pytest

from drskit import parse_corpus

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def negated_fear_text():
    return (FIXTURES / "negated_fear.clf").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def negated_fear(negated_fear_text):
    return parse_corpus(negated_fear_text)[0]


@pytest.fixture(scope="session")
def piano_duet_text():
    return (FIXTURES / "piano_duet.clf").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def piano_duet(piano_duet_text):
    return parse_corpus(piano_duet_text)[0]
