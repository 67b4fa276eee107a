import pathlib

import pytest

import latlog

CORPUS = pathlib.Path(latlog.__file__).parent / "corpus"
GOLDEN = pathlib.Path(__file__).parent / "golden"

CORPUS_FILES = sorted(p.name for p in CORPUS.glob("*.pl"))


def corpus_text(name):
    return (CORPUS / name).read_text(encoding="utf-8")


def load(name):
    return latlog.parse_program(corpus_text(name))


@pytest.fixture(scope="session")
def programs():
    """Every corpus program, parsed once."""
    return {name: load(name) for name in CORPUS_FILES}
