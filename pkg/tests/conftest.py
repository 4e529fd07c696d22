from pathlib import Path

import pytest

from synthlang.treebank import parse_conllu

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def table2_text() -> str:
    return (DATA_DIR / "table2.conllu").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def table2_sentence(table2_text):
    return parse_conllu(table2_text)[0]


@pytest.fixture(scope="session")
def challenge_items():
    from synthlang.challenge import generate_challenge

    return generate_challenge()
