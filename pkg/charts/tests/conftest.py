import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def fidelity_payload():
    return json.loads((FIXTURES / "fidelity.json").read_text())


@pytest.fixture(scope="session")
def privacy_payload():
    return json.loads((FIXTURES / "privacy.json").read_text())


@pytest.fixture(scope="session")
def tradeoff_payload():
    return json.loads((FIXTURES / "tradeoff.json").read_text())
