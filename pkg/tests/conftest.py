import random
from pathlib import Path

import pytest

from service import AnalysisService

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def graph_path():
    def resolve(name: str) -> Path:
        return FIXTURES / "graphs" / f"{name}.json"
    return resolve


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def service() -> AnalysisService:
    return AnalysisService(fixtures_dir=str(FIXTURES))
