from pathlib import Path

import pytest
from click.testing import CliRunner

from settings import get_settings
from spaces import DomainContext

ROOT = Path(__file__).resolve().parent.parent
TEST_CASES = ROOT / "test_cases"


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("SMOOTHCALC_LOG_LEVEL", "SMOOTHCALC_EMBED_SEARCH_DEPTH", "SMOOTHCALC_DECIMAL_DIGITS",
                 "SMOOTHCALC_ORACLE_GRID_N", "SMOOTHCALC_ORACLE_ALPHA_STEP", "SMOOTHCALC_ORACLE_ALPHA_CAP"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def ctx2():
    return DomainContext(d=2)


@pytest.fixture
def ctx3():
    return DomainContext(d=3)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def profiles():
    return TEST_CASES / "profiles"


@pytest.fixture
def golden():
    return TEST_CASES / "golden"


@pytest.fixture
def shipped_schema():
    return TEST_CASES / "schema" / "profile_report.schema.json"
