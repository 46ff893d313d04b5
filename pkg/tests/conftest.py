from pathlib import Path

import pytest

from app.config import PACKS_DIR, PREFIX_CONFIG_FILE, VOCAB_FILE, load_prefix_table
from app.models.terms import PrefixTable
from app.services import ConsentService, PackService, ReasonerService, VocabService, parse_facts, parse_rules

REPO_ROOT = Path(__file__).parent.parent


@pytest.fixture(scope="session")
def prefixes() -> PrefixTable:
    return load_prefix_table(PREFIX_CONFIG_FILE)


@pytest.fixture
def reasoner(prefixes) -> ReasonerService:
    return ReasonerService(prefixes=prefixes)


@pytest.fixture
def packs(prefixes, reasoner) -> PackService:
    return PackService(PACKS_DIR, prefixes, reasoner)


@pytest.fixture
def consent(prefixes, reasoner) -> ConsentService:
    return ConsentService(prefixes, reasoner)


@pytest.fixture(scope="session")
def vocab(prefixes) -> VocabService:
    return VocabService(VOCAB_FILE, prefixes)


@pytest.fixture
def facts(prefixes):
    """Parse ``.swf`` text with the preloaded prefixes."""
    return lambda text: parse_facts(text, prefixes)


@pytest.fixture
def rules(prefixes):
    return lambda text: parse_rules(text, prefixes)
