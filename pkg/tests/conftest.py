"""
Pytest configuration and fixtures for ribbon-invariants tests.
"""

import random
from pathlib import Path
from typing import Callable, Optional, Sequence

import pytest

from ribbon.cache import cache_manager
from ribbon.groups import AbelianGroup
from ribbon.linalg import IntMatrix
from ribbon.models import load_document, to_domain
from ribbon.seifert import SeifertBundle

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    """Directory of curated example documents."""
    return CORPUS_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def load_corpus() -> Callable[[str], object]:
    """Load a curated document by file stem and convert it."""

    def load(stem: str):
        return to_domain(load_document(CORPUS_DIR / f"{stem}.json"))

    return load


@pytest.fixture
def make_bundle() -> Callable[..., SeifertBundle]:
    """Build a SeifertBundle from plain lists."""

    def make(
        h1_v: AbelianGroup,
        h1_y: AbelianGroup,
        pos: Sequence[Sequence[int]],
        neg: Sequence[Sequence[int]],
        linking: Sequence[Sequence[int]],
        name: str = "test",
        iota: Optional[Sequence[Sequence[int]]] = None,
    ) -> SeifertBundle:
        return SeifertBundle(
            name=name,
            h1_v=h1_v,
            h1_y=h1_y,
            pushoff_pos=IntMatrix.from_rows(pos, cols=h1_v.ngens),
            pushoff_neg=IntMatrix.from_rows(neg, cols=h1_v.ngens),
            linking_matrix=IntMatrix.from_rows(linking, cols=len(linking)),
            iota=None if iota is None else IntMatrix.from_rows(iota),
        )

    return make


@pytest.fixture
def trivial_bundle() -> SeifertBundle:
    return SeifertBundle.trivial()


@pytest.fixture
def z3_bundle(load_corpus) -> SeifertBundle:
    """H1 = Z/3 on both sides, A = 1, B = -1, linking matrix (3)."""
    return load_corpus("z3-example")


@pytest.fixture
def z5_bundle(load_corpus) -> SeifertBundle:
    return load_corpus("z5-example")


@pytest.fixture
def rng() -> random.Random:
    """Seeded generator for randomized property checks."""
    return random.Random(20240611)


@pytest.fixture(autouse=True)
def clear_caches():
    """Clear all caches before each test."""
    cache_manager.clear_all()


# Custom markers
def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "slow: mark test as slow running")
    config.addinivalue_line("markers", "integration: mark test as integration test")
    config.addinivalue_line("markers", "performance: mark test as performance-related")
    config.addinivalue_line("markers", "unit: mark test as unit test")


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers based on test names."""
    for item in items:
        if "integration" in str(item.fspath) or "acceptance" in str(item.fspath):
            item.add_marker(pytest.mark.integration)
        elif "cache" in str(item.fspath):
            item.add_marker(pytest.mark.performance)
        else:
            item.add_marker(pytest.mark.unit)


@pytest.fixture(scope="session", autouse=True)
def setup_test_environment():
    """Set up test environment."""
    import logging

    logging.getLogger("ribbon").setLevel(logging.WARNING)

    yield

    cache_manager.clear_all()
