import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fnet import FuzzyObject, Query, load_kb, sample_kb_path, simple_attribute


@pytest.fixture(scope="session")
def sample_path() -> Path:
    return sample_kb_path()


@pytest.fixture(scope="session")
def sample_kb(sample_path):
    return load_kb(sample_path)


@pytest.fixture()
def sample_query() -> Query:
    return Query(
        kind="objects",
        description=FuzzyObject(
            name="query",
            attributes=[simple_attribute("objects", {"the-signs": 0.9, "the-letters": 0.6})],
        ),
        label="sample-query",
    )
