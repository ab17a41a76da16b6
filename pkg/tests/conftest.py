import pathlib

import pytest

from xmlkw.dag_builder import build_idcluster, compress
from xmlkw.doc_model import parse_document
from xmlkw.tree_index import build_tree_index

DATA_DIR = pathlib.Path(__file__).parent / "data"
FIXTURE_XML = DATA_DIR / "fixture.xml"

# The worked-example query used throughout the fixture tests.
QUERY = ["USA", "English"]


@pytest.fixture(scope="session")
def fixture_doc():
    return parse_document(FIXTURE_XML.read_bytes())


@pytest.fixture(scope="session")
def fixture_index(fixture_doc):
    return build_tree_index(fixture_doc)


@pytest.fixture(scope="session")
def fixture_dag(fixture_doc):
    return compress(fixture_doc)


@pytest.fixture(scope="session")
def fixture_cluster(fixture_dag):
    return build_idcluster(fixture_dag)
