import pytest

from chefmind.analyzer import load_lexicon, load_scenario_rules
from chefmind.corpus import load_corpus
from chefmind.evaluation import load_queries
from chefmind.pipeline import Stores
from chefmind.service import ServiceConfig
from chefmind.vectors import HashEmbedder

from fixture_corpus import write_fixture_files


@pytest.fixture(scope="session")
def fixture_paths(tmp_path_factory):
    return write_fixture_files(tmp_path_factory.mktemp("fixture-corpus"))


@pytest.fixture(scope="session")
def fixture_corpus(fixture_paths):
    return load_corpus(fixture_paths["recipes"], aliases_path=fixture_paths["aliases"])


@pytest.fixture(scope="session")
def fixture_lexicon(fixture_paths):
    return load_lexicon(fixture_paths["lexicon"])


@pytest.fixture(scope="session")
def fixture_rules(fixture_paths):
    return load_scenario_rules(fixture_paths["rules"])


@pytest.fixture(scope="session")
def embedder():
    return HashEmbedder(768)


@pytest.fixture(scope="session")
def fixture_stores(fixture_corpus, embedder, fixture_lexicon, fixture_rules):
    return Stores.build(fixture_corpus, embedder, fixture_lexicon, fixture_rules)


# The packaged corpus powers the acceptance suite and the service tests.
# Built once; everything in it is immutable, so sharing is safe.


@pytest.fixture(scope="session")
def shipped_config():
    return ServiceConfig().validated()


@pytest.fixture(scope="session")
def shipped_stores(shipped_config):
    return shipped_config.build_stores()


@pytest.fixture(scope="session")
def shipped_queries(shipped_config):
    return load_queries(shipped_config.queries_path)
