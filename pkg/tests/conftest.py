import pytest


@pytest.fixture(autouse=True, scope="session")
def _private_cache(tmp_path_factory):
    """Keep the class-group disk cache inside the test session."""
    mp = pytest.MonkeyPatch()
    mp.setenv("CHATELET_CACHE_DIR", str(tmp_path_factory.mktemp("qncg")))
    yield
    mp.undo()
