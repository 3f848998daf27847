"""Shared fixture sets written once per test session."""
import pytest

from scoot.dataset.fixtures import make_fixture_set


@pytest.fixture(scope="session")
def fixture_set(tmp_path_factory):
    """The 20-sketch, 128x128 benchmark set: (ranked manifest, triplet manifest)."""
    return make_fixture_set(tmp_path_factory.mktemp("fixtures"), count=20, size=(128, 128), seed=0)


@pytest.fixture(scope="session")
def small_fixture_set(tmp_path_factory):
    """A quick 4-sketch set for command line plumbing."""
    return make_fixture_set(tmp_path_factory.mktemp("small"), count=4, size=(48, 48), seed=1)
