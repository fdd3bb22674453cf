"""
Shared test fixtures for the network-formation lab.

The test settings file (tests/config/settings.ini) is selected before the
application is imported, so every module sees small, fast defaults.
"""

import os

os.environ["NETLAB_CONFIG"] = os.path.join(os.path.dirname(__file__), "config", "settings.ini")

import pytest  # noqa: E402

from app import create_app  # noqa: E402
from app.models import Graph, Params  # noqa: E402


@pytest.fixture
def app():
    """Create Flask app for testing."""
    app = create_app()
    app.config["TESTING"] = True
    with app.app_context():
        yield app


@pytest.fixture
def client(app):
    """Create test client."""
    return app.test_client()


@pytest.fixture
def runner(app):
    """Create CLI runner for the simulation commands."""
    return app.test_cli_runner()


@pytest.fixture
def five_node_graph():
    """Five-node graph with degree vector (4, 3, 3, 2, 2); classified Near-Shared."""
    return Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (2, 4)])


@pytest.fixture
def tripartite_graph():
    """Ten-node complete tripartite graph with partitions {0,6,7,8}, {1,2,5}, {3,4,9}."""
    parts = [(0, 6, 7, 8), (1, 2, 5), (3, 4, 9)]
    edges = [
        (min(i, j), max(i, j))
        for a, left in enumerate(parts)
        for right in parts[a + 1 :]
        for i in left
        for j in right
    ]
    return Graph(10, edges)


@pytest.fixture
def params():
    """delta = 1/2, cost = 3/10: delta - c = 1/5, delta^2 = 1/4."""
    return Params("1/2", "3/10")
