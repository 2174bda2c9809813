import pytest
from unittest.mock import MagicMock
from cachetools import TTLCache

from krsp_solver.bicameral.search import clear_aux_cache
from krsp_solver.config import KrspSettings
from krsp_solver.context import AppContext
from krsp_solver.graph import Edge, Instance, parse_instance

# s=0, a=1, b=2, c=3, t=4. Min-cost paths sabct + st have delay 5 > D;
# the optimum sabt + st costs 2 with delay 4.
FIG1_TEXT = """\
# s a b c t
5 7 2 4
0 1 0 0
1 2 0 0
2 3 0 5
3 4 0 0
2 4 2 4
1 4 9 0
0 4 0 0
"""

# Three parallel s-t edges; pairs cost/delay 3/4, 4/3 and 5/1.
PARALLEL_TEXT = """\
2 3 2 3
0 1 1 3
0 1 2 1
0 1 3 0
"""


@pytest.fixture(autouse=True)
def fresh_aux_cache():
    """Start every test with an empty aux LP cache."""
    clear_aux_cache()
    yield
    clear_aux_cache()


@pytest.fixture
def fig1_text():
    return FIG1_TEXT


@pytest.fixture
def fig1():
    """Instance where the phase-1 paths miss the delay bound by one."""
    return parse_instance(FIG1_TEXT)


@pytest.fixture
def parallel():
    """Three parallel edges, k=2, D=3."""
    return parse_instance(PARALLEL_TEXT)


@pytest.fixture
def single_path():
    """One s-t path; infeasible for k=2."""
    return Instance(
        n=3,
        edges=(
            Edge(id=0, tail=0, head=1, cost=1, delay=1),
            Edge(id=1, tail=1, head=2, cost=1, delay=1),
        ),
        t=2,
        k=2,
        D=10,
    )


@pytest.fixture
def mock_settings():
    """Settings with a small result cache."""
    return KrspSettings(result_cache_size=8, result_cache_ttl=30)


@pytest.fixture
def mock_cache():
    """Mock cache."""
    return TTLCache(maxsize=8, ttl=30)


@pytest.fixture
def mock_ctx(mock_settings, mock_cache):
    """Mock application context."""
    return AppContext(settings=mock_settings, cache=mock_cache)


@pytest.fixture
def mock_mcp_context(mock_ctx):
    """Mock MCP Context with lifespan_context."""
    ctx = MagicMock()
    ctx.request_context.lifespan_context = mock_ctx
    return ctx
