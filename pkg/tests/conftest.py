import pytest

from helpers import make_grouped

SIX_POINT_VALUES = [[0.0], [0.1], [10.0], [10.1], [0.05], [9.95]]
SIX_POINT_GROUPS = ["A", "A", "A", "A", "B", "B"]


@pytest.fixture
def six_point():
    """Two groups on a line whose two-level optimum is known by enumeration."""
    return make_grouped(SIX_POINT_VALUES, SIX_POINT_GROUPS)
