import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from probcore.graph import parse_edge_list

# hand-worked six-vertex example used throughout: a path 0-1 into a
# 4-cycle {1,2,3,4} with a pendant 5; at eta=0.2 the cycle is the
# maximum core with core number 2 and density 1/3
EXAMPLE_EDGES = """\
0 1 0.3
1 2 0.4
1 3 0.6
2 4 0.6
3 4 0.4
4 5 0.5
"""

EXAMPLE_CORES_ETA02 = {"0": 1, "1": 2, "2": 2, "3": 2, "4": 2, "5": 1}


@pytest.fixture
def example_graph():
    return parse_edge_list(EXAMPLE_EDGES)


@pytest.fixture
def example_text():
    return EXAMPLE_EDGES
