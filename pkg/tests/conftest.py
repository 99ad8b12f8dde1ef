import random

import pytest

from uniflab.loader import parse_problem


XOR_EXAMPLE = """\
theory acun
consts c1 c2 c3
vars x1 x2 x3
eq x1 + x2 + x3 + c1 + c2 = 0
eq x1 + x3 + c2 + c3 = 0
diseq x2 != 0
"""

COLORING_EXAMPLE = """\
theory acun
consts c1 c2 c3
vars y1 y2 y3 y4 z1 z2 z3 z4
asym c1 + c2 + c3 =v y1 + y3 + z1
asym c1 + c2 + c3 =v y1 + y2 + z2
asym c1 + c2 + c3 =v y2 + y3 + z3
asym c1 + c2 + c3 =v y3 + y4 + z4
"""

C5_EXAMPLE = """\
theory acunh
consts a
vars V W Y U
asym U =v V + Y
eq W = h(V)
asym Y =v h(W)
"""


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def xor_example():
    return parse_problem(XOR_EXAMPLE)


@pytest.fixture
def coloring_example():
    return parse_problem(COLORING_EXAMPLE)


@pytest.fixture
def c5_example():
    return parse_problem(C5_EXAMPLE)


@pytest.fixture
def problem():
    """Parse a problem from its file text."""
    return parse_problem
