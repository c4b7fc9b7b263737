import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from relcurr.boundary import build_system  # noqa: E402
from relcurr.stallings import from_generators  # noqa: E402
from relcurr.words import parse_word  # noqa: E402


def W(text):
    return parse_word(text)


def graph(*gens):
    return from_generators([parse_word(g) for g in gens])


@pytest.fixture(scope="session")
def sys_a():
    """{<a>} in F_2."""
    return build_system([graph("a")], 2)


@pytest.fixture(scope="session")
def sys_ab():
    """{<a>, <b>} in F_2."""
    return build_system([graph("a"), graph("b")], 2)


@pytest.fixture(scope="session")
def sys_diag():
    """{<ab>, <aB>} in F_2, the system with L = 1."""
    return build_system([graph("ab"), graph("aB")], 2)
