import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from khtorsion.braid import BraidWord  # noqa: E402


def random_corpus(count=200, max_strands=5, max_length=10, seed=2024):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, max_strands)
        length = rng.randint(0, max_length)
        out.append(BraidWord(n, tuple(rng.choice((1, -1)) * rng.randint(1, n - 1)
                                      for _ in range(length))))
    return out


def small_corpus():
    """Diagrams with at most 8 crossings used by the heavier property checks."""
    return [w for w in random_corpus(count=60, max_length=8, seed=7) if len(w) <= 8]


@pytest.fixture(scope="session")
def corpus():
    return random_corpus()


KNOTS = {
    "unknot0": BraidWord(1, ()),
    "unknot1": BraidWord(2, (1,)),
    "unknot2": BraidWord(3, (1, 2)),
    "trefoil": BraidWord(2, (1, 1, 1)),
    "hopf": BraidWord(2, (1, 1)),
    "figure8": BraidWord(3, (1, -2, 1, -2)),
    "cinquefoil": BraidWord(2, (1,) * 5),
    "8_19": BraidWord(3, (1, 2) * 4),
}
