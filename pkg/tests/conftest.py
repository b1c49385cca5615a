import pathlib
import random

import pytest

from perihom.field import Field
from perihom.generator import random_periodic_graph
from perihom.io import load_periodic
from perihom.monodromy import build_monodromy
from perihom.periodic import build_window, normalize

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"

FIELDS = (Field("Fp", 2), Field("Fp", 5), Field("Q"))


def corpus_path(name: str) -> str:
    return str(CORPUS / name)


@pytest.fixture(scope="session")
def running():
    return normalize(load_periodic(corpus_path("running.json")))


@pytest.fixture(scope="session")
def running_ms(running):
    return build_monodromy(build_window(running))


@pytest.fixture(scope="session")
def running_filtered():
    return normalize(load_periodic(corpus_path("running_filtered.json")))


@pytest.fixture(scope="session")
def tube():
    return normalize(load_periodic(corpus_path("tube.json")))


@pytest.fixture(scope="session")
def line():
    return normalize(load_periodic(corpus_path("periodic_line.json")))


@pytest.fixture(scope="session")
def random_corpus():
    """Seeded periodic graphs over F2/F5/Q with their monodromy sets."""
    rng = random.Random(20260823)
    out = []
    for k in range(108):
        p = random_periodic_graph(rng, FIELDS[k % 3])
        np_ = normalize(p)
        out.append((k, np_, build_monodromy(build_window(np_))))
    return out
