import time

import pytest

from drgsplit.pipeline import RunConfig, run_verify
from drgsplit.tolerances import ToleranceProfile

# The standing verification corpus: three hypercubes, a ternary Hamming
# graph, a Johnson graph, and an even cycle.
CORPUS = (
    ("hypercube", (3,)),
    ("hypercube", (4,)),
    ("hypercube", (6,)),
    ("hamming", (3, 3)),
    ("johnson", (7, 3)),
    ("cycle", (8,)),
)


@pytest.fixture(scope="session")
def corpus_results():
    """Full verify pipeline on every corpus graph (seed 42), with wall-clock
    seconds per graph.  Computed once per test session."""
    out = {}
    for family, params in CORPUS:
        config = RunConfig(
            family=family, params=params, seed=42, tol=ToleranceProfile()
        )
        start = time.perf_counter()
        result = run_verify(config)
        out[(family, params)] = (result, time.perf_counter() - start)
    return out


@pytest.fixture(scope="session")
def q3(corpus_results):
    return corpus_results[("hypercube", (3,))][0]


@pytest.fixture(scope="session")
def q4(corpus_results):
    return corpus_results[("hypercube", (4,))][0]


@pytest.fixture(scope="session")
def q6(corpus_results):
    return corpus_results[("hypercube", (6,))][0]


@pytest.fixture(scope="session")
def h33(corpus_results):
    return corpus_results[("hamming", (3, 3))][0]


@pytest.fixture(scope="session")
def j73(corpus_results):
    return corpus_results[("johnson", (7, 3))][0]


@pytest.fixture(scope="session")
def c8(corpus_results):
    return corpus_results[("cycle", (8,))][0]


@pytest.fixture
def tol():
    return ToleranceProfile()
