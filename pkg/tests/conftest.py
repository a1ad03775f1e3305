import numpy as np
import pytest

from qdmae.es import RankedBatch, make_es

ES_NAMES = ["cma-es", "lm-ma-es", "sep-cma-es", "openai-es"]


def sphere_objective(center):
    center = np.asarray(center, dtype=float)

    def f(x):
        return -np.sum((x - center) ** 2, axis=1)

    return f


def generation(es, f, rng):
    x = es.ask(rng)
    values = f(x)
    batch = RankedBatch(x, values, values)
    es.tell(batch)
    return x, values


@pytest.fixture(params=ES_NAMES)
def es_name(request):
    return request.param


@pytest.fixture
def fresh_es(es_name):
    def build(n=6, lam=8, sigma0=0.3, mean=None):
        mean = np.zeros(n) if mean is None else mean
        return make_es(es_name, mean, sigma0, lam)

    return build


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
