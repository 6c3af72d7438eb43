import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rnmod import AtomicSpace, L0Scalar, RNElement

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# magnitudes below 1e-100 become exact zeros: squared norms of such vectors underflow
finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False).map(
    lambda v: v if abs(v) > 1e-100 else 0.0)


@st.composite
def spaces(draw, max_atoms=6, field=None):
    m = draw(st.integers(1, max_atoms))
    weights = draw(st.lists(st.floats(0.05, 1.0), min_size=m, max_size=m))
    probs = np.array(weights) / sum(weights)
    field = field or draw(st.sampled_from(["real", "complex"]))
    return AtomicSpace([f"a{i + 1}" for i in range(m)], probs, field, rtol=1e-9)


def _values(draw, space, n, zeros=True):
    elem = finite | st.just(0.0) if zeros else finite
    re = draw(st.lists(elem, min_size=n, max_size=n))
    if not space.is_complex:
        return np.array(re)
    im = draw(st.lists(elem, min_size=n, max_size=n))
    return np.array(re) + 1j * np.array(im)


@st.composite
def scalars(draw, space):
    return L0Scalar(space, _values(draw, space, len(space)))


@st.composite
def elements(draw, space, dim):
    return RNElement(space, _values(draw, space, len(space) * dim).reshape(len(space), dim))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
