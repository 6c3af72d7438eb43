import numpy as np
import pytest

from rnmod import (DYADIC, AtomicSpace, DomainError, FiniteSupportElement, NotInModule,
                   RNElement, Tail, cc_norm, concatenate, counterexample_check, norm,
                   truncate_to_tolerance, truncation_level)
from rnmod.concatenation import LazyL0

S2 = AtomicSpace.uniform(2)


def test_finite_gluing():
    x = RNElement(S2, [[1, 2], [3, 4]])
    y = RNElement(S2, [[5, 6], [7, 8]])
    glued = concatenate([S2.atomset(["a1"]), S2.atomset(["a2"])], [x, y])
    assert glued == RNElement(S2, [[1, 2], [7, 8]])
    assert cc_norm([S2.atomset(["a1"]), S2.atomset(["a2"])], [x, y]) == norm(glued)


def test_finite_gluing_needs_a_partition():
    x = RNElement(S2, [[1, 2], [3, 4]])
    with pytest.raises(DomainError):
        concatenate([S2.atomset(["a1"]), S2.atomset(["a1"])], [x, x])
    with pytest.raises(DomainError):
        concatenate([S2.atomset(["a1"])], [x])


def test_gluing_all_indicators_leaves_the_module():
    out = concatenate([], [], Tail(0, (1.0,)))
    assert isinstance(out, NotInModule) and not out
    assert out.witness == tuple(range(10))
    assert out.tag == "constant-tail"
    assert all(out.glued[n] == 1 for n in (0, 17, 10**6))


def test_gluing_finitely_many_indicators():
    parts = [{n} for n in range(6)]
    elems = [FiniteSupportElement.indicator([n]) for n in range(6)]
    out = concatenate(parts, elems, Tail(6))
    assert out == FiniteSupportElement.indicator(range(6))
    assert out.support == frozenset(range(6))


def test_block_tail_stays_in_module():
    block = FiniteSupportElement({7: 2.0, 40: -1.0})
    out = concatenate([{0}], [FiniteSupportElement({0: 3.0})], Tail(1, block=block))
    assert out == FiniteSupportElement({0: 3.0, 40: -1.0, 7: 2.0})


def test_polynomial_tail():
    out = concatenate([{0}, {1}], [FiniteSupportElement()] * 2, Tail(2, (0.0, 1.0)))
    assert out.tag == "polynomial-tail"
    assert out.glued[5] == 5


def test_cc_norm():
    n = cc_norm([], [], Tail(0, (1.0,)))
    assert list(n.at(range(5))) == [1, 1, 1, 1, 1]
    n = cc_norm([], [], Tail(0, (0.0, -1.0)))
    assert n[7] == 7 and n[1000] == 1000


def test_truncation_level():
    assert truncation_level(0.1) == 3
    assert truncation_level(0.5) == 0
    for lam in np.geomspace(1e-9, 0.99, 200):
        N = truncation_level(lam)
        assert DYADIC.tail_measure(N) <= lam
        assert N == 0 or DYADIC.tail_measure(N - 1) > lam
    with pytest.raises(DomainError):
        truncation_level(1.5)


def test_truncate_to_tolerance():
    x = truncate_to_tolerance(LazyL0(lambda n: 1.0), 0.5, 0.1)
    assert x == FiniteSupportElement.indicator(range(4))
    small = FiniteSupportElement({1: 2.0})
    assert truncate_to_tolerance(small, 0.5, 0.1) is small


def test_truncation_spaces_are_probability_spaces():
    for N in range(0, 25):
        space = DYADIC.truncation(N)
        assert len(space) == N + 1
        assert space.probs.sum() == pytest.approx(1, abs=1e-15)


def test_counterexample_report():
    r = counterexample_check()
    assert r.passed
    assert r.condition_holds == r.condition_samples == 1000
    assert all(v == 1 for v in r.residuals.values())
    assert isinstance(r.glued_target, NotInModule)
    assert set(r.truncations) == set(range(1, 21)) and all(r.truncations.values())
