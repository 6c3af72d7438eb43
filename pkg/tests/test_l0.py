import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rnmod import (AtomicSpace, AtomSet, DomainError, L0Scalar, bracket_gt, gt_on, indicator, leq,
                   pseudo_inverse, sup)

from conftest import scalars, spaces

S3 = AtomicSpace.uniform(3)
S2 = AtomicSpace.uniform(2)


def test_space_validation():
    with pytest.raises(DomainError):
        AtomicSpace(["a"], [0.5])
    with pytest.raises(DomainError):
        AtomicSpace(["a", "b"], [1.0, 0.0])
    with pytest.raises(DomainError):
        AtomicSpace(["a", "a"], [0.5, 0.5])
    with pytest.raises(DomainError):
        AtomicSpace([], [])
    with pytest.raises(DomainError):
        AtomicSpace(["a"], [1.0], field="quaternion")


def test_mixing_spaces_is_an_error():
    with pytest.raises(DomainError):
        S2.one() + AtomicSpace.uniform(2, prefix="b").one()


@pytest.mark.parametrize("atoms, expected", [
    (["a1"], [1, 0, 0]),
    ([], [0, 0, 0]),
    (["a1", "a2", "a3"], [1, 1, 1]),
])
def test_indicator(atoms, expected):
    assert indicator(S3, atoms) == S3.scalar(expected)


def test_pseudo_inverse_examples():
    assert pseudo_inverse(S3.scalar([2, 0, -0.5])) == S3.scalar([0.5, 0, -2])
    assert pseudo_inverse(S3.zero()) == S3.zero()
    C2 = AtomicSpace.uniform(2, "complex")
    assert pseudo_inverse(C2.scalar([1j, 0])) == C2.scalar([-1j, 0])


@pytest.mark.filterwarnings("ignore:overflow")
def test_pseudo_inverse_keeps_subnormals():
    # the zero test is exact, so a tiny nonzero value is still inverted
    xi = pseudo_inverse(S2.scalar([5e-324, 0.0]))
    assert np.isinf(xi.values[0]) and xi.values[1] == 0


def test_sup_examples():
    assert sup([S2.scalar([1, 5]), S2.scalar([3, 2])]) == S2.scalar([3, 5])
    assert sup([S2.scalar([1, 1])]) == S2.scalar([1, 1])
    assert sup([S2.scalar([0, 0]), S2.scalar([-1, 2]), S2.scalar([2, -1])]) == S2.scalar([2, 2])
    with pytest.raises(DomainError):
        sup([])


def test_order_examples():
    assert leq(S2.scalar([1, 2]), S2.scalar([1, 3]))
    assert gt_on(S2.scalar([2, 0]), S2.scalar([1, 0]), S2.atomset(["a1"]))
    assert not gt_on(S2.scalar([2, 0]), S2.scalar([1, 0]), S2.everything())
    assert list(bracket_gt(S3.scalar([2, 0, 1]), S3.scalar([1, 1, 1]))) == ["a1"]
    assert not bracket_gt(S2.zero(), S2.zero())
    assert list(bracket_gt(S2.scalar([3, 3]), S2.one())) == ["a1", "a2"]


def test_order_rejects_complex_values():
    C = AtomicSpace.uniform(2, "complex")
    with pytest.raises(DomainError):
        leq(C.scalar([1j, 0]), C.one())


def test_atomset_algebra():
    A, B = S3.atomset(["a1", "a2"]), S3.atomset(["a2", "a3"])
    assert A & B == {"a2"}
    assert A | B == S3.everything()
    assert A - B == {"a1"}
    assert ~A == {"a3"}
    assert A.measure() == pytest.approx(2 / 3)
    with pytest.raises(DomainError):
        S3.atomset(["zz"])


def test_scalars_are_immutable():
    xi = S2.scalar([1, 2])
    with pytest.raises(ValueError):
        xi.values[0] = 5


@given(spaces().flatmap(lambda s: st.tuples(scalars(s), st.just(s))))
def test_pseudo_inverse_pattern(args):
    xi, space = args
    prod = (xi * pseudo_inverse(xi)).values
    supp = xi.values != 0
    assert np.array_equal(prod != 0, supp)
    np.testing.assert_allclose(prod[supp], 1, rtol=0, atol=4 * np.finfo(float).eps)


@given(spaces(field="real").flatmap(lambda s: st.tuples(scalars(s), scalars(s), scalars(s))))
def test_sup_is_the_least_upper_bound(args):
    x, y, z = args
    s = sup([x, y])
    assert leq(x, s) and leq(y, s)
    assert sup([s, z]) == sup([x, sup([y, z])])
    # any common upper bound dominates the sup
    u = sup([x, y, z])
    assert leq(s, u)


@given(spaces().flatmap(lambda s: st.tuples(st.just(s), st.lists(st.booleans(), min_size=len(s),
                                                                 max_size=len(s)))))
def test_indicators_are_idempotent(args):
    space, mask = args
    A = AtomSet.from_mask(space, mask)
    i = indicator(space, A)
    assert i * i == i
    assert i + indicator(space, ~A) == space.one()
    assert bracket_gt(i, space.zero()) == A


def test_scalar_item_lookup_by_atom():
    xi = L0Scalar(S3, [1.0, 2.0, 3.0])
    assert xi["a2"] == 2.0
    assert xi.restrict(S3.atomset(["a3"])) == S3.scalar([0, 0, 3])
