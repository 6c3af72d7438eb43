import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rnmod import (AtomicSpace, DomainError, HellyInstance, RandomFunctional, RNElement,
                   certificate_gap, check_condition, evaluate, indicator, norm, solve,
                   solve_via_stratification, sup_ratio_oracle)
from rnmod.sampling import random_helly_instance

S1 = AtomicSpace(["a1"], [1.0])
S2 = AtomicSpace.uniform(2)


def fn(space, coords):
    return RandomFunctional(RNElement(space, coords))


E1, E2 = fn(S1, [[1, 0]]), fn(S1, [[0, 1]])


def planar(beta):
    return HellyInstance([E1, E2], [S1.scalar([3]), S1.scalar([4])], S1.scalar([beta]))


def test_boundary_budget_is_feasible():
    v = solve(planar(5))
    assert v.feasible and v.sharp
    np.testing.assert_allclose(v.solution.coords, [[3, 4]], rtol=1e-15)
    assert check_condition(planar(5)).feasible


def test_tight_budget_gives_certificate():
    v = solve(planar(4.9))
    assert not v.feasible and v.solution is None
    lam = np.array([l.values[0] for l in v.certificate.lambdas])
    np.testing.assert_allclose(lam / np.linalg.norm(lam), [0.6, 0.8], rtol=1e-12)
    assert v.certificate.violation_set == {"a1"}
    assert certificate_gap([E1, E2], planar(4.9).targets, S1.scalar([4.9]),
                           v.certificate.lambdas).values[0] > 0


def test_oracle_on_planar_example():
    est = sup_ratio_oracle([E1, E2], [S1.scalar([3]), S1.scalar([4])], samples=10_000).values[0]
    assert 5 - 0.01 <= est <= 5 + 1e-12
    assert est > 4.9  # the oracle also sees that 4.9 is too small


def test_zero_instance():
    v = solve(HellyInstance([E1], [S1.zero()], S1.zero()))
    assert v.feasible and v.solution.is_null()


def test_rank_zero_atom_needs_zero_target():
    f = fn(S2, [[1, 0], [0, 0]])
    v = solve(HellyInstance([f], [indicator(S2, ["a1"])], S2.one()))
    assert v.feasible
    assert v.solution == RNElement(S2, [[1, 0], [0, 0]])
    v = solve(HellyInstance([f], [S2.one()], S2.one()))
    assert not v.feasible
    assert v.certificate.violation_set == {"a2"}
    assert v.certificate.lambdas[0].values[1] != 0 and v.certificate.lambdas[0].values[0] == 0
    c = check_condition(HellyInstance([f], [S2.one()], S2.one()))
    assert c.certificate.lambdas[0] == indicator(S2, ["a2"])


def test_oracle_degenerate_cases():
    z = fn(S2, [[0, 0], [0, 0]])
    assert sup_ratio_oracle([z], [S2.zero()]) == S2.zero()
    assert sup_ratio_oracle([z], [S2.scalar([1, 0])]).values.tolist() == [np.inf, 0]


def test_instance_validation():
    with pytest.raises(DomainError):
        HellyInstance([E1], [], S1.one())
    with pytest.raises(DomainError):
        HellyInstance([E1], [S1.one()], S1.scalar([-1]))
    with pytest.raises(DomainError):
        HellyInstance([E1], [S1.one()], S1.one(), S1.zero())


@given(st.integers(0, 2**32 - 1))
def test_verdict_properties(seed):
    rng = np.random.default_rng(seed)
    inst = random_helly_instance(rng)
    v = solve(inst)
    c = check_condition(inst)
    assert c.feasible == v.feasible
    both = np.isfinite(v.min_norm.values)
    assert np.array_equal(both, np.isfinite(c.min_norm.values))
    np.testing.assert_allclose(c.min_norm.values[both], v.min_norm.values[both], rtol=1e-7,
                               atol=1e-9)
    if not c.feasible:
        gap = certificate_gap(inst.functionals, inst.targets, inst.budget, c.certificate.lambdas)
        assert np.all(gap.values[c.certificate.violation_set.mask] > 0)
        assert c.certificate.violation_set == v.certificate.violation_set
    if v.feasible:
        x = v.solution
        for f, t in zip(inst.functionals, inst.targets):
            np.testing.assert_allclose(evaluate(f, x).values, t.values,
                                       atol=1e-8 * (1 + np.abs(t.values).max()))
        assert np.all(norm(x).values <= inst.budget.values + inst.slack.values)
    else:
        cert = v.certificate
        gap = certificate_gap(inst.functionals, inst.targets, inst.budget, cert.lambdas)
        assert np.all(gap.values[cert.violation_set.mask] > 0)
        assert cert.violation_set.measure() > 0


@given(st.integers(0, 2**32 - 1))
def test_stratification_route_agrees(seed):
    inst = random_helly_instance(np.random.default_rng(seed))
    ok, x = solve_via_stratification(inst)
    assert ok == solve(inst).feasible
    if ok:
        for f, t in zip(inst.functionals, inst.targets):
            np.testing.assert_allclose(evaluate(f, x).values, t.values,
                                       atol=1e-7 * (1 + np.abs(t.values).max()))


@given(st.integers(0, 2**32 - 1))
def test_rescaling_preserves_the_verdict(seed):
    # multiplying every equation by a nowhere-zero scalar changes nothing
    rng = np.random.default_rng(seed)
    inst = random_helly_instance(rng)
    m = len(inst.space)
    alpha = rng.uniform(0.5, 2.0, m) * np.where(rng.random(m) < 0.5, -1, 1)
    if inst.space.is_complex:
        alpha = alpha * np.exp(1j * rng.uniform(0, 2 * np.pi, m))
    assert solve(inst.scaled(inst.space.scalar(alpha))).feasible == solve(inst).feasible


@given(st.integers(0, 2**32 - 1))
def test_oracle_never_exceeds_analytic_sup(seed):
    rng = np.random.default_rng(seed)
    inst = random_helly_instance(rng)
    v = check_condition(inst)
    est = sup_ratio_oracle(inst.functionals, inst.targets, samples=2000, seed=seed).values
    exact = v.min_norm.values
    finite = np.isfinite(exact)
    assert np.all(est[finite] <= exact[finite] * (1 + 1e-9) + 1e-9)
