"""Seeded law checks for L0, the RN module axioms and the RIP axioms.

Each law is evaluated on independently drawn random samples; the result
maps law names to ``(passed, total)``.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .l0 import AtomSet, L0Scalar, bracket_gt, indicator, leq, pseudo_inverse, sup
from .module import inner, norm
from .sampling import random_element, random_scalar, random_space

REL = 1e-12
ULPS = 4
CS_REL = 1e-9


def _close(a, b, scale) -> bool:
    return bool(np.all(np.abs(np.asarray(a) - np.asarray(b)) <= REL * (1 + np.asarray(scale))))


def _setup(rng, max_atoms, max_dim, complex_ok=True):
    field = "complex" if complex_ok and rng.random() < 0.5 else "real"
    space = random_space(rng, int(rng.integers(1, max_atoms + 1)), field)
    return space, int(rng.integers(1, max_dim + 1))


def _real(rng, space, zeros=0.0):
    v = rng.standard_normal(len(space))
    v[rng.random(len(space)) < zeros] = 0
    return L0Scalar(space, v)


def _subset(rng, space):
    return AtomSet.from_mask(space, rng.random(len(space)) < 0.5)


# --- L0 algebra ---------------------------------------------------------

def law_pinv_identity(rng, A, D):
    # literal bit-exact identity; IEEE rounding of 1/x breaks it on some atoms
    space, _ = _setup(rng, A, D)
    xi = random_scalar(rng, space, zeros=0.4)
    return xi * pseudo_inverse(xi) == indicator(space, bracket_gt(abs(xi), space.zero()))


def law_pinv_support(rng, A, D):
    # the zero pattern of xi * xi^-1 is exactly the support, bit for bit
    space, _ = _setup(rng, A, D)
    xi = random_scalar(rng, space, zeros=0.4)
    prod = (xi * pseudo_inverse(xi)).values
    supp = bracket_gt(abs(xi), space.zero()).mask
    return bool(np.array_equal(prod != 0, supp) and np.all(prod[~supp] == 0))


def law_pinv_unit_on_support(rng, A, D):
    space, _ = _setup(rng, A, D)
    xi = random_scalar(rng, space, zeros=0.4)
    prod = (xi * pseudo_inverse(xi)).values
    supp = xi.values != 0
    return bool(np.all(np.abs(prod[supp] - 1) <= ULPS * np.finfo(float).eps))


def law_sup_idempotent(rng, A, D):
    space, _ = _setup(rng, A, D, False)
    xi = _real(rng, space)
    return sup([xi, xi]) == xi


def law_sup_commutative(rng, A, D):
    space, _ = _setup(rng, A, D, False)
    xi, eta = _real(rng, space), _real(rng, space)
    return sup([xi, eta]) == sup([eta, xi])


def law_sup_associative(rng, A, D):
    space, _ = _setup(rng, A, D, False)
    x, y, z = (_real(rng, space) for _ in range(3))
    return sup([sup([x, y]), z]) == sup([x, sup([y, z])])


def law_sup_upper_bound(rng, A, D):
    space, _ = _setup(rng, A, D, False)
    xi, eta = _real(rng, space), _real(rng, space)
    s = sup([xi, eta])
    return leq(xi, s) and leq(eta, s)


def law_indicator_product(rng, A, D):
    space, _ = _setup(rng, A, D)
    S, T = _subset(rng, space), _subset(rng, space)
    return indicator(space, S) * indicator(space, T) == indicator(space, S & T)


def law_indicator_disjoint_sum(rng, A, D):
    space, _ = _setup(rng, A, D)
    S = _subset(rng, space)
    T = _subset(rng, space) - S
    return indicator(space, S) + indicator(space, T) == indicator(space, S | T)


def law_leq_reflexive(rng, A, D):
    space, _ = _setup(rng, A, D, False)
    xi = _real(rng, space)
    return leq(xi, xi)


def law_leq_antisymmetric(rng, A, D):
    space, _ = _setup(rng, A, D, False)
    xi = _real(rng, space)
    # coarse values so that both orders sometimes hold for distinct draws
    eta = L0Scalar(space, np.where(rng.random(len(space)) < 0.8, xi.values,
                                   np.round(rng.standard_normal(len(space)))))
    if leq(xi, eta) and leq(eta, xi):
        return xi == eta
    return True


def law_leq_transitive(rng, A, D):
    space, _ = _setup(rng, A, D, False)
    xi = _real(rng, space)
    eta = xi + abs(_real(rng, space, zeros=0.3))
    zeta = eta + abs(_real(rng, space, zeros=0.3))
    return leq(xi, eta) and leq(eta, zeta) and leq(xi, zeta)


# --- random normed module -----------------------------------------------

def law_norm_zero_iff_null(rng, A, D):
    space, d = _setup(rng, A, D)
    x = random_element(rng, space, d, zeros=0.4)
    n = norm(x).values
    null_atoms = ~np.any(x.coords != 0, axis=1)
    return bool(np.all((n == 0) == null_atoms)) and bool(np.all(n >= 0))


def law_norm_homogeneous(rng, A, D):
    space, d = _setup(rng, A, D)
    xi = random_scalar(rng, space, zeros=0.2)
    x = random_element(rng, space, d)
    lhs = norm(xi * x).values
    rhs = abs(xi).values * norm(x).values
    return bool(np.all(np.abs(lhs - rhs) <= REL * np.maximum(rhs, 1e-300)))


def law_norm_triangle(rng, A, D):
    space, d = _setup(rng, A, D)
    x = random_element(rng, space, d)
    y = random_element(rng, space, d) if rng.random() < 0.8 else random_scalar(rng, space) * x
    rhs = norm(x).values + norm(y).values
    return bool(np.all(norm(x + y).values <= rhs * (1 + REL)))


# --- random inner product module ----------------------------------------

def law_inner_positive(rng, A, D):
    space, d = _setup(rng, A, D)
    x = random_element(rng, space, d, zeros=0.4)
    v = inner(x, x).values
    null_atoms = ~np.any(x.coords != 0, axis=1)
    return bool(np.all(np.imag(v) == 0) and np.all(np.real(v) >= 0)
                and np.all((np.real(v) == 0) == null_atoms))


def law_inner_conjugate_symmetric(rng, A, D):
    space, d = _setup(rng, A, D)
    x, y = random_element(rng, space, d), random_element(rng, space, d)
    scale = norm(x).values * norm(y).values
    return _close(inner(x, y).values, np.conj(inner(y, x).values), scale)


def law_inner_homogeneous(rng, A, D):
    space, d = _setup(rng, A, D)
    xi = random_scalar(rng, space)
    x, y = random_element(rng, space, d), random_element(rng, space, d)
    scale = np.abs(xi.values) * norm(x).values * norm(y).values
    return _close(inner(xi * x, y).values, (xi * inner(x, y)).values, scale)


def law_inner_additive(rng, A, D):
    space, d = _setup(rng, A, D)
    x, y, z = (random_element(rng, space, d) for _ in range(3))
    scale = (norm(x).values + norm(y).values) * norm(z).values
    return _close(inner(x + y, z).values, (inner(x, z) + inner(y, z)).values, scale)


def law_cauchy_schwarz(rng, A, D):
    space, d = _setup(rng, A, D)
    x, y = random_element(rng, space, d), random_element(rng, space, d)
    rhs = norm(x).values * norm(y).values
    return bool(np.all(np.abs(inner(x, y).values) <= rhs * (1 + CS_REL)))


def law_distributive_vectors(rng, A, D):
    space, d = _setup(rng, A, D)
    xi = random_scalar(rng, space)
    x, y = random_element(rng, space, d), random_element(rng, space, d)
    scale = np.abs(xi.values)[:, None] * (np.abs(x.coords) + np.abs(y.coords))
    return _close((xi * (x + y)).coords, (xi * x + xi * y).coords, scale)


def law_distributive_scalars(rng, A, D):
    space, d = _setup(rng, A, D)
    xi, eta = random_scalar(rng, space), random_scalar(rng, space)
    x = random_element(rng, space, d)
    scale = (np.abs(xi.values) + np.abs(eta.values))[:, None] * np.abs(x.coords)
    return _close(((xi + eta) * x).coords, (xi * x + eta * x).coords, scale)


LAWS: dict[str, dict[str, Callable]] = {
    "l0": {
        "pseudo_inverse_identity": law_pinv_identity,
        "pseudo_inverse_support": law_pinv_support,
        "pseudo_inverse_unit_on_support": law_pinv_unit_on_support,
        "sup_idempotent": law_sup_idempotent,
        "sup_commutative": law_sup_commutative,
        "sup_associative": law_sup_associative,
        "sup_upper_bound": law_sup_upper_bound,
        "indicator_product": law_indicator_product,
        "indicator_disjoint_sum": law_indicator_disjoint_sum,
        "leq_reflexive": law_leq_reflexive,
        "leq_antisymmetric": law_leq_antisymmetric,
        "leq_transitive": law_leq_transitive,
    },
    "rn_module": {
        "norm_zero_iff_null": law_norm_zero_iff_null,
        "norm_homogeneous": law_norm_homogeneous,
        "norm_triangle": law_norm_triangle,
        "distributive_vectors": law_distributive_vectors,
        "distributive_scalars": law_distributive_scalars,
    },
    "rip_module": {
        "inner_positive": law_inner_positive,
        "inner_conjugate_symmetric": law_inner_conjugate_symmetric,
        "inner_homogeneous": law_inner_homogeneous,
        "inner_additive": law_inner_additive,
        "cauchy_schwarz": law_cauchy_schwarz,
    },
}


def run_axiom_suites(seed: int = 0, samples: int = 1000, max_atoms: int = 8,
                     max_dim: int = 6) -> dict[str, tuple[int, int]]:
    """``{"suite.law": (passed, samples)}`` for every law."""
    out = {}
    for suite, laws in LAWS.items():
        for name, law in laws.items():
            rng = np.random.default_rng([seed, len(out)])
            passed = sum(bool(law(rng, max_atoms, max_dim)) for _ in range(samples))
            out[f"{suite}.{name}"] = (passed, samples)
    return out
