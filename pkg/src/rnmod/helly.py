"""Random linear equations under a stochastic norm budget.

Given functionals ``f_1 .. f_n``, targets ``xi_1 .. xi_n`` and a budget
``beta``, there is ``x`` with ``f_i(x) = xi_i`` and ``||x|| <= beta + eps``
for every ``eps > 0`` exactly when

    |sum_k lam_k xi_k| <= beta * ||sum_k lam_k f_k||   for all lam in L0^n.

Per atom, with ``Y`` the ``d x n`` matrix of Riesz vectors, the equations
read ``Y^H x = xi``; the supremum of ``|lam . xi| / ||Y conj(lam)||`` is the
norm of the minimum-norm solution when the system is consistent and
infinite otherwise. The solver decides feasibility from that solution and,
when it fails, returns a coefficient vector ``lam`` that breaks the
inequality on a set of positive measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .conjugate import RandomFunctional, functional_norm
from .l0 import AtomicSpace, AtomSet, DomainError, L0Scalar, _check_same_space
from .module import RNElement, norm
from .stratification import (RANK_TOL, express_in_basis, quasi_free_stratification,
                             riesz_stack)

__all__ = [
    "TOL",
    "CertificateError",
    "HellyInstance",
    "Certificate",
    "HellyVerdict",
    "check_condition",
    "solve",
    "solve_via_stratification",
    "certificate_gap",
    "sup_ratio_oracle",
    "min_norm_solution",
]

TOL = 1e-9


class CertificateError(RuntimeError):
    """A constructed certificate failed its own numerical verification."""


class HellyInstance:
    """Functionals, targets, budget ``beta >= 0`` and slack ``eps > 0``.

    ``slack`` defaults to the constant 1; over finite-dimensional fibers the
    minimum-norm solution never needs it.
    """

    __slots__ = ("functionals", "targets", "budget", "slack")

    def __init__(self, functionals: Sequence[RandomFunctional], targets: Sequence[L0Scalar],
                 budget: L0Scalar, slack: L0Scalar | None = None):
        functionals = tuple(functionals)
        targets = tuple(targets)
        if not functionals:
            raise DomainError("need at least one functional")
        if len(functionals) != len(targets):
            raise DomainError("need one target per functional")
        if slack is None:
            slack = budget.space.one()
        _check_same_space(*(f.space for f in functionals), *(t.space for t in targets),
                          budget.space, slack.space)
        if len({f.dim for f in functionals}) != 1:
            raise DomainError("functionals of different dimensions")
        if not np.all(budget.require_real() >= 0):
            raise DomainError("budget must be nonnegative")
        if not np.all(slack.require_real() > 0):
            raise DomainError("slack must be strictly positive")
        self.functionals = functionals
        self.targets = targets
        self.budget = budget
        self.slack = slack

    @property
    def space(self) -> AtomicSpace:
        return self.budget.space

    @property
    def dim(self) -> int:
        return self.functionals[0].dim

    def __len__(self):
        return len(self.functionals)

    def scaled(self, alpha: L0Scalar) -> "HellyInstance":
        """Same instance with every ``(f_i, xi_i)`` multiplied by ``alpha``."""
        return HellyInstance([alpha * f for f in self.functionals],
                             [alpha * t for t in self.targets], self.budget, self.slack)


@dataclass(frozen=True, eq=False)
class Certificate:
    """Coefficients ``lam`` and the atoms where they break the inequality."""

    lambdas: tuple[L0Scalar, ...]
    violation_set: AtomSet


@dataclass(frozen=True, eq=False)
class HellyVerdict:
    feasible: bool
    solution: RNElement | None = None
    certificate: Certificate | None = None
    #: per-atom norm of the minimum-norm solution (inf where inconsistent)
    min_norm: L0Scalar | None = None
    #: whether ``||x|| <= beta`` held up to tolerance, not just ``beta + eps``
    sharp: bool | None = None


def _stack_targets(targets: Sequence[L0Scalar], dtype) -> np.ndarray:
    return np.stack([t.values for t in targets], axis=1).astype(dtype)


def min_norm_solution(Y: np.ndarray, xi: np.ndarray, tol: float = TOL):
    """Batched minimum-norm solution of ``Y[a]^H x = xi[a]``.

    ``Y`` has shape ``(atoms, d, n)`` and ``xi`` ``(atoms, n)``. Returns the
    solution ``(atoms, d)``, residual ``(atoms, n)`` and numerical rank, using
    an SVD with singular values below ``tol * s_max`` treated as zero.
    """
    A = np.conj(np.swapaxes(Y, 1, 2))  # (m, n, d)
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    smax = s[:, :1]
    keep = (s > tol * smax) & (smax > 0)
    s_inv = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
    coef = np.einsum("ank,an->ak", np.conj(U), xi) * s_inv
    x = np.einsum("akd,ak->ad", np.conj(Vh), coef)
    resid = xi - np.einsum("and,ad->an", A, x)
    return x, resid, keep.sum(axis=1)


def _dual_vector(Y: np.ndarray, xi: np.ndarray, tol: float) -> np.ndarray:
    """``(Y^H Y)^+ xi`` per atom, via the same truncated SVD."""
    A = np.conj(np.swapaxes(Y, 1, 2))
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    smax = s[:, :1]
    keep = (s > tol * smax) & (smax > 0)
    s2_inv = np.where(keep, 1.0 / np.where(keep, s, 1.0) ** 2, 0.0)
    coef = np.einsum("ank,an->ak", np.conj(U), xi) * s2_inv
    return np.einsum("ank,ak->an", U, coef)


def certificate_gap(functionals: Sequence[RandomFunctional], targets: Sequence[L0Scalar],
                    budget: L0Scalar, lambdas: Sequence[L0Scalar]) -> L0Scalar:
    """``|sum lam_k xi_k| - beta * ||sum lam_k f_k||`` per atom.

    Computed through the module operations only; positive values mark
    atoms where the coefficients violate the solvability condition.
    """
    combo = lambdas[0] * functionals[0]
    lhs = lambdas[0] * targets[0]
    for lam, f, t in zip(lambdas[1:], functionals[1:], targets[1:]):
        combo = combo + lam * f
        lhs = lhs + lam * t
    return abs(lhs) - budget * functional_norm(combo)


def check_condition(inst: HellyInstance, tol: float = TOL,
                    rank_tol: float = RANK_TOL) -> HellyVerdict:
    """Decide the solvability condition; certificate only, no solution.

    Works through the quasi-free stratification rather than the SVD used by
    :func:`solve`, so the two verdicts come from independent computations.
    """
    verdict, _ = _decide_stratified(inst, tol, rank_tol)
    return verdict


def _verified(inst: HellyInstance, ok: np.ndarray, mu: np.ndarray) -> Certificate:
    """Normalize ``lam = conj(mu)`` on failing atoms and check that it violates."""
    space = inst.space
    mu = mu.copy()
    mu[ok] = 0
    mu[~ok] /= np.linalg.norm(mu[~ok], axis=1, keepdims=True)
    lambdas = tuple(L0Scalar(space, np.conj(mu[:, k])) for k in range(mu.shape[1]))
    gap = certificate_gap(inst.functionals, inst.targets, inst.budget, lambdas)
    failed = ~ok & ~(gap.values > 0)
    if failed.any():
        atoms = [space.atoms[a] for a in np.flatnonzero(failed)]
        raise CertificateError(f"certificate does not verify on atoms {atoms!r}")
    return Certificate(lambdas, AtomSet.from_mask(space, ~ok))


def _decide_stratified(inst: HellyInstance, tol: float, rank_tol: float):
    """Verdict by reduction to an independent basis on each stratum.

    On stratum ``A_i`` the basis ``g_j = sum_k zeta_kj f_k`` gets targets
    ``gamma_j = sum_k zeta_kj xi_k``. Each ``f_k = sum_j eta_kj g_j`` must
    carry ``xi_k = sum_j eta_kj gamma_j``; otherwise ``lam = e_k - eta_k zeta``
    annihilates the functionals but not the targets. When all targets are
    consistent, ``x = G (G^H G)^-1 gamma`` is the minimum-norm solution, and
    ``lam = zeta conj((G^H G)^-1 gamma)`` attains the ratio ``||x||``.
    """
    space = inst.space
    strat = quasi_free_stratification(inst.functionals, rank_tol)
    m, n, d = len(space), len(inst), inst.dim
    xi = _stack_targets(inst.targets, space.dtype)
    x = np.zeros((m, d), dtype=space.dtype)
    consistent = np.ones(m, dtype=bool)
    mu = np.zeros((m, n), dtype=space.dtype)  # lam = conj(mu)
    for i in strat.nonempty():
        atoms = np.flatnonzero(strat.parts[i].mask)
        if i == 0:
            for a in atoms:
                bad = np.abs(xi[a]) > tol
                if bad.any():
                    consistent[a] = False
                    mu[a, int(np.argmax(bad))] = 1.0
            continue
        zeta = np.stack([[z.values for z in row] for row in strat.coefficients(i)])  # (n, i, m)
        eta = np.stack([np.stack([e.values for e in express_in_basis(f, strat, i)], axis=1)
                        for f in inst.functionals], axis=1)  # (m, n, i)
        G = np.stack([g.riesz.coords for g in strat.bases[i]], axis=2)  # (m, d, i)
        for a in atoms:
            Z = zeta[:, :, a]  # (n, i)
            gamma = Z.T @ xi[a]
            gap = xi[a] - eta[a] @ gamma
            bad = np.abs(gap) > tol * (1 + np.abs(xi[a]))
            if bad.any():
                consistent[a] = False
                k = int(np.argmax(np.abs(gap)))
                lam = -eta[a, k] @ Z.T
                lam[k] += 1
                mu[a] = np.conj(lam)
                continue
            w = np.linalg.solve(np.conj(G[a].T) @ G[a], gamma)
            x[a] = G[a] @ w
            mu[a] = Z @ w  # lam = Z conj(w)
    xnorm = norm(RNElement(space, x)).values
    beta = inst.budget.values
    ok = consistent & (xnorm <= beta + tol * (1 + beta))
    min_norm = L0Scalar(space, np.where(consistent, xnorm, np.inf))
    if ok.all():
        return HellyVerdict(True, None, None, min_norm, True), x
    return HellyVerdict(False, None, _verified(inst, ok, mu), min_norm, False), x


def _decide(inst: HellyInstance, tol: float):
    space = inst.space
    Y = np.swapaxes(riesz_stack(inst.functionals), 1, 2)  # (m, d, n)
    xi = _stack_targets(inst.targets, space.dtype)
    beta = inst.budget.values

    x, resid, _ = min_norm_solution(Y, xi, tol)
    rnorm = np.linalg.norm(resid, axis=1)
    xinorm = np.linalg.norm(xi, axis=1)
    consistent = rnorm <= tol * (1 + xinorm)
    xnorm = np.linalg.norm(x, axis=1)
    within = xnorm <= beta + tol * (1 + beta)
    ok = consistent & within
    min_norm = L0Scalar(space, np.where(consistent, xnorm, np.inf))

    if ok.all():
        return HellyVerdict(True, None, None, min_norm, True), x

    mu = np.zeros_like(xi)
    bad_inc = ~consistent
    bad_over = consistent & ~within
    mu[bad_inc] = resid[bad_inc]
    if bad_over.any():
        mu[bad_over] = _dual_vector(Y, xi, tol)[bad_over]
    # with lam = conj(mu): sum_k lam_k xi_k = mu^H xi and riesz(sum lam_k f_k) = Y mu
    return HellyVerdict(False, None, _verified(inst, ok, mu), min_norm, False), x


def solve(inst: HellyInstance, tol: float = TOL) -> HellyVerdict:
    """Minimum-norm solution when the condition holds, else the certificate.

    The solution satisfies ``f_i(x) = xi_i`` and ``||x|| <= beta`` up to
    ``tol * (1 + beta)``, which is sharper than the ``beta + eps`` the
    general statement asks for.
    """
    verdict, x = _decide(inst, tol)
    if not verdict.feasible:
        return verdict
    sol = RNElement(inst.space, x)
    sharp = bool(np.all(norm(sol).values <= inst.budget.values + tol * (1 + inst.budget.values)))
    return HellyVerdict(True, sol, None, verdict.min_norm, sharp)


def solve_via_stratification(inst: HellyInstance, tol: float = TOL,
                             rank_tol: float = RANK_TOL) -> tuple[bool, RNElement | None]:
    """Feasibility and solution from the stratified route of :func:`check_condition`."""
    verdict, x = _decide_stratified(inst, tol, rank_tol)
    return verdict.feasible, (RNElement(inst.space, x) if verdict.feasible else None)


def sup_ratio_oracle(functionals: Sequence[RandomFunctional], targets: Sequence[L0Scalar],
                     samples: int = 10_000, seed=0) -> L0Scalar:
    """Brute-force estimate of ``sup_lam |sum lam_k xi_k| / ||sum lam_k f_k||``.

    ``lam`` is drawn uniformly from the unit sphere of ``K^n`` on each atom.
    A vanishing denominator with vanishing numerator counts as 0; with a
    nonzero numerator the atom's value is ``inf``.
    """
    if samples < 1:
        raise DomainError("need at least one sample")
    Y = riesz_stack(functionals)  # (m, n, d)
    space = functionals[0].space
    xi = _stack_targets(targets, space.dtype)
    m, n, d = Y.shape
    rng = np.random.default_rng(seed)
    lam = rng.standard_normal((samples, m, n))
    if space.is_complex:
        lam = lam + 1j * rng.standard_normal((samples, m, n))
    lam /= np.linalg.norm(lam, axis=2, keepdims=True)
    num = np.abs(np.einsum("san,an->sa", lam, xi))
    den = np.linalg.norm(np.einsum("san,and->sad", np.conj(lam), Y), axis=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0),
                         np.where(num > 0, np.inf, 0.0))
    return L0Scalar(space, ratio.max(axis=0))
