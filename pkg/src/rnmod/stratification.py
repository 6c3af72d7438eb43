"""Rank analysis of finitely generated families of random functionals.

The span of ``f_1 .. f_n`` has a partition ``A_0 .. A_n`` of the atoms on
which it has constant rank ``i``, together with ``i`` functionals forming a
basis on ``A_i``. Over an atomic space this is per-atom linear algebra:
eliminate the Riesz vectors in order and keep the first independent ones.
Different atoms of one stratum may keep different subfamilies; those are
glued with indicators into a single basis, so each ``g_j`` is an
indicator-weighted combination of the original functionals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .conjugate import RandomFunctional
from .l0 import AtomicSpace, AtomSet, DomainError, L0Scalar, _check_same_space
from .module import RNElement

__all__ = [
    "RANK_TOL",
    "InconsistencyError",
    "Stratification",
    "support",
    "riesz_stack",
    "eliminate",
    "quasi_free_stratification",
    "express_in_basis",
]

RANK_TOL = 1e-10
EXPRESS_ATOL = 1e-9


class InconsistencyError(ArithmeticError):
    """A functional has no exact expression in a stratum basis (rank bug)."""


def support(xi: L0Scalar) -> AtomSet:
    """Atoms where ``|xi| > 0``, tested exactly."""
    return AtomSet.from_mask(xi.space, np.abs(xi.values) > 0)


def riesz_stack(fs: Sequence[RandomFunctional]) -> np.ndarray:
    """Riesz vectors as an array of shape ``(atoms, n, d)``."""
    if not fs:
        raise DomainError("empty family of functionals")
    _check_same_space(*(f.space for f in fs))
    if len({f.dim for f in fs}) != 1:
        raise DomainError("functionals of different dimensions")
    return np.stack([f.riesz.coords for f in fs], axis=1)


def eliminate(rows: np.ndarray, tol: float = RANK_TOL) -> list[int]:
    """Indices of the first linearly independent rows, in order.

    Row-wise Gaussian elimination with partial pivoting. A reduced row counts
    as independent when its largest entry exceeds ``tol`` times the largest
    row norm of the input.
    """
    scale = np.linalg.norm(rows, axis=1).max(initial=0.0)
    if scale == 0:
        return []
    thresh = tol * scale
    pivots: list[tuple[np.ndarray, int]] = []
    kept = []
    for k, row in enumerate(rows):
        v = row.astype(np.result_type(row, float), copy=True)
        for p, c in pivots:
            v = v - (v[c] / p[c]) * p
        c = int(np.argmax(np.abs(v)))
        if abs(v[c]) > thresh:
            pivots.append((v, c))
            kept.append(k)
    return kept


@dataclass(frozen=True, eq=False)
class Stratification:
    """Constant-rank partition of a family together with stratum bases.

    ``parts[i]`` holds the atoms of rank ``i``. ``bases[i]`` lists ``i``
    functionals vanishing off ``parts[i]``. ``selection[a, j]`` is the index
    of the original functional used as ``g_j`` on atom ``a`` (``-1`` past the
    atom's rank).
    """

    space: AtomicSpace
    family: tuple[RandomFunctional, ...]
    parts: tuple[AtomSet, ...]
    bases: dict[int, tuple[RandomFunctional, ...]]
    selection: np.ndarray = field(repr=False)
    tol: float = RANK_TOL

    @property
    def ranks(self) -> np.ndarray:
        return (self.selection >= 0).sum(axis=1)

    def nonempty(self) -> list[int]:
        return [i for i, A in enumerate(self.parts) if A]

    def coefficients(self, i: int) -> list[list[L0Scalar]]:
        """``zeta[k][j]`` with ``g_j = sum_k zeta[k][j] * f_k`` on stratum ``i``."""
        n = len(self.family)
        in_part = self.parts[i].mask
        return [[L0Scalar(self.space, (in_part & (self.selection[:, j] == k)).astype(float))
                 for j in range(i)] for k in range(n)]


def quasi_free_stratification(fs: Sequence[RandomFunctional],
                              tol: float = RANK_TOL) -> Stratification:
    fs = tuple(fs)
    Y = riesz_stack(fs)
    space = fs[0].space
    m, n, d = Y.shape
    selection = np.full((m, n), -1, dtype=int)
    for a in range(m):
        kept = eliminate(Y[a], tol)
        selection[a, :len(kept)] = kept
    ranks = (selection >= 0).sum(axis=1)
    parts = tuple(AtomSet.from_mask(space, ranks == i) for i in range(n + 1))
    bases = {}
    for i in range(1, n + 1):
        mask = ranks == i
        if not mask.any():
            continue
        basis = []
        for j in range(i):
            coords = np.zeros((m, d), dtype=space.dtype)
            for a in np.flatnonzero(mask):
                coords[a] = Y[a, selection[a, j]]
            basis.append(RandomFunctional(RNElement(space, coords)))
        bases[i] = tuple(basis)
    return Stratification(space, fs, parts, bases, selection, tol)


def express_in_basis(f: RandomFunctional, strat: Stratification, i: int) -> list[L0Scalar]:
    """Coefficients ``eta_j`` with ``I_{A_i} f = sum_j eta_j g_j``.

    Raises :class:`InconsistencyError` if the Riesz residual on some atom of
    the stratum exceeds ``1e-9``.
    """
    if i < 1 or i not in strat.bases:
        raise DomainError(f"stratum {i} is empty or has no basis")
    _check_same_space(f.space, strat.space)
    G = np.stack([g.riesz.coords for g in strat.bases[i]], axis=2)  # (m, d, i)
    y = f.riesz.coords
    m = len(strat.space)
    eta = np.zeros((m, i), dtype=strat.space.dtype)
    for a in np.flatnonzero(strat.parts[i].mask):
        # riesz(sum eta_j g_j) = sum conj(eta_j) riesz(g_j)
        c, *_ = np.linalg.lstsq(G[a], y[a], rcond=None)
        resid = np.linalg.norm(G[a] @ c - y[a])
        if resid > EXPRESS_ATOL:
            raise InconsistencyError(
                f"residual {resid:.3e} on atom {strat.space.atoms[a]!r} in stratum {i}")
        eta[a] = np.conj(c)
    return [L0Scalar(strat.space, eta[:, j]) for j in range(i)]
