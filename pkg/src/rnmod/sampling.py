"""Seeded random generators for spaces, elements, instances and bodies."""

from __future__ import annotations

import numpy as np

from .conjugate import BidualTarget, RandomFunctional
from .helly import HellyInstance
from .l0 import AtomicSpace, L0Scalar
from ._polytope import chebyshev_center
from .module import RNElement
from .separation import Ball, ConvexBody, Hull

__all__ = [
    "random_space",
    "random_values",
    "random_scalar",
    "random_element",
    "random_functional",
    "random_family",
    "random_helly_instance",
    "random_body_pair",
    "random_absorbent_body",
    "random_bidual_target",
]


def random_space(rng: np.random.Generator, atoms: int, field: str = "real") -> AtomicSpace:
    probs = rng.dirichlet(np.ones(atoms)) * 0.9 + 0.1 / atoms
    probs /= probs.sum()
    return AtomicSpace([f"a{i + 1}" for i in range(atoms)], probs, field)


def random_values(rng: np.random.Generator, shape, complex_: bool) -> np.ndarray:
    v = rng.standard_normal(shape)
    if complex_:
        v = v + 1j * rng.standard_normal(shape)
    return v


def random_scalar(rng, space: AtomicSpace, zeros: float = 0.0) -> L0Scalar:
    """Random scalar in the space's field; each atom is zeroed with prob ``zeros``."""
    v = random_values(rng, len(space), space.is_complex)
    v[rng.random(len(space)) < zeros] = 0
    return L0Scalar(space, v)


def random_element(rng, space: AtomicSpace, dim: int, zeros: float = 0.0) -> RNElement:
    c = random_values(rng, (len(space), dim), space.is_complex)
    c[rng.random(len(space)) < zeros] = 0
    return RNElement(space, c)


def random_functional(rng, space: AtomicSpace, dim: int, zeros: float = 0.0) -> RandomFunctional:
    return RandomFunctional(random_element(rng, space, dim, zeros))


def random_family(rng, space: AtomicSpace, n: int, dim: int,
                  deficient: bool = True) -> list[RandomFunctional]:
    """``n`` functionals; with ``deficient`` some atoms get engineered low rank.

    Rank deficiency comes from zero Riesz vectors, exact repeats and
    combinations of earlier members, chosen atom by atom.
    """
    m = len(space)
    Y = random_values(rng, (m, n, dim), space.is_complex)
    if deficient:
        for a in range(m):
            r = int(rng.integers(0, min(n, dim) + 1))
            if r == min(n, dim) and rng.random() < 0.5:
                continue
            basis = Y[a, :r].copy()
            order = rng.permutation(n)
            Y[a] = 0
            Y[a, order[:r]] = basis
            for k in order[r:] if r else ():
                c = random_values(rng, r, space.is_complex)
                if rng.random() < 0.3:
                    c = np.zeros(r, dtype=c.dtype)
                    c[rng.integers(r)] = 1.0
                Y[a, k] = c @ basis
    return [RandomFunctional(RNElement(space, Y[:, k])) for k in range(n)]


def random_helly_instance(rng, max_atoms: int = 8, max_dim: int = 5, max_n: int = 4,
                          field: str | None = None) -> HellyInstance:
    """Random instance with a mix of feasible and infeasible atoms.

    Each atom draws consistent targets ``Y^H z`` or arbitrary ones, and a
    budget that is a random factor away from the minimum-norm solution,
    never within 5% of it.
    """
    field = field or ("complex" if rng.random() < 0.5 else "real")
    m = int(rng.integers(1, max_atoms + 1))
    d = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(1, max_n + 1))
    space = random_space(rng, m, field)
    fs = random_family(rng, space, n, d, deficient=rng.random() < 0.6)
    Y = np.stack([f.riesz.coords for f in fs], axis=2)  # (m, d, n)
    xi = np.zeros((m, n), dtype=space.dtype)
    beta = np.zeros(m)
    for a in range(m):
        A = np.conj(Y[a].T)
        if rng.random() < 0.8:
            z = random_values(rng, d, space.is_complex)
            xi[a] = A @ z
        else:
            xi[a] = random_values(rng, n, space.is_complex)
        if rng.random() < 0.05:
            xi[a] = 0
        xstar = np.linalg.pinv(A) @ xi[a]
        nx = np.linalg.norm(xstar)
        factor = rng.uniform(1.05, 2.0) if rng.random() < 0.6 else rng.uniform(0.2, 0.95)
        beta[a] = nx * factor if nx > 0 else rng.uniform(0, 2)
    targets = [L0Scalar(space, xi[:, k]) for k in range(n)]
    slack = L0Scalar(space, rng.uniform(1e-3, 1.0, m))
    return HellyInstance(fs, targets, L0Scalar(space, beta), slack)


def _random_piece(rng, dim: int, cplx: bool, center: np.ndarray, scale: float):
    if rng.random() < 0.5:
        return Ball(center, float(rng.uniform(0.2, 1.0) * scale))
    k = 2 * dim if cplx else dim
    npts = int(rng.integers(k + 1, min(3 * k + 3, 32) + 1))
    pts = random_values(rng, (npts, dim), cplx) * scale * 0.6 + center
    return Hull(pts)


def _radius(piece, center: np.ndarray) -> float:
    if isinstance(piece, Ball):
        return float(np.linalg.norm(piece.center - center) + piece.radius)
    return float(np.linalg.norm(piece.points - center, axis=1).max())


def random_body_pair(rng, space: AtomicSpace, dim: int,
                     p_disjoint: float = 0.6) -> tuple[ConvexBody, ConvexBody, np.ndarray]:
    """Bodies ``G`` (with interior) and ``M``, disjoint on a random set of atoms.

    Returns the bodies and the intended disjointness mask. On disjoint atoms
    the piece of ``M`` is pushed along a random direction until the two
    enclosing balls are at least 1 apart; elsewhere it contains a point of
    the piece of ``G``.
    """
    cplx = space.is_complex
    G, M = [], []
    mask = rng.random(len(space)) < p_disjoint
    if not mask.any():
        mask[rng.integers(len(space))] = True
    for a in range(len(space)):
        c = random_values(rng, dim, cplx)
        g = _random_piece(rng, dim, cplx, c, 1.0)
        while isinstance(g, Hull) and _flat(g, cplx):
            g = _random_piece(rng, dim, cplx, c, 1.0)
        # a point of g: its center or the centroid of its vertices
        anchor = g.center if isinstance(g, Ball) else g.points.mean(axis=0)
        if mask[a]:
            u = random_values(rng, dim, cplx)
            u /= np.linalg.norm(u)
            h = _random_piece(rng, dim, cplx, np.zeros(dim, dtype=c.dtype), 1.0)
            shift = _radius(g, c) + _radius(h, np.zeros(dim)) + rng.uniform(1.0, 4.0)
            h = (Ball(h.center + c + shift * u, h.radius) if isinstance(h, Ball)
                 else Hull(h.points + c + shift * u))
        else:
            h = _random_piece(rng, dim, cplx, anchor, 1.0)
            if isinstance(h, Hull):
                h = Hull(np.vstack([h.points, anchor]))
        G.append(g)
        M.append(h)
    return ConvexBody(space, G, interior=True), ConvexBody(space, M, interior=False), mask


def _flat(h: Hull, cplx: bool) -> bool:
    pts = np.concatenate([h.points.real, h.points.imag], axis=1) if cplx else h.points
    return chebyshev_center(pts)[1] <= 1e-3


def random_absorbent_body(rng, space: AtomicSpace, dim: int) -> ConvexBody:
    """Balls and hulls whose interior contains the origin with a margin."""
    cplx = space.is_complex
    pieces = []
    k = 2 * dim if cplx else dim
    for _ in range(len(space)):
        if rng.random() < 0.5:
            r = float(rng.uniform(0.5, 2.0))
            c = random_values(rng, dim, cplx)
            c *= rng.uniform(0, 0.8) * r / np.linalg.norm(c)
            pieces.append(Ball(c, r))
        else:
            npts = int(rng.integers(k + 1, min(3 * k + 3, 32) + 1))
            pts = random_values(rng, (npts, dim), cplx)
            pts += 0.3 * random_values(rng, dim, cplx) / np.sqrt(k)
            # cross-polytope vertices keep the origin well inside
            eye = np.eye(dim) * rng.uniform(0.3, 1.0)
            extra = np.vstack([eye, -eye])
            if cplx:
                extra = np.vstack([extra, 1j * eye, -1j * eye])
            pieces.append(Hull(np.vstack([pts, extra])))
    return ConvexBody(space, pieces, interior=True)


def random_bidual_target(rng, space: AtomicSpace, n: int, dim: int) -> BidualTarget:
    """Values ``l(f_i) = f_i(z)`` of some ``z`` with ``||z|| <= 1``."""
    fs = random_family(rng, space, n, dim, deficient=rng.random() < 0.5)
    z = random_element(rng, space, dim)
    scale = rng.uniform(0.05, 1.0, len(space)) / np.linalg.norm(z.coords, axis=1)
    z = L0Scalar(space, scale) * z
    return BidualTarget.from_element(z, fs)
