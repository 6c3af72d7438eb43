"""Separation of L0-convex bodies over an atomic space.

A body is described atom by atom as a closed ball or the convex hull of
finitely many points. Two bodies are disjoint exactly on the atoms where
their fibers are; on that set a random functional separates them, built
from the closest pair of the two fibers. Complex fibers are handled as
real spaces of twice the dimension, which turns the real dot product into
``Re <x, y>``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _polytope
from .conjugate import RandomFunctional
from .l0 import (AtomicSpace, AtomSet, DomainError, L0Scalar, PreconditionError,
                 _check_same_space)
from .module import RNElement

__all__ = [
    "Ball",
    "Hull",
    "ConvexBody",
    "PreconditionError",
    "NoSeparationError",
    "DISJOINT_TOL",
    "INTERIOR_TOL",
    "atom_distance",
    "hereditary_disjoint_stratification",
    "gauge",
    "contains",
    "support_function",
    "separate",
]

DISJOINT_TOL = 1e-12
INTERIOR_TOL = 1e-10
BISECT_TOL = 1e-10


class NoSeparationError(PreconditionError):
    """The bodies meet on every atom, so there is nothing to separate."""


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center)))
        if not self.radius >= 0:
            raise DomainError("ball radius must be nonnegative")


@dataclass(frozen=True, eq=False)
class Hull:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise DomainError("a hull needs a nonempty list of points")
        object.__setattr__(self, "points", pts)


def _realify(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return np.concatenate([v.real, v.imag], axis=-1)
    return v.astype(float)


class ConvexBody:
    """One ball or hull per atom, plus a flag for nonempty interior."""

    def __init__(self, space: AtomicSpace, pieces: Sequence[Ball | Hull], interior: bool = True):
        pieces = tuple(pieces)
        if len(pieces) != len(space):
            raise DomainError("need exactly one ball or hull per atom")
        dims = set()
        for p in pieces:
            if isinstance(p, Ball):
                dims.add(p.center.shape[0])
                arr = p.center
            elif isinstance(p, Hull):
                dims.add(p.points.shape[1])
                arr = p.points
            else:
                raise DomainError(f"unknown body piece {p!r}")
            if np.iscomplexobj(arr) and not space.is_complex:
                raise DomainError("complex body coordinates on a real space")
        if len(dims) != 1:
            raise DomainError("body pieces of different dimensions")
        self.space = space
        self.pieces = pieces
        self.dim = dims.pop()
        self.interior = interior

    @classmethod
    def ball(cls, space: AtomicSpace, center, radius: float, interior: bool = True):
        return cls(space, [Ball(np.asarray(center), radius)] * len(space), interior)

    @classmethod
    def hull(cls, space: AtomicSpace, points, interior: bool = True):
        return cls(space, [Hull(np.asarray(points))] * len(space), interior)

    def real_piece(self, a: int):
        """Piece ``a`` in real coordinates (complex fibers doubled)."""
        p = self.pieces[a]
        cplx = self.space.is_complex
        if isinstance(p, Ball):
            c = p.center.astype(complex) if cplx else p.center
            return Ball(_realify(c), p.radius)
        pts = p.points.astype(complex) if cplx else p.points
        return Hull(_realify(pts))

    def __repr__(self):
        return f"ConvexBody(dim={self.dim}, pieces={list(self.pieces)!r}, interior={self.interior})"


def _check_pair(G: ConvexBody, M: ConvexBody):
    _check_same_space(G.space, M.space)
    if G.dim != M.dim:
        raise DomainError(f"bodies of dimension {G.dim} and {M.dim}")


def _closest(g, m):
    """``(distance, p, q)`` with ``p`` in ``g``, ``q`` in ``m``; distance < 0 means overlap."""
    if isinstance(g, Ball) and isinstance(m, Ball):
        v = m.center - g.center
        nv = np.linalg.norm(v)
        if nv == 0:
            return -(g.radius + m.radius), g.center, g.center
        u = v / nv
        return nv - g.radius - m.radius, g.center + g.radius * u, m.center - m.radius * u
    if isinstance(g, Ball):
        delta, q = _polytope.distance_to_hull(g.center, m.points)
        if delta == 0:
            return -g.radius, q, q
        return delta - g.radius, g.center + g.radius * (q - g.center) / delta, q
    if isinstance(m, Ball):
        dist, q, p = _closest(m, g)
        return dist, p, q
    p, q = _polytope.hull_hull_closest(g.points, m.points)
    return float(np.linalg.norm(q - p)), p, q


def _map_atoms(fn: Callable[[int], object], n: int, jobs: int):
    if jobs > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, range(n)))
    return [fn(a) for a in range(n)]


def atom_distance(G: ConvexBody, M: ConvexBody, jobs: int = 1) -> L0Scalar:
    """Per-atom distance between the fibers (0 where they meet)."""
    _check_pair(G, M)
    res = _map_atoms(lambda a: _closest(G.real_piece(a), M.real_piece(a))[0], len(G.space), jobs)
    return L0Scalar(G.space, np.maximum(np.array(res, dtype=float), 0.0))


def hereditary_disjoint_stratification(G: ConvexBody, M: ConvexBody, jobs: int = 1) -> AtomSet:
    """Atoms on which the fibers of ``G`` and ``M`` are disjoint."""
    dist = atom_distance(G, M, jobs)
    return AtomSet.from_mask(G.space, dist.values > DISJOINT_TOL)


def _absorbent(piece) -> bool:
    if isinstance(piece, Ball):
        return piece.radius - np.linalg.norm(piece.center) > INTERIOR_TOL
    hs = _polytope.halfspaces(piece.points)
    return hs is not None and hs[1].min() > INTERIOR_TOL


def _has_interior(piece) -> bool:
    if isinstance(piece, Ball):
        return piece.radius > 0
    return _polytope.chebyshev_center(piece.points)[1] > INTERIOR_TOL


def _ball_gauge(b: Ball, x: np.ndarray) -> float:
    # smallest t > 0 with ||x - t c|| = t r
    xx = x @ x
    if xx == 0:
        return 0.0
    xc = x @ b.center
    a = b.radius ** 2 - b.center @ b.center
    disc = np.sqrt(xc * xc + a * xx)
    if xc >= 0:
        return float(xx / (xc + disc))
    return float((disc - xc) / a)


def _in_hull(P: np.ndarray, y: np.ndarray) -> bool:
    return not _polytope.outside_hull(y, P)


def _bisect_gauge(h: Hull, x: np.ndarray) -> float:
    if not np.any(x):
        return 0.0
    lo, hi = 0.0, 1.0
    while not _in_hull(h.points, x / hi):
        lo, hi = hi, 2 * hi
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if mid > 0 and _in_hull(h.points, x / mid):
            hi = mid
        else:
            lo = mid
    return hi


def gauge(B: ConvexBody, x: RNElement, method: str = "facets") -> L0Scalar:
    """Minkowski functional ``inf{t > 0 : x / t in B}`` atom-wise.

    Balls use the closed form. Hulls use their facet description
    ``A y <= b`` (``b > 0`` since 0 is interior), giving ``max_i a_i x / b_i``;
    ``method="bisection"`` instead bisects on ray membership decided by
    distance to the hull, to within ``1e-10``.
    """
    _check_same_space(B.space, x.space)
    if x.dim != B.dim:
        raise DomainError(f"element of dimension {x.dim} for a body of dimension {B.dim}")
    if method not in ("facets", "bisection"):
        raise DomainError(f"unknown gauge method {method!r}")
    out = np.empty(len(B.space))
    for a in range(len(B.space)):
        piece = B.real_piece(a)
        if not _absorbent(piece):
            raise PreconditionError(
                f"body is not absorbent on atom {B.space.atoms[a]!r}: 0 is not interior")
        xa = _realify(x.coords[a])
        if isinstance(piece, Ball):
            out[a] = _ball_gauge(piece, xa)
        elif method == "bisection":
            out[a] = _bisect_gauge(piece, xa)
        else:
            A, b = _polytope.halfspaces(piece.points)
            out[a] = max(0.0, float(np.max(A @ xa / b)))
    return L0Scalar(B.space, out)


def contains(B: ConvexBody, x: RNElement, tol: float = 1e-9) -> np.ndarray:
    """Boolean mask of atoms where ``x`` lies in ``B`` (up to ``tol``)."""
    _check_same_space(B.space, x.space)
    out = np.empty(len(B.space), dtype=bool)
    for a in range(len(B.space)):
        piece = B.real_piece(a)
        xa = _realify(x.coords[a])
        if isinstance(piece, Ball):
            out[a] = np.linalg.norm(xa - piece.center) <= piece.radius + tol
        else:
            out[a] = _polytope.distance_to_hull(xa, piece.points)[0] <= tol
    return out


def support_function(B: ConvexBody, u: RNElement) -> L0Scalar:
    """``sup { Re <x, u> : x in B }`` per atom."""
    _check_same_space(B.space, u.space)
    out = np.empty(len(B.space))
    for a in range(len(B.space)):
        piece = B.real_piece(a)
        ua = _realify(u.coords[a])
        if isinstance(piece, Ball):
            out[a] = piece.center @ ua + piece.radius * np.linalg.norm(ua)
        else:
            out[a] = np.max(piece.points @ ua)
    return L0Scalar(B.space, out)


def separate(G: ConvexBody, M: ConvexBody, jobs: int = 1) -> tuple[RandomFunctional, AtomSet]:
    """A functional ``f`` with ``Re f(x) <= Re f(y)`` for ``x`` in ``G``, ``y`` in ``M``.

    The inequality holds on ``H``, the atoms where the bodies are disjoint,
    and is strict for interior points of ``G``. The Riesz vector is the unit
    vector along the closest pair ``q - p`` on ``H`` and zero elsewhere.
    """
    _check_pair(G, M)
    if not G.interior:
        raise PreconditionError("G must be flagged as having nonempty interior")
    space = G.space
    for a in range(len(space)):
        if not _has_interior(G.real_piece(a)):
            raise PreconditionError(f"G has empty interior on atom {space.atoms[a]!r}")
    pairs = _map_atoms(lambda a: _closest(G.real_piece(a), M.real_piece(a)), len(space), jobs)
    d = G.dim
    coords = np.zeros((len(space), d), dtype=space.dtype)
    disjoint = np.zeros(len(space), dtype=bool)
    for a, (dist, p, q) in enumerate(pairs):
        if dist > DISJOINT_TOL:
            disjoint[a] = True
            u = (q - p) / np.linalg.norm(q - p)
            coords[a] = u[:d] + 1j * u[d:] if space.is_complex else u
    H = AtomSet.from_mask(space, disjoint)
    if H.measure() == 0:
        raise NoSeparationError("the bodies intersect on every atom")
    return RandomFunctional(RNElement(space, coords)), H
