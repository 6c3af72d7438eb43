"""Small dense polytope routines in R^k.

Everything here works on real coordinates; complex fibers are realified by
the callers (C^d as R^2d, where the real dot product is ``Re <x, y>``).
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

MAX_ITER = 100_000


def min_norm_point(P: np.ndarray, tol: float = 1e-12, max_iter: int = MAX_ITER):
    """Minimum-norm point of ``conv(P)`` by Wolfe's algorithm.

    ``P`` has one point per row. Returns ``(x, weights)`` where ``weights``
    are convex weights over the rows with ``x = weights @ P``.
    """
    P = np.asarray(P, dtype=float)
    npts = P.shape[0]
    scale = max(float(np.max(np.einsum("ij,ij->i", P, P))), 1.0)
    start = int(np.argmin(np.einsum("ij,ij->i", P, P)))
    S = [start]
    w = np.array([1.0])
    x = P[start].copy()
    for _ in range(max_iter):
        # major cycle: the point of P most opposed to x
        j = int(np.argmin(P @ x))
        if x @ x - P[j] @ x <= tol * scale or j in S:
            break
        S.append(j)
        w = np.append(w, 0.0)
        while True:
            # minor cycle: affine minimizer over the corral
            # x = q0 + sum z_i (q_i - q0); least squares on the differences
            # rather than the Gram system keeps the conditioning unsquared
            Q = P[S]
            k = len(S)
            z = np.linalg.lstsq((Q[1:] - Q[0]).T, -Q[0], rcond=None)[0]
            v = np.concatenate([[1.0 - z.sum()], z])
            if np.all(v > 1e-14):
                w = v
                break
            neg = v <= 1e-14
            ratios = np.full(k, np.inf)
            ratios[neg] = w[neg] / (w[neg] - v[neg])
            hit = int(np.argmin(ratios))
            w = w + ratios[hit] * (v - w)
            keep = w > 1e-14
            keep[hit] = False
            S = [s for s, kp in zip(S, keep) if kp]
            w = w[keep]
            w = w / w.sum()
        x = w @ P[S]
    weights = np.zeros(npts)
    weights[S] = w
    return x, weights


def distance_to_hull(c: np.ndarray, P: np.ndarray):
    """Distance from ``c`` to ``conv(P)`` and the closest point."""
    x, _ = min_norm_point(P - c)
    return float(np.linalg.norm(x)), x + c


def outside_hull(c: np.ndarray, P: np.ndarray) -> bool:
    """Whether ``c`` lies outside ``conv(P)``, decided by a separating direction.

    The min-norm point ``x`` of ``conv(P - c)`` certifies ``c`` outside when
    ``(p - c) . x > 0`` for every vertex; no such ``x`` exists for ``c``
    inside, so interior points near the boundary are never rejected because
    of a small leftover ``x``.
    """
    D = P - c
    x, _ = min_norm_point(D)
    return bool(np.any(x)) and float(np.min(D @ x)) > 0


def hull_hull_closest(P: np.ndarray, Q: np.ndarray):
    """Closest pair ``(p, q)`` between ``conv(P)`` and ``conv(Q)``.

    Runs the min-norm-point search on the pairwise differences ``q_j - p_i``
    and reads the pair back from the convex weights.
    """
    diffs = (Q[None, :, :] - P[:, None, :]).reshape(-1, P.shape[1])
    _, w = min_norm_point(diffs)
    W = w.reshape(P.shape[0], Q.shape[0])
    p = W.sum(axis=1) @ P
    q = W.sum(axis=0) @ Q
    return p, q


def halfspaces(P: np.ndarray):
    """Facets of ``conv(P)`` as ``(A, b)`` with unit normals: ``A x <= b``.

    Returns ``None`` when the hull has empty interior.
    """
    P = np.asarray(P, dtype=float)
    k = P.shape[1]
    if k == 1:
        lo, hi = P[:, 0].min(), P[:, 0].max()
        if hi <= lo:
            return None
        return np.array([[1.0], [-1.0]]), np.array([hi, -lo])
    if P.shape[0] <= k:
        return None
    try:
        hull = ConvexHull(P)
    except QhullError:
        return None
    A = hull.equations[:, :-1]
    b = -hull.equations[:, -1]
    return A, b


def chebyshev_center(P: np.ndarray):
    """Center and radius of the largest ball inside ``conv(P)``.

    Returns ``(None, 0.0)`` for flat hulls.
    """
    hs = halfspaces(P)
    if hs is None:
        return None, 0.0
    A, b = hs
    k = A.shape[1]
    # maximize r subject to A c + r ||a_i|| <= b, with unit normals
    cost = np.zeros(k + 1)
    cost[-1] = -1.0
    A_ub = np.hstack([A, np.ones((A.shape[0], 1))])
    res = linprog(cost, A_ub=A_ub, b_ub=b, bounds=[(None, None)] * k + [(0, None)],
                  method="highs")
    if res.status != 0:
        return None, 0.0
    return res.x[:k], float(res.x[-1])
