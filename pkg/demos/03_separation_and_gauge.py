"""Separating two L0-convex bodies and measuring a Minkowski gauge.

``G`` is the unit ball on both atoms. ``M`` is a point far away on ``a1``
and a point inside the ball on ``a2``. Separation is possible exactly on
``a1``; the functional found there vanishes on ``a2``.
"""

import numpy as np

from rnmod import AtomicSpace, Ball, ConvexBody, Hull, RNElement, gauge, norm, separate

space = AtomicSpace(["a1", "a2"], [0.5, 0.5])
G = ConvexBody.ball(space, [0, 0], 1.0)
M = ConvexBody(space, [Hull([[3, 0]]), Hull([[0.5, 0]])])
f, H = separate(G, M)
print("separated on:", sorted(H))
print("functional (Riesz vector per atom):", f.riesz.coords.round(6).tolist())

x = RNElement(space, [[1, 1], [0.3, -0.4]])
square = ConvexBody.hull(space, [[1, 1], [1, -1], [-1, 1], [-1, -1]])
print("\nx =", x.coords.tolist())
print("gauge of the square (max-norm):", gauge(square, x).values)
print("gauge of the unit ball:        ", gauge(G, x).values)
print("Euclidean norm:                ", norm(x).values)
print("bisection cross-check:         ", np.round(gauge(square, x, method="bisection").values, 8))
