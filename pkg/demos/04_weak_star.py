"""Weak-star neighborhoods of the conjugate module.

A functional with norm above 1 on some atom is cut off from the unit ball
by an (eps, lambda)-neighborhood built from a single element. Conversely,
any functional values realizable by a point of the bidual unit ball are
approximated by an element of norm at most 1.
"""

import numpy as np

from rnmod import (AtomicSpace, BidualTarget, RandomFunctional, RNElement, excluding_neighborhood,
                   functional_norm, goldstine_witness, in_eps_lambda_nbhd, norm)

space = AtomicSpace(["a1", "a2"], [0.5, 0.5])
g = RandomFunctional(RNElement(space, [[1.2, 0], [0.5, 0]]))
print("||g|| per atom:", functional_norm(g).values)
x, nb = excluding_neighborhood(g)
print(f"anchor {x.coords.tolist()}, eps {nb.eps:.4f}, lambda {nb.lam:.4f}")

rng = np.random.default_rng(0)
hits = 0
for _ in range(5000):
    h = RandomFunctional(RNElement(space, rng.standard_normal((2, 2))))
    h = space.scalar(rng.uniform(0, 1, 2) / functional_norm(h).values) * h
    hits += in_eps_lambda_nbhd(h, g, nb)
print("unit-ball functionals inside the neighborhood:", hits, "of 5000")

fs = [RandomFunctional(RNElement(space, [[1, 0], [0, 1]])),
      RandomFunctional(RNElement(space, [[1, 1], [2, 0]]))]
bt = BidualTarget.from_element(RNElement(space, [[0.6, 0.8], [0, 1]]), fs)
for eps in (0.5, 1e-3):
    w = goldstine_witness(bt, space.constant(eps))
    errs = [np.abs(f(w).values - t.values).max() for f, t in zip(bt.functionals, bt.targets)]
    print(f"\neps={eps}: witness norm {norm(w).values.round(6)}, max error {max(errs):.3g}")
