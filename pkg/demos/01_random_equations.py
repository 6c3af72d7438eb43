"""Random linear equations under a norm budget.

Two atoms. On ``a1`` the system is the planar one with minimum norm 5; on
``a2`` the two functionals coincide but ask for different values, so no
budget helps there. Raising the budget on ``a1`` cannot rescue ``a2``.
"""

import numpy as np

from rnmod import (AtomicSpace, HellyInstance, RandomFunctional, RNElement, certificate_gap,
                   check_condition, solve, sup_ratio_oracle)

space = AtomicSpace(["a1", "a2"], [0.5, 0.5])
f1 = RandomFunctional(RNElement(space, [[1, 0], [1, 0]]))
f2 = RandomFunctional(RNElement(space, [[0, 1], [1, 0]]))
targets = [space.scalar([3, 1]), space.scalar([4, 2])]

print("minimum norm per atom:", check_condition(HellyInstance([f1, f2], targets, space.one())).min_norm.values)
print("sampled sup ratio:    ", sup_ratio_oracle([f1, f2], targets, samples=20_000).values)

for beta in (4.9, 5.0):
    inst = HellyInstance([f1, f2], targets, space.scalar([beta, 100]))
    v = solve(inst)
    print(f"\nbudget {beta} on a1:", "feasible" if v.feasible else "infeasible")
    if not v.feasible:
        cert = v.certificate
        print("  lambda per atom:", np.array([l.values for l in cert.lambdas]).T.round(4).tolist())
        print("  violated on:", sorted(cert.violation_set))
        print("  gap |sum lam xi| - beta ||sum lam f||:",
              certificate_gap(inst.functionals, inst.targets, inst.budget, cert.lambdas).values.round(4))

# drop the contradictory atom by making the targets agree there
ok = solve(HellyInstance([f1, f2], [space.scalar([3, 1]), space.scalar([4, 1])], space.scalar([5, 1])))
print("\nconsistent targets, budget (5, 1):", ok.feasible, ok.solution.coords.tolist())
