"""Splitting a family of random functionals into constant-rank strata.

On each atom the family spans a subspace of some dimension; the atoms are
grouped by that rank, and inside a stratum every member of the family is a
combination of the chosen basis.
"""

import numpy as np

from rnmod import AtomicSpace, RandomFunctional, RNElement, express_in_basis, quasi_free_stratification

space = AtomicSpace.uniform(4)
fam = [
    RandomFunctional(RNElement(space, [[1, 0, 0], [0, 0, 0], [1, 1, 0], [1, 0, 0]])),
    RandomFunctional(RNElement(space, [[0, 1, 0], [0, 0, 0], [2, 2, 0], [0, 1, 0]])),
    RandomFunctional(RNElement(space, [[1, 1, 0], [0, 0, 0], [0, 0, 1], [0, 0, 1]])),
]
st = quasi_free_stratification(fam)
print("rank per atom:", st.ranks.tolist())
for r in st.nonempty():
    print(f"rank {r}: atoms {sorted(st.parts[r])}")
for r, basis in st.bases.items():
    print(f"\nbasis on the rank-{r} stratum:")
    for g in basis:
        print("  ", g.riesz.coords.tolist())
    for k, f in enumerate(fam):
        eta = express_in_basis(f, st, r)
        print(f"  f{k + 1} coefficients:", [np.round(e.values, 3).tolist() for e in eta])
