"""Random normed modules over atomic probability spaces.

Scalars, the module L0(F, K^d), random functionals, random linear
equations under norm budgets, separation of L0-convex bodies, weak-star
neighborhoods and countable concatenation, all computed atom by atom.
"""

from .l0 import (AtomicSpace, AtomSet, DomainError, L0Scalar, PreconditionError, bracket_gt,
                 gt_on, indicator, leq, pseudo_inverse, sup)
from .module import RNElement, add, inner, norm, scalar_mul
from .conjugate import (BidualTarget, RandomFunctional, embed, evaluate, functional_norm,
                        sampled_functional_norm)
from .stratification import (InconsistencyError, Stratification, express_in_basis,
                             quasi_free_stratification, support)
from .helly import (Certificate, CertificateError, HellyInstance, HellyVerdict, certificate_gap,
                    check_condition, solve, solve_via_stratification, sup_ratio_oracle)
from .separation import (Ball, ConvexBody, Hull, NoSeparationError, gauge,
                         hereditary_disjoint_stratification, separate)
from .weak_star import (EpsLambdaNbhd, LocalNbhd, NotInUnitBidualBall, excluding_neighborhood,
                        goldstine_witness, in_eps_lambda_nbhd, in_local_nbhd)
from .concatenation import (DYADIC, DyadicSpace, FiniteSupportElement, LazyL0, NotInModule, Tail,
                            cc_norm, concatenate, counterexample_check, truncate_to_tolerance,
                            truncation_level)

__version__ = "0.1.0"
