"""Weak-star neighborhoods on E* and the constructions behind density.

Two kinds of basic neighborhoods of a functional ``c``:

* (eps, lam): ``P([|(g - c)(x_i)| < eps]) > 1 - lam`` for every anchor;
* locally L0-convex: ``|(g - c)(x_i)| < eps`` on every atom, ``eps`` random.

The closedness of the unit ball of E* and the density of J(E(1)) in
E**(1) both reduce to solving random linear equations under a budget;
:func:`excluding_neighborhood` and :func:`goldstine_witness` carry out
those constructions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conjugate import BidualTarget, RandomFunctional, evaluate, functional_norm
from .helly import Certificate, HellyInstance, solve
from .l0 import (AtomSet, DomainError, L0Scalar, PreconditionError, _check_same_space,
                 indicator, sup)
from .module import RNElement, norm

__all__ = [
    "EpsLambdaNbhd",
    "LocalNbhd",
    "NotInUnitBidualBall",
    "in_eps_lambda_nbhd",
    "in_local_nbhd",
    "excluding_neighborhood",
    "goldstine_witness",
    "goldstine_scale",
    "EXCESS_TOL",
]

EXCESS_TOL = 1e-9


class NotInUnitBidualBall(PreconditionError):
    """The observed values cannot come from an element of norm at most 1."""

    def __init__(self, msg: str, certificate: Certificate | None = None):
        super().__init__(msg)
        self.certificate = certificate


@dataclass(frozen=True, eq=False)
class EpsLambdaNbhd:
    anchors: tuple[RNElement, ...]
    eps: float
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(self.anchors))
        if not self.eps > 0:
            raise DomainError("eps must be positive")
        if not 0 < self.lam < 1:
            raise DomainError("lam must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class LocalNbhd:
    anchors: tuple[RNElement, ...]
    eps: L0Scalar

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(self.anchors))
        if not np.all(self.eps.require_real() > 0):
            raise DomainError("eps must be positive on every atom")


def _deviations(g: RandomFunctional, center: RandomFunctional, anchors):
    _check_same_space(g.space, center.space, *(x.space for x in anchors))
    diff = g - center
    return [np.abs(evaluate(diff, x).values) for x in anchors]


def in_eps_lambda_nbhd(g: RandomFunctional, center: RandomFunctional, nb: EpsLambdaNbhd) -> bool:
    probs = g.space.probs
    return all(probs[dev < nb.eps].sum() > 1 - nb.lam
               for dev in _deviations(g, center, nb.anchors))


def in_local_nbhd(g: RandomFunctional, center: RandomFunctional, nb: LocalNbhd) -> bool:
    _check_same_space(g.space, nb.eps.space)
    return all(np.all(dev < nb.eps.values) for dev in _deviations(g, center, nb.anchors))


def excluding_neighborhood(g: RandomFunctional) -> tuple[RNElement, EpsLambdaNbhd]:
    """An (eps, lam)-neighborhood of ``g`` missing the unit ball of E*.

    ``A`` collects the atoms with ``||g||* > 1 + 1e-9`` and ``delta`` is half
    the smallest excess there, so ``||g||* > 1 + delta`` on ``A``. The anchor
    ``x`` solves ``g(x) = I_A ||g||*`` with ``||x|| <= (1 + delta/2) I_A``;
    the neighborhood is ``N_g(x, delta/2, P(A)/2)``.
    """
    space = g.space
    gn = functional_norm(g)
    excess = gn.values - 1
    A = AtomSet.from_mask(space, excess > EXCESS_TOL)
    if not A:
        raise PreconditionError("functional lies in the unit ball of E*")
    delta = float(excess[A.mask].min() / 2)
    ind = indicator(space, A)
    verdict = solve(HellyInstance([g], [ind * gn], (1 + delta / 2) * ind))
    if not verdict.feasible:
        raise RuntimeError("anchor equation unexpectedly infeasible")
    x = verdict.solution
    return x, EpsLambdaNbhd((x,), delta / 2, A.measure() / 2)


def goldstine_scale(gamma: L0Scalar, eps: L0Scalar) -> L0Scalar:
    """``gamma * (gamma + eps/2)^-1``, strictly below 1 for ``eps > 0``."""
    return L0Scalar(gamma.space, gamma.values / (gamma.values + eps.values / 2))


def goldstine_witness(bt: BidualTarget, eps: L0Scalar) -> RNElement:
    """``x`` in the unit ball with ``|f_i(x) - l(f_i)| < eps`` for all ``i``.

    First ``x0`` is the minimum-norm solution of ``f_i(x0) = l(f_i)``, whose
    norm is at most 1 exactly when the values are realizable in the unit
    ball; then ``x = gamma (gamma + eps/2)^-1 x0`` with
    ``gamma = sup_i ||f_i||* v 1``.
    """
    _check_same_space(bt.space, eps.space)
    if not np.all(eps.require_real() > 0):
        raise DomainError("eps must be positive on every atom")
    space = bt.space
    inst = HellyInstance(bt.functionals, bt.targets, space.one())
    verdict = solve(inst)
    if not verdict.feasible:
        raise NotInUnitBidualBall("targets are not attained within the unit ball",
                                  verdict.certificate)
    x0 = verdict.solution
    # the feasibility test admits a 1e-9 overshoot; pull it back inside the ball
    n0 = norm(x0).values
    x0 = L0Scalar(space, np.where(n0 > 1, 1 / np.where(n0 > 1, n0, 1), 1.0)) * x0
    gamma = sup([functional_norm(f) for f in bt.functionals] + [space.one()])
    return goldstine_scale(gamma, eps) * x0
