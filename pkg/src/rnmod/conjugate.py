"""Random conjugate space: functionals through their Riesz vectors.

Because the ambient module is an RIP module, every a.e. bounded random
linear functional is ``x -> <x, y0>`` for a unique ``y0``; that vector is
the whole representation.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .l0 import DomainError, L0Scalar, _check_same_space
from .module import RNElement, inner, norm

__all__ = [
    "RandomFunctional",
    "BidualTarget",
    "evaluate",
    "functional_norm",
    "sampled_functional_norm",
    "embed",
]


class RandomFunctional:
    """``f(x) = <x, riesz>`` atom-wise.

    Module action ``xi * f`` stores ``conj(xi) * riesz`` so that evaluation
    stays a plain inner product: ``(xi f)(x) = xi f(x)``.
    """

    __slots__ = ("riesz",)

    def __init__(self, riesz: RNElement):
        if not isinstance(riesz, RNElement):
            raise DomainError("a functional is represented by an RNElement")
        self.riesz = riesz

    @property
    def space(self):
        return self.riesz.space

    @property
    def dim(self) -> int:
        return self.riesz.dim

    def __call__(self, x: RNElement) -> L0Scalar:
        return evaluate(self, x)

    def __add__(self, other):
        if not isinstance(other, RandomFunctional):
            return NotImplemented
        return RandomFunctional(self.riesz + other.riesz)

    def __sub__(self, other):
        if not isinstance(other, RandomFunctional):
            return NotImplemented
        return RandomFunctional(self.riesz - other.riesz)

    def __neg__(self):
        return RandomFunctional(-self.riesz)

    def __rmul__(self, xi):
        if isinstance(xi, L0Scalar):
            return RandomFunctional(xi.conj() * self.riesz)
        if np.isscalar(xi):
            return RandomFunctional(np.conj(xi) * self.riesz)
        return NotImplemented

    def restrict(self, A) -> "RandomFunctional":
        return RandomFunctional(self.riesz.restrict(A))

    def __eq__(self, other):
        if not isinstance(other, RandomFunctional):
            return NotImplemented
        return self.riesz == other.riesz

    __hash__ = None

    def __repr__(self):
        return f"RandomFunctional(riesz={self.riesz.coords.tolist()!r})"


class BidualTarget:
    """An element of E** seen through finitely many of its values.

    Holds functionals ``f_i`` and the scalars ``l(f_i)``; nothing in the
    density constructions needs more of the bidual element than this.
    """

    __slots__ = ("functionals", "targets")

    def __init__(self, functionals: Sequence[RandomFunctional], targets: Sequence[L0Scalar]):
        functionals = tuple(functionals)
        targets = tuple(targets)
        if len(functionals) != len(targets):
            raise DomainError("need one target value per functional")
        if not functionals:
            raise DomainError("empty bidual target")
        _check_same_space(*(f.space for f in functionals), *(t.space for t in targets))
        if len({f.dim for f in functionals}) != 1:
            raise DomainError("functionals of different dimensions")
        self.functionals = functionals
        self.targets = targets

    @classmethod
    def from_element(cls, z: RNElement, functionals: Sequence[RandomFunctional]) -> "BidualTarget":
        """The values of ``J(z)`` on the given functionals."""
        return cls(functionals, [evaluate(f, z) for f in functionals])

    @property
    def space(self):
        return self.functionals[0].space

    def __len__(self):
        return len(self.functionals)


def evaluate(f: RandomFunctional, x: RNElement) -> L0Scalar:
    return inner(x, f.riesz)


def functional_norm(f: RandomFunctional) -> L0Scalar:
    """``||f||*``; by Riesz representation the norm of the Riesz vector."""
    return norm(f.riesz)


def sampled_functional_norm(f: RandomFunctional, samples: int = 10_000,
                            rng: np.random.Generator | None = None) -> L0Scalar:
    """Lower estimate of ``||f||*`` straight from the supremum definition.

    Draws ``samples`` unit vectors per atom and keeps the largest ``|f(x)|``.
    Independent of :func:`functional_norm`, for cross-checking it.
    """
    rng = np.random.default_rng(rng)
    space = f.space
    shape = (samples, len(space), f.dim)
    x = rng.standard_normal(shape)
    if space.is_complex:
        x = x + 1j * rng.standard_normal(shape)
    x /= np.linalg.norm(x, axis=2, keepdims=True)
    vals = np.abs(np.einsum("sad,ad->sa", x, np.conj(f.riesz.coords)))
    return L0Scalar(space, vals.max(axis=0))


def embed(x: RNElement) -> Callable[[RandomFunctional], L0Scalar]:
    """The random natural embedding ``J(x)``: ``g -> g(x)``."""

    def jx(g: RandomFunctional) -> L0Scalar:
        return evaluate(g, x)

    jx.element = x
    return jx
