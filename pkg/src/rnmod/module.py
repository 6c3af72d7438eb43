"""The RIP module L0(F, K^d) with the atom-wise Euclidean structure."""

from __future__ import annotations

import numpy as np

from .l0 import AtomicSpace, AtomSet, DomainError, L0Scalar, _check_same_space

__all__ = ["RNElement", "add", "scalar_mul", "inner", "norm"]


class RNElement:
    """One d-vector per atom.

    ``coords`` has shape ``(atoms, d)``. Arithmetic is atom-wise: ``x + y``,
    ``xi * x`` for an :class:`L0Scalar` or a number, ``-x``.
    """

    __slots__ = ("space", "coords")
    __array_priority__ = 1000

    def __init__(self, space: AtomicSpace, coords):
        arr = np.array(coords)
        if arr.ndim != 2 or arr.shape[0] != len(space) or arr.shape[1] < 1:
            raise DomainError(f"coords must have shape ({len(space)}, d), got {arr.shape}")
        if np.iscomplexobj(arr):
            if not space.is_complex:
                raise DomainError("complex coordinates on a real space")
        arr = arr.astype(space.dtype)
        arr.flags.writeable = False
        self.space = space
        self.coords = arr

    @classmethod
    def zeros(cls, space: AtomicSpace, dim: int) -> "RNElement":
        return cls(space, np.zeros((len(space), dim), dtype=space.dtype))

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def __getitem__(self, atom) -> np.ndarray:
        return self.coords[self.space.index(atom)]

    def __repr__(self):
        return f"RNElement(dim={self.dim}, coords={self.coords.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, RNElement):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.coords, other.coords)

    __hash__ = None

    def _check(self, other: "RNElement"):
        if not isinstance(other, RNElement):
            raise DomainError(f"expected RNElement, got {type(other).__name__}")
        _check_same_space(self.space, other.space)
        if other.dim != self.dim:
            raise DomainError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, RNElement):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, RNElement):
            return NotImplemented
        self._check(other)
        return RNElement(self.space, self.coords - other.coords)

    def __neg__(self):
        return RNElement(self.space, -self.coords)

    def __rmul__(self, other):
        if isinstance(other, L0Scalar):
            return scalar_mul(other, self)
        if np.isscalar(other):
            return RNElement(self.space, other * self.coords)
        return NotImplemented

    __mul__ = __rmul__

    def restrict(self, A: AtomSet) -> "RNElement":
        _check_same_space(self.space, A.space)
        return RNElement(self.space, np.where(A.mask[:, None], self.coords, 0))

    def is_null(self) -> bool:
        return not np.any(self.coords)


def add(x: RNElement, y: RNElement) -> RNElement:
    x._check(y)
    return RNElement(x.space, x.coords + y.coords)


def scalar_mul(xi: L0Scalar, x: RNElement) -> RNElement:
    _check_same_space(xi.space, x.space)
    return RNElement(x.space, xi.values[:, None] * x.coords)


def inner(x: RNElement, y: RNElement) -> L0Scalar:
    """Random inner product, conjugate-linear in the second slot."""
    x._check(y)
    return L0Scalar(x.space, np.einsum("ad,ad->a", x.coords, np.conj(y.coords)))


def norm(x: RNElement) -> L0Scalar:
    # scale by the largest entry so tiny or huge vectors neither underflow nor overflow
    big = np.abs(x.coords).max(axis=1)
    safe = np.where(big > 0, big, 1.0)
    return L0Scalar(x.space, big * np.linalg.norm(x.coords / safe[:, None], axis=1))
