"""Scalars over a finite atomic probability space.

Over an atomic space every measurable set is a union of atoms and an
a.s.-equivalence class of random variables is just one value per atom, so
``L0Scalar`` stores a plain numpy vector indexed by atom position.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "PreconditionError",
    "AtomicSpace",
    "AtomSet",
    "L0Scalar",
    "indicator",
    "pseudo_inverse",
    "sup",
    "leq",
    "gt_on",
    "bracket_gt",
]

PROB_RTOL = 1e-12


class DomainError(ValueError):
    """Operands outside the domain of an operation (shape, space, field)."""


class PreconditionError(ValueError):
    """Inputs violate an operation's precondition."""


class AtomicSpace:
    """A finite probability space given by atom identifiers and probabilities.

    :param atoms: Atom identifiers, unique, in a fixed order.
    :param probs: Positive probabilities summing to one.
    :param field: ``"real"`` or ``"complex"``, the scalar field of every
        quantity built over this space.
    """

    __slots__ = ("atoms", "probs", "field", "_index")

    def __init__(self, atoms: Sequence, probs: Sequence[float], field: str = "real",
                 *, rtol: float = PROB_RTOL):
        atoms = tuple(atoms)
        probs = np.array(probs, dtype=float)
        if len(atoms) == 0:
            raise DomainError("an atomic space needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise DomainError("atom identifiers must be unique")
        if probs.shape != (len(atoms),):
            raise DomainError("need exactly one probability per atom")
        if not np.all(probs > 0):
            raise DomainError("atom probabilities must be positive")
        if abs(probs.sum() - 1.0) > rtol * max(1.0, len(atoms)):
            raise DomainError(f"probabilities sum to {probs.sum()!r}, not 1")
        if field not in ("real", "complex"):
            raise DomainError(f"unknown field {field!r}")
        probs.flags.writeable = False
        self.atoms = atoms
        self.probs = probs
        self.field = field
        self._index = {a: i for i, a in enumerate(atoms)}

    @classmethod
    def uniform(cls, n: int, field: str = "real", prefix: str = "a") -> "AtomicSpace":
        """Space with atoms ``a1 .. an`` of equal mass."""
        return cls([f"{prefix}{i + 1}" for i in range(n)], np.full(n, 1.0 / n), field)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, AtomicSpace):
            return NotImplemented
        return (self.atoms == other.atoms and self.field == other.field
                and np.array_equal(self.probs, other.probs))

    def __hash__(self):
        return hash((self.atoms, self.field, self.probs.tobytes()))

    def __repr__(self):
        return f"AtomicSpace({list(self.atoms)!r}, {self.probs.tolist()!r}, field={self.field!r})"

    @property
    def is_complex(self) -> bool:
        return self.field == "complex"

    @property
    def dtype(self):
        return np.complex128 if self.is_complex else np.float64

    def index(self, atom) -> int:
        try:
            return self._index[atom]
        except KeyError:
            raise DomainError(f"unknown atom {atom!r}") from None

    # convenience constructors
    def scalar(self, values) -> "L0Scalar":
        return L0Scalar(self, values)

    def constant(self, value) -> "L0Scalar":
        return L0Scalar(self, np.full(len(self), value))

    def zero(self) -> "L0Scalar":
        return L0Scalar(self, np.zeros(len(self)))

    def one(self) -> "L0Scalar":
        return L0Scalar(self, np.ones(len(self)))

    def atomset(self, atoms: Iterable = ()) -> "AtomSet":
        return AtomSet(self, atoms)

    def everything(self) -> "AtomSet":
        return AtomSet(self, self.atoms)


def _check_same_space(*spaces: AtomicSpace) -> AtomicSpace:
    first = spaces[0]
    for s in spaces[1:]:
        if s is not first and s != first:
            raise DomainError("operands live on different atomic spaces")
    return first


class AtomSet:
    """A measurable set, i.e. a subset of the atoms of a space."""

    __slots__ = ("space", "members")

    def __init__(self, space: AtomicSpace, atoms: Iterable = ()):
        members = frozenset(atoms)
        for a in members:
            space.index(a)
        self.space = space
        self.members = members

    @classmethod
    def from_mask(cls, space: AtomicSpace, mask) -> "AtomSet":
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (len(space),):
            raise DomainError("mask length does not match the atom count")
        return cls(space, (a for a, m in zip(space.atoms, mask) if m))

    @property
    def mask(self) -> np.ndarray:
        return np.array([a in self.members for a in self.space.atoms], dtype=bool)

    def measure(self) -> float:
        return float(self.space.probs[self.mask].sum())

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        # space order, so that results are deterministic
        return (a for a in self.space.atoms if a in self.members)

    def __contains__(self, atom):
        return atom in self.members

    def __bool__(self):
        return bool(self.members)

    def __eq__(self, other):
        if isinstance(other, AtomSet):
            return self.space == other.space and self.members == other.members
        if isinstance(other, (set, frozenset)):
            return self.members == other
        return NotImplemented

    def __hash__(self):
        return hash(self.members)

    def _other(self, other: "AtomSet") -> frozenset:
        _check_same_space(self.space, other.space)
        return other.members

    def __and__(self, other):
        return AtomSet(self.space, self.members & self._other(other))

    def __or__(self, other):
        return AtomSet(self.space, self.members | self._other(other))

    def __sub__(self, other):
        return AtomSet(self.space, self.members - self._other(other))

    def __invert__(self):
        return AtomSet(self.space, set(self.space.atoms) - self.members)

    def __repr__(self):
        return "{" + ", ".join(map(str, self)) + "}"


def _as_values(space: AtomicSpace, values) -> np.ndarray:
    arr = np.array(values)
    if arr.ndim == 0:
        arr = np.full(len(space), arr.item())
    if arr.shape != (len(space),):
        raise DomainError(f"expected {len(space)} per-atom values, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        if not space.is_complex:
            raise DomainError("complex values on a real space")
        arr = arr.astype(np.complex128)
    else:
        arr = arr.astype(np.float64)
    return arr


class L0Scalar:
    """An element of L0(F, K): one scalar per atom.

    Values are stored as ``float64`` when real and ``complex128`` when
    complex; a complex space can still carry real-valued scalars such as
    norms, budgets and indicators. Instances are immutable.
    """

    __slots__ = ("space", "values")
    __array_priority__ = 1000

    def __init__(self, space: AtomicSpace, values):
        arr = _as_values(space, values)
        arr.flags.writeable = False
        self.space = space
        self.values = arr

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, atom):
        return self.values[self.space.index(atom)]

    def __repr__(self):
        return f"L0Scalar({self.values.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, L0Scalar):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.values, other.values)

    __hash__ = None

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, L0Scalar):
            _check_same_space(self.space, other.space)
            return other.values
        if np.isscalar(other):
            return other
        return NotImplemented

    def _wrap(self, values) -> "L0Scalar":
        return L0Scalar(self.space, values)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.values + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.values - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(o - self.values)

    def __mul__(self, other):
        # scalar * RNElement is handled by RNElement.__rmul__
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.values * o)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        # only division by plain numbers; use pseudo_inverse for random divisors
        if not np.isscalar(other):
            return NotImplemented
        return self._wrap(self.values / other)

    def __neg__(self):
        return self._wrap(-self.values)

    def __abs__(self):
        return self._wrap(np.abs(self.values))

    def conj(self) -> "L0Scalar":
        return self._wrap(np.conj(self.values))

    @property
    def real(self) -> "L0Scalar":
        return self._wrap(np.real(self.values))

    def restrict(self, A: AtomSet) -> "L0Scalar":
        """``indicator(A) * self``."""
        _check_same_space(self.space, A.space)
        return self._wrap(np.where(A.mask, self.values, 0))

    def require_real(self) -> np.ndarray:
        if not self.is_real:
            raise DomainError("operation needs real-valued scalars")
        return self.values


def indicator(space: AtomicSpace, A: AtomSet | Iterable) -> L0Scalar:
    """The class of the characteristic function of ``A``."""
    if not isinstance(A, AtomSet):
        A = AtomSet(space, A)
    _check_same_space(space, A.space)
    return L0Scalar(space, A.mask.astype(float))


def pseudo_inverse(xi: L0Scalar) -> L0Scalar:
    """Atom-wise reciprocal with ``0`` where the value is exactly zero.

    The zero test is exact, so ``xi * pseudo_inverse(xi)`` vanishes exactly
    off the support; on the support it equals ``1`` up to a few ulps, since
    the rounded reciprocal of some floats has no exact product with them.
    Threshold before calling if needed.
    """
    v = xi.values
    nz = v != 0
    out = np.zeros_like(v)
    out[nz] = 1.0 / v[nz]
    return L0Scalar(xi.space, out)


def sup(scalars: Iterable[L0Scalar]) -> L0Scalar:
    """Lattice supremum of a nonempty finite family of real scalars."""
    scalars = list(scalars)
    if not scalars:
        raise DomainError("supremum of an empty family")
    space = _check_same_space(*(s.space for s in scalars))
    stacked = np.stack([s.require_real() for s in scalars])
    return L0Scalar(space, stacked.max(axis=0))


def _real_pair(xi: L0Scalar, eta: L0Scalar):
    _check_same_space(xi.space, eta.space)
    return xi.require_real(), eta.require_real()


def leq(xi: L0Scalar, eta: L0Scalar) -> bool:
    """``xi <= eta`` a.s., i.e. on every atom."""
    a, b = _real_pair(xi, eta)
    return bool(np.all(a <= b))


def gt_on(xi: L0Scalar, eta: L0Scalar, A: AtomSet) -> bool:
    """``xi > eta`` on ``A``: strict inequality on every atom of ``A``."""
    a, b = _real_pair(xi, eta)
    _check_same_space(xi.space, A.space)
    m = A.mask
    return bool(np.all(a[m] > b[m]))


def bracket_gt(xi: L0Scalar, eta: L0Scalar) -> AtomSet:
    """The set ``[xi > eta]``."""
    a, b = _real_pair(xi, eta)
    return AtomSet.from_mask(xi.space, a > b)
