"""Countable concatenation over finite and countably-atomic spaces.

On a finite atomic space every gluing ``sum_k I_{A_k} x_k`` along a
partition is again an element, so concatenation always succeeds. The
interesting case is the dyadic space with atoms
``A_n = [2^-(n+1), 2^-n]`` of mass ``2^-(n+1)``, carrying the module of
finitely supported scalar sequences. That module is not closed under
countable gluing: gluing ``I_{A_n}`` over all ``n`` gives the constant 1,
which has infinite support. Infinite families are described by a finite
head plus a :class:`Tail`, so membership is decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .conjugate import RandomFunctional
from .helly import HellyInstance, solve
from .l0 import AtomicSpace, AtomSet, DomainError, L0Scalar, _check_same_space
from .module import RNElement, norm

__all__ = [
    "DyadicSpace",
    "DYADIC",
    "FiniteSupportElement",
    "Tail",
    "LazyL0",
    "NotInModule",
    "concatenate",
    "cc_norm",
    "truncation_level",
    "truncate_to_tolerance",
    "CounterexampleReport",
    "counterexample_check",
]

WITNESS_LENGTH = 10


class DyadicSpace:
    """Atoms ``A_n = [2^-(n+1), 2^-n]``, ``n >= 0``, never materialized."""

    def prob(self, n: int) -> float:
        if n < 0:
            raise DomainError("dyadic atoms are indexed from 0")
        return 2.0 ** -(n + 1)

    def interval(self, n: int) -> tuple[float, float]:
        return 2.0 ** -(n + 1), 2.0 ** -n

    def tail_measure(self, N: int) -> float:
        """Mass of the atoms with index ``> N``."""
        return 2.0 ** -(N + 1)

    def truncation(self, N: int, field: str = "complex") -> AtomicSpace:
        """Finite space ``A_0 .. A_N`` where ``A_N`` absorbs ``[0, 2^-N]``."""
        if N < 0:
            raise DomainError("truncation level must be nonnegative")
        probs = [self.prob(n) for n in range(N)] + [2.0 ** -N]
        return AtomicSpace([f"A{n}" for n in range(N + 1)], probs, field)

    def __repr__(self):
        return "DyadicSpace()"


DYADIC = DyadicSpace()


class FiniteSupportElement:
    """A scalar sequence over the dyadic atoms with finitely many nonzeros."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[int, complex] | None = None):
        clean = {}
        for n, v in (values or {}).items():
            n = int(n)
            if n < 0:
                raise DomainError("dyadic atoms are indexed from 0")
            if v != 0:
                clean[n] = v
        self._values = dict(sorted(clean.items()))

    @classmethod
    def indicator(cls, atoms: Iterable[int]) -> "FiniteSupportElement":
        return cls({n: 1.0 for n in atoms})

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._values)

    def items(self):
        return self._values.items()

    def __getitem__(self, n: int):
        return self._values.get(n, 0.0)

    def __call__(self, n: int):
        return self[n]

    def __eq__(self, other):
        if not isinstance(other, FiniteSupportElement):
            return NotImplemented
        return self._values == other._values

    __hash__ = None

    def __add__(self, other):
        keys = self.support | other.support
        return FiniteSupportElement({n: self[n] + other[n] for n in keys})

    def __mul__(self, other):
        if isinstance(other, FiniteSupportElement):
            return FiniteSupportElement({n: v * other[n] for n, v in self.items()})
        return FiniteSupportElement({n: v * other for n, v in self.items()})

    __rmul__ = __mul__

    def __abs__(self):
        return FiniteSupportElement({n: abs(v) for n, v in self.items()})

    def restrict(self, atoms: Iterable[int]) -> "FiniteSupportElement":
        atoms = set(atoms)
        return FiniteSupportElement({n: v for n, v in self.items() if n in atoms})

    def __repr__(self):
        return f"FiniteSupportElement({self._values!r})"


@dataclass(frozen=True)
class Tail:
    """How a dyadic family continues past a finite head.

    Atoms ``n >= start`` are either one block glued with ``block``, or
    singleton pieces ``{n}`` glued with the value ``sum_j coeffs[j] n^j``.
    """

    start: int
    coeffs: tuple = (0.0,)
    block: FiniteSupportElement | None = None

    def value(self, n: int):
        if self.block is not None:
            return self.block[n]
        return sum(c * n ** j for j, c in enumerate(self.coeffs))

    @property
    def finitely_supported(self) -> bool:
        return self.block is not None or not any(self.coeffs)


class LazyL0:
    """A scalar sequence over the dyadic atoms, evaluated on demand."""

    def __init__(self, rule: Callable[[int], complex], support_bound: int | None = None):
        self._rule = rule
        #: every index above this is zero; ``None`` when no such bound exists
        self.support_bound = support_bound

    def __getitem__(self, n: int):
        if n < 0:
            raise DomainError("dyadic atoms are indexed from 0")
        if self.support_bound is not None and n > self.support_bound:
            return 0.0
        return self._rule(n)

    def at(self, indices: Iterable[int]) -> np.ndarray:
        return np.array([self[n] for n in indices])

    def __abs__(self):
        return LazyL0(lambda n: abs(self[n]), self.support_bound)

    def to_finite(self) -> FiniteSupportElement:
        if self.support_bound is None:
            raise DomainError("sequence is not finitely supported")
        return FiniteSupportElement({n: self[n] for n in range(self.support_bound + 1)})


@dataclass(frozen=True, eq=False)
class NotInModule:
    """A gluing that leaves the finitely supported module.

    ``witness`` lists the first indices of an infinite run of atoms where the
    glued value is nonzero; ``tag`` names the pattern that proves the run
    never ends.
    """

    witness: tuple[int, ...]
    tag: str
    glued: LazyL0 = field(repr=False)

    def __bool__(self):
        return False


def _glue_finite(partition: Sequence[AtomSet], elems: Sequence):
    space = partition[0].space
    _check_same_space(*(A.space for A in partition), *(e.space for e in elems))
    masks = np.stack([A.mask for A in partition])
    if np.any(masks.sum(axis=0) != 1):
        raise DomainError("partition pieces must be disjoint and cover every atom")
    piece = masks.argmax(axis=0)
    if all(isinstance(e, RNElement) for e in elems):
        coords = np.stack([e.coords for e in elems])[piece, np.arange(len(space))]
        return RNElement(space, coords)
    if all(isinstance(e, L0Scalar) for e in elems):
        vals = np.stack([e.values for e in elems])[piece, np.arange(len(space))]
        return L0Scalar(space, vals)
    raise DomainError("gluing needs elements of one kind (RNElement or L0Scalar)")


def _dyadic_glue(partition: Sequence[Iterable[int]], elems: Sequence[FiniteSupportElement],
                 tail: Tail) -> tuple[LazyL0, int | None]:
    owner: dict[int, int] = {}
    for k, piece in enumerate(partition):
        for n in piece:
            n = int(n)
            if n in owner:
                raise DomainError(f"atom {n} lies in two partition pieces")
            if n >= tail.start:
                raise DomainError(f"atom {n} is claimed by a head piece and by the tail")
            owner[n] = k
    missing = set(range(tail.start)) - set(owner)
    if missing:
        raise DomainError(f"partition misses atoms {sorted(missing)[:10]}")

    def rule(n: int):
        if n < tail.start:
            return elems[owner[n]][n]
        return tail.value(n)

    if not tail.finitely_supported:
        bound = None
    else:
        last = [n for n in range(tail.start) if rule(n) != 0]
        if tail.block is not None:
            last += [n for n in tail.block.support if n >= tail.start]
        bound = max(last, default=-1)
    return LazyL0(rule, bound), bound


def concatenate(partition: Sequence, elems: Sequence, tail: Tail | None = None):
    """Glue ``elems[k]`` along ``partition[k]``.

    With :class:`AtomSet` pieces on a finite space this returns the glued
    :class:`RNElement` or :class:`L0Scalar`. With pieces given as sets of
    dyadic indices, ``tail`` describes the rest of the partition and the
    result is a :class:`FiniteSupportElement` or a :class:`NotInModule`.
    """
    partition = list(partition)
    elems = list(elems)
    if len(partition) != len(elems):
        raise DomainError("need one element per partition piece")
    if partition and isinstance(partition[0], AtomSet):
        if tail is not None:
            raise DomainError("a finite space has no tail")
        return _glue_finite(partition, elems)
    if tail is None:
        raise DomainError("a countable partition needs a tail description")
    glued, bound = _dyadic_glue(partition, elems, tail)
    if bound is not None:
        return glued.to_finite()
    witness = []
    n = tail.start
    while len(witness) < WITNESS_LENGTH:
        if glued[n] != 0:
            witness.append(n)
        n += 1
    tag = "constant-tail" if len(tail.coeffs) == 1 else "polynomial-tail"
    return NotInModule(tuple(witness), tag, glued)


def cc_norm(partition: Sequence, elems: Sequence, tail: Tail | None = None):
    """Norm of the glued element, ``||x_k||`` on piece ``k``.

    A plain :class:`L0Scalar` on a finite space; a :class:`LazyL0` on the
    dyadic space, defined whether or not the gluing stays in the module.
    """
    partition = list(partition)
    if partition and isinstance(partition[0], AtomSet):
        glued = concatenate(partition, elems)
        return norm(glued) if isinstance(glued, RNElement) else abs(glued)
    if tail is None:
        raise DomainError("a countable partition needs a tail description")
    glued, _ = _dyadic_glue(partition, list(elems), tail)
    return abs(glued)


def truncation_level(lam: float) -> int:
    """Smallest ``N`` with tail mass ``2^-(N+1) <= lam``."""
    if not 0 < lam < 1:
        raise DomainError("lam must lie in (0, 1)")
    N = max(0, math.ceil(-math.log2(lam)) - 2)
    while DYADIC.tail_measure(N) > lam:
        N += 1
    while N > 0 and DYADIC.tail_measure(N - 1) <= lam:
        N -= 1
    return N


def truncate_to_tolerance(x_cc, eps: float, lam: float) -> FiniteSupportElement:
    """Finitely supported ``x`` with ``P([|x - x_cc| >= eps]) <= lam``.

    ``x`` agrees with ``x_cc`` on atoms ``0 .. N`` and vanishes beyond, where
    ``N`` is the smallest level whose tail mass is at most ``lam``; the
    disagreement set is inside that tail.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    N = truncation_level(lam)
    if isinstance(x_cc, FiniteSupportElement):
        if all(n <= N for n in x_cc.support):
            return x_cc
        return x_cc.restrict(range(N + 1))
    return FiniteSupportElement({n: x_cc[n] for n in range(N + 1)})


@dataclass
class CounterexampleReport:
    """Outcome of the check that solvability needs countable concatenation."""

    condition_holds: int
    condition_samples: int
    residuals: dict[int, float]
    glued_target: NotInModule | FiniteSupportElement
    truncations: dict[int, bool]

    @property
    def condition_ok(self) -> bool:
        return self.condition_holds == self.condition_samples

    @property
    def unsolvable_ok(self) -> bool:
        return (all(r == 1 for r in self.residuals.values())
                and isinstance(self.glued_target, NotInModule))

    @property
    def truncations_ok(self) -> bool:
        return all(self.truncations.values())

    @property
    def passed(self) -> bool:
        return self.condition_ok and self.unsolvable_ok and self.truncations_ok

    def as_dict(self) -> dict:
        g = self.glued_target
        return {
            "condition": {"holds": self.condition_holds, "samples": self.condition_samples,
                          "ok": self.condition_ok},
            "unsolvable": {
                "residual_next_atom": {str(k): v for k, v in self.residuals.items()},
                "glued_target": ({"in_module": False, "witness": list(g.witness), "tag": g.tag}
                                 if isinstance(g, NotInModule) else {"in_module": True}),
                "ok": self.unsolvable_ok,
            },
            "truncations": {"feasible": {str(k): v for k, v in self.truncations.items()},
                            "ok": self.truncations_ok},
            "passed": self.passed,
        }


def _random_finite(rng: np.random.Generator, cap: int) -> FiniteSupportElement:
    size = int(rng.integers(0, cap + 1))
    idx = rng.choice(cap * 2, size=size, replace=False)
    vals = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return FiniteSupportElement(dict(zip(idx.tolist(), vals.tolist())))


def counterexample_check(samples: int = 1000, seed: int = 0, max_truncation: int = 20,
                         support_cap: int = 8) -> CounterexampleReport:
    """Run the three checks on the module of finitely supported sequences.

    With ``f(eta) = eta`` and ``xi = beta = 1``:

    * for random finitely supported ``lam`` (the first one zero),
      ``|lam xi| = beta ||lam f||`` on every atom;
    * no finitely supported ``x`` solves ``f(x) = xi``: whatever ``x`` does on
      atoms ``0 .. N``, the residual on atom ``N + 1`` is 1, and gluing
      ``I_{A_n}`` over all ``n`` leaves the module;
    * on every finite truncation the same data is solvable.
    """
    rng = np.random.default_rng(seed)
    one = LazyL0(lambda n: 1.0)
    holds = 0
    for s in range(samples):
        lam = FiniteSupportElement() if s == 0 else _random_finite(rng, support_cap)
        probe = range(max(lam.support, default=0) + 3)
        lhs = np.array([abs(lam[n] * one[n]) for n in probe])
        # ||lam f||* at atom n: sup of |lam eta| over unit eta, attained at eta = I_{A_n}
        tests = [FiniteSupportElement.indicator([k]) for k in probe]
        fnorm = np.array([max(abs(lam[n] * t[n]) for t in tests) for n in probe])
        rhs = np.array([one[n] for n in probe]) * fnorm
        if np.all(lhs == rhs):
            holds += 1

    residuals = {}
    for N in range(max_truncation + 1):
        # best candidate on atoms 0..N is xi itself; f(x) = x there
        x = FiniteSupportElement({n: one[n] for n in range(N + 1)})
        residuals[N] = float(abs(one[N + 1] - x[N + 1]))
    glued = concatenate([], [], Tail(0, (1.0,)))

    truncations = {}
    for N in range(1, max_truncation + 1):
        space = DYADIC.truncation(N, "complex")
        f = RandomFunctional(RNElement(space, np.ones((len(space), 1), dtype=complex)))
        verdict = solve(HellyInstance([f], [space.one()], space.one()))
        truncations[N] = bool(verdict.feasible
                              and np.allclose(verdict.solution.coords[:, 0], 1, rtol=0, atol=1e-12))
    return CounterexampleReport(holds, samples, residuals, glued, truncations)
