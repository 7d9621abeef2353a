"""Finite groups, finite abelian groups, actions and equivariant modules.

Elements are always their integer indices. Group tables use index 0 for the
identity; abelian groups list their elements as residue tuples in
lexicographic order, so the zero element is index 0 as well.
"""

from __future__ import annotations

import itertools
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from gammacat.errors import (
    IdentityActsNontrivially,
    ModuleMismatch,
    NoIdentity,
    NoInverse,
    NotAnAction,
    NotAssociative,
    NotBijective,
    NotClosed,
    NotEquivariant,
    NotHomomorphic,
    ShapeError,
)

__all__ = [
    "FiniteGroup",
    "FiniteAbelianGroup",
    "AutAction",
    "EquivariantModule",
    "validate_group",
    "validate_action",
    "validate_equivariant_module",
    "cyclic_group",
    "make_action",
    "trivial_action",
]


def _frozen(arr) -> np.ndarray:
    arr = np.array(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def _as_int_array(data, ndim, what) -> np.ndarray:
    try:
        arr = np.asarray(data)
    except (ValueError, TypeError) as exc:  # ragged nesting
        raise ShapeError(f"{what}: not a rectangular array ({exc})") from None
    if arr.dtype == object or arr.ndim != ndim:
        raise ShapeError(f"{what}: expected a {ndim}-dimensional integer array, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if np.issubdtype(arr.dtype, np.floating) and np.all(np.mod(arr, 1) == 0):
            arr = arr.astype(np.int64)
        else:
            raise ShapeError(f"{what}: entries must be integers")
    return arr.astype(np.int64)


class FiniteGroup:
    """A finite group given by its Cayley table, identity at index 0."""

    def __init__(self, table, inverse, labels=None):
        self.table = _frozen(table)
        self.inverse = _frozen(inverse)
        self.order = int(self.table.shape[0])
        self.labels = tuple(range(self.order)) if labels is None else tuple(labels)

    identity = 0

    @property
    def op_table(self) -> np.ndarray:
        return self.table

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


class FiniteAbelianGroup:
    """Z/d1 x ... x Z/dk in invariant-factor form (d1 | d2 | ... | dk)."""

    def __init__(self, invariant_factors: Sequence[int] = ()):
        factors = tuple(int(d) for d in invariant_factors)
        for i, d in enumerate(factors):
            if d < 2:
                raise ShapeError(f"invariant factor {d} at position {i} is < 2")
            if i + 1 < len(factors) and factors[i + 1] % d:
                raise ShapeError(f"invariant factors must form a divisor chain: {factors}")
        self.invariant_factors = factors
        self.moduli = _frozen(factors)
        self.rank = len(factors)
        self.order = int(np.prod(factors, dtype=np.int64)) if factors else 1
        self.exponent = factors[-1] if factors else 1
        elems = list(itertools.product(*(range(d) for d in factors)))
        self.elements = _frozen(np.array(elems, dtype=np.int64).reshape(self.order, self.rank))
        # mixed-radix weights, last coordinate fastest
        w = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * factors[i + 1]
        self._weights = _frozen(w)
        self.op_table = _frozen(self.index_of(self.elements[:, None, :] + self.elements[None, :, :]))

    identity = 0

    def reduce(self, values) -> np.ndarray:
        """Reduce residue vectors (last axis = coordinates) into range."""
        return np.mod(np.asarray(values, dtype=np.int64), self.moduli)

    def index_of(self, values) -> np.ndarray:
        v = self.reduce(values)
        return (v * self._weights).sum(axis=-1)

    def element(self, index: int) -> tuple:
        return tuple(int(c) for c in self.elements[index])

    def add(self, a: int, b: int) -> int:
        return int(self.op_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.index_of(-self.elements[a]))

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.invariant_factors == other.invariant_factors

    def __hash__(self):
        return hash(self.invariant_factors)

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.invariant_factors)})"


Carrier = Union[FiniteGroup, FiniteAbelianGroup]


class AutAction:
    """A homomorphism actor -> Aut(carrier), stored as full element tables.

    For an abelian carrier, ``matrices[s]`` is the integer matrix whose column
    j holds the residues of the image of the j-th basis vector; applying it to
    a residue vector and reducing gives the action.
    """

    def __init__(self, actor: FiniteGroup, carrier: Carrier, maps):
        self.actor = actor
        self.carrier = carrier
        self.maps = _frozen(maps)
        if isinstance(carrier, FiniteAbelianGroup):
            k = carrier.rank
            basis = [carrier.index_of(np.eye(k, dtype=np.int64)[j]) for j in range(k)]
            mats = np.zeros((actor.order, k, k), dtype=np.int64)
            for j, b in enumerate(basis):
                mats[:, :, j] = carrier.elements[self.maps[:, b]]
            self.matrices = _frozen(mats)
        else:
            self.matrices = None

    def __call__(self, s: int, element: int) -> int:
        return int(self.maps[s, element])

    def is_trivial(self) -> bool:
        return bool(np.all(self.maps == np.arange(self.carrier.order)))

    def __eq__(self, other):
        return (
            isinstance(other, AutAction)
            and self.actor == other.actor
            and self.carrier == other.carrier
            and np.array_equal(self.maps, other.maps)
        )

    def __hash__(self):
        return hash(self.maps.tobytes())

    def __repr__(self):
        return f"AutAction(actor={self.actor!r}, carrier={self.carrier!r})"


class EquivariantModule:
    """A Pi-module A with compatible Gamma-actions on Pi and on A."""

    def __init__(self, pi, gamma, a, pi_on_a, gamma_on_pi, gamma_on_a):
        self.pi = pi
        self.gamma = gamma
        self.a = a
        self.pi_on_a = pi_on_a
        self.gamma_on_pi = gamma_on_pi
        self.gamma_on_a = gamma_on_a

    # shorthands used throughout the cochain code
    @property
    def n(self) -> int:
        return self.pi.order

    @property
    def m(self) -> int:
        return self.gamma.order

    @property
    def k(self) -> int:
        return self.a.rank

    @property
    def moduli(self) -> np.ndarray:
        return self.a.moduli

    def _key(self):
        return (self.pi, self.gamma, self.a, self.pi_on_a, self.gamma_on_pi, self.gamma_on_a)

    def __eq__(self, other):
        return isinstance(other, EquivariantModule) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (
            f"EquivariantModule(|Pi|={self.n}, |Gamma|={self.m}, "
            f"A={list(self.a.invariant_factors)})"
        )


def _first(mask: np.ndarray):
    idx = np.argwhere(mask)
    return None if len(idx) == 0 else tuple(int(i) for i in idx[0])


def validate_group(table) -> FiniteGroup:
    """Validate a Cayley table and return the group with identity relabeled to 0.

    >>> validate_group([[0, 1], [1, 0]]).order
    2
    """
    t = _as_int_array(table, 2, "group table")
    n = t.shape[0]
    if n == 0 or t.shape[1] != n:
        raise ShapeError(f"group table must be square and non-empty, got shape {t.shape}")
    bad = _first((t < 0) | (t >= n))
    if bad is not None:
        raise NotClosed(f"entry {t[bad]} at {bad} is not an element index", witness=bad)

    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)]
    if not ids:
        raise NoIdentity("no two-sided identity element")
    e = ids[0]
    labels = list(range(n))
    if e != 0:
        perm = np.arange(n)
        perm[0], perm[e] = e, 0  # involution: new index i is old label perm[i]
        t = perm[t[np.ix_(perm, perm)]]
        labels = [int(p) for p in perm]

    inverse = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        cand = np.nonzero((t[i] == 0) & (t[:, i] == 0))[0]
        if len(cand) == 0:
            raise NoInverse(f"element {labels[i]} has no inverse", witness=(labels[i],))
        inverse[i] = cand[0]

    lhs = t[t[:, :, None], ar[None, None, :]]  # (ij)k
    rhs = t[ar[:, None, None], t[None, :, :]]  # i(jk)
    bad = _first(lhs != rhs)
    if bad is not None:
        w = tuple(labels[i] for i in bad)
        raise NotAssociative(f"({w[0]}*{w[1]})*{w[2]} != {w[0]}*({w[1]}*{w[2]})", witness=w)
    return FiniteGroup(t, inverse, labels)


def cyclic_group(n: int) -> FiniteGroup:
    ar = np.arange(n)
    return validate_group((ar[:, None] + ar[None, :]) % n)


def validate_action(actor: FiniteGroup, carrier: Carrier, maps) -> AutAction:
    """Check that ``maps`` defines a homomorphism actor -> Aut(carrier).

    ``maps`` is either a sequence indexed by actor element or a mapping from
    actor element (int or decimal string) to the image table.
    """
    n, c = actor.order, carrier.order
    if isinstance(maps, Mapping):
        try:
            keyed = {int(k): v for k, v in maps.items()}
        except (TypeError, ValueError):
            raise ShapeError("action keys must be actor element indices") from None
        if sorted(keyed) != list(range(n)):
            raise ShapeError(f"action must give one map per actor element 0..{n - 1}")
        maps = [keyed[s] for s in range(n)]
    arr = _as_int_array(maps, 2, "action maps")
    if arr.shape != (n, c):
        raise ShapeError(f"action maps must have shape ({n}, {c}), got {arr.shape}")
    bad = _first((arr < 0) | (arr >= c))
    if bad is not None:
        raise NotClosed(f"image {arr[bad]} at {bad} is not a carrier element", witness=bad)

    for s in range(n):
        if len(np.unique(arr[s])) != c:
            raise NotBijective(f"map for actor element {s} is not a bijection", witness=(s,))
    op = carrier.op_table
    for s in range(n):
        m = arr[s]
        bad = _first(m[op] != op[m[:, None], m[None, :]])
        if bad is not None:
            raise NotHomomorphic(
                f"map for actor element {s} is not a homomorphism at pair {bad}", witness=(s, bad)
            )
    if not np.array_equal(arr[0], np.arange(c)):
        raise IdentityActsNontrivially("the identity of the actor acts nontrivially", witness=(0,))
    # maps[s] o maps[t] == maps[st]
    composite = arr[np.arange(n)[:, None, None], arr[None, :, :]]
    bad = _first(np.any(composite != arr[actor.table], axis=-1))
    if bad is not None:
        raise NotAnAction(f"maps[{bad[0]}] o maps[{bad[1]}] != maps[{bad[0]}*{bad[1]}]", witness=bad)
    return AutAction(actor, carrier, arr)


def make_action(actor: FiniteGroup, carrier: Carrier, fn: Callable[[int, int], int]) -> AutAction:
    """Tabulate ``fn(s, element)`` and validate it as an action."""
    maps = [[fn(s, e) for e in range(carrier.order)] for s in range(actor.order)]
    return validate_action(actor, carrier, maps)


def trivial_action(actor: FiniteGroup, carrier: Carrier) -> AutAction:
    return validate_action(actor, carrier, np.tile(np.arange(carrier.order), (actor.order, 1)))


def validate_equivariant_module(
    pi: FiniteGroup,
    gamma: FiniteGroup,
    a: FiniteAbelianGroup,
    pi_on_a: AutAction,
    gamma_on_pi: AutAction,
    gamma_on_a: AutAction,
) -> EquivariantModule:
    """Assemble an equivariant module, checking s(x.a) = (s x).(s a) everywhere."""
    for name, act, actor, carrier in (
        ("pi_on_a", pi_on_a, pi, a),
        ("gamma_on_pi", gamma_on_pi, gamma, pi),
        ("gamma_on_a", gamma_on_a, gamma, a),
    ):
        if act.actor != actor or act.carrier != carrier:
            raise ModuleMismatch(f"{name} does not act with the declared groups")
    pa, gp, ga = pi_on_a.maps, gamma_on_pi.maps, gamma_on_a.maps
    lhs = ga[np.arange(gamma.order)[:, None, None], pa[None, :, :]]
    rhs = pa[gp[:, :, None], ga[:, None, :]]
    bad = _first(lhs != rhs)
    if bad is not None:
        raise NotEquivariant(
            f"sigma(x.a) != (sigma x).(sigma a) at (sigma, x, a) = {bad}", witness=bad
        )
    return EquivariantModule(pi, gamma, a, pi_on_a, gamma_on_pi, gamma_on_a)
