"""The categorical group S(Pi, A, xi) of type (Pi, A).

Objects are elements of Pi; the only morphisms are automorphisms (x, u) with
u in A. Morphism components here are A element *indices*, so composition and
tensor run on the group tables rather than on residue arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from gammacat.algebra import EquivariantModule
from gammacat.errors import NotACocycle, NotNormalized, ObjectMismatch, ShapeError
from gammacat.report import Report

__all__ = [
    "GrCategory",
    "GrMorphism",
    "GrFunctorData",
    "build_gr_category",
    "compose_morphisms",
    "tensor_morphisms",
    "identity_morphism",
    "associator",
    "hom",
    "pentagon_report",
    "check_gr_functor",
]


class GrMorphism(NamedTuple):
    object: int
    component: int


class GrCategory:
    def __init__(self, em: EquivariantModule, xi):
        self.em = em
        self.xi = np.mod(np.asarray(xi, dtype=np.int64), em.moduli)
        self.xi.setflags(write=False)
        self.xi_index = em.a.index_of(self.xi)

    @property
    def pi(self):
        return self.em.pi

    @property
    def a(self):
        return self.em.a

    def __eq__(self, other):
        return (
            isinstance(other, GrCategory)
            and self.em.pi == other.em.pi
            and self.em.a == other.em.a
            and self.em.pi_on_a == other.em.pi_on_a
            and np.array_equal(self.xi, other.xi)
        )

    def __hash__(self):
        return hash(self.xi.tobytes())

    def __repr__(self):
        return f"GrCategory({self.em!r}, xi nonzero at {int(np.count_nonzero(self.xi.any(-1)))} triples)"


def build_gr_category(em: EquivariantModule, xi) -> GrCategory:
    """Check that xi is a normalized ordinary 3-cocycle and wrap it.

    Raises NotNormalized(x, y, z) or NotACocycle(x, y, z, t) at the first
    failing index tuple.
    """
    n, k = em.n, em.k
    xi = np.asarray(xi)
    if xi.shape != (n, n, n, k):
        raise ShapeError(f"xi: expected shape {(n, n, n, k)}, got {xi.shape}")
    if xi.size and not np.issubdtype(xi.dtype, np.integer):
        raise ShapeError("xi: entries must be integers")
    xi = np.mod(xi.astype(np.int64), em.moduli)
    nz = xi.any(axis=-1)
    mask = np.zeros(nz.shape, bool)
    mask[0], mask[:, 0], mask[:, :, 0] = True, True, True
    bad = np.argwhere(nz & mask)
    if len(bad):
        w = tuple(int(i) for i in bad[0])
        raise NotNormalized(f"xi{w} != 0", witness=w)
    P, act = em.pi.table, em.pi_on_a.matrices
    ar = np.arange(n)
    X, Y, Z, T = np.meshgrid(ar, ar, ar, ar, indexing="ij")
    r = (
        np.einsum("...ij,...j->...i", act[X], xi[Y, Z, T])
        - xi[P[X, Y], Z, T]
        + xi[X, P[Y, Z], T]
        - xi[X, Y, P[Z, T]]
        + xi[X, Y, Z]
    )
    bad = np.argwhere(np.mod(r, em.moduli).any(axis=-1))
    if len(bad):
        w = tuple(int(i) for i in bad[0])
        raise NotACocycle(f"cocycle identity fails at (x, y, z, t) = {w}", witness=w)
    return GrCategory(em, xi)


def identity_morphism(c: GrCategory, x: int) -> GrMorphism:
    return GrMorphism(x, 0)


def hom(c: GrCategory, x: int, y: int) -> list:
    """Hom(x, y): all of {x} x A when x == y, empty otherwise."""
    if x != y:
        return []
    return [GrMorphism(x, u) for u in range(c.a.order)]


def compose_morphisms(c: GrCategory, m1: GrMorphism, m2: GrMorphism) -> GrMorphism:
    """(x, u) o (x, v) = (x, u + v)."""
    if m1.object != m2.object:
        raise ObjectMismatch(f"cannot compose morphisms of {m1.object} and {m2.object}", witness=(m1, m2))
    return GrMorphism(m1.object, int(c.a.op_table[m1.component, m2.component]))


def tensor_morphisms(c: GrCategory, m1: GrMorphism, m2: GrMorphism) -> GrMorphism:
    """(x, u) (x) (y, v) = (xy, u + x.v)."""
    x, y = m1.object, m2.object
    xv = c.em.pi_on_a.maps[x, m2.component]
    return GrMorphism(int(c.pi.table[x, y]), int(c.a.op_table[m1.component, xv]))


def associator(c: GrCategory, x: int, y: int, z: int) -> GrMorphism:
    return GrMorphism(int(c.pi.table[c.pi.table[x, y], z]), int(c.xi_index[x, y, z]))


def pentagon_report(c: GrCategory) -> Report:
    """Pentagon coherence, evaluated with actual compose/tensor of morphisms."""
    comp = lambda *ms: _chain(c, ms)
    P = c.pi.table
    witness = None
    for w, x, y, z in itertools.product(range(c.pi.order), repeat=4):
        lhs = comp(associator(c, P[w, x], y, z), associator(c, w, x, P[y, z]))
        rhs = comp(
            tensor_morphisms(c, associator(c, w, x, y), identity_morphism(c, z)),
            associator(c, w, P[x, y], z),
            tensor_morphisms(c, identity_morphism(c, w), associator(c, x, y, z)),
        )
        if lhs != rhs:
            witness = (w, x, y, z)
            break
    return Report().add("pentagon", witness is None, witness)


def _chain(c, ms):
    out = ms[0]
    for m in ms[1:]:
        out = compose_morphisms(c, out, m)
    return out


@dataclass(frozen=True)
class GrFunctorData:
    """A candidate Gr-functor of type (phi, f) with comparison data.

    ``phi`` maps Pi -> Pi', ``f`` maps A -> A' (element indices), ``gtilde``
    is the (n, n) table of A' indices of F~_{x,y} : F(xy) -> Fx Fy, and
    ``chat`` is the A' index of the unit comparison.
    """

    phi: np.ndarray
    f: np.ndarray
    gtilde: np.ndarray
    chat: int = 0


def check_gr_functor(src: GrCategory, dst: GrCategory, fd: GrFunctorData) -> Report:
    rep = Report()
    P, P2 = src.pi.table, dst.pi.table
    A, A2 = src.a, dst.a
    phi, f = np.asarray(fd.phi), np.asarray(fd.f)
    gt = np.asarray(fd.gtilde)
    shapes_ok = (
        phi.shape == (src.pi.order,)
        and f.shape == (A.order,)
        and gt.shape == (src.pi.order, src.pi.order)
        and np.all((phi >= 0) & (phi < dst.pi.order))
        and np.all((f >= 0) & (f < A2.order))
        and np.all((gt >= 0) & (gt < A2.order))
        and 0 <= fd.chat < A2.order
    )
    if not shapes_ok:
        return rep.add("shape", False, None, "functor tables are not total")

    bad = np.argwhere(phi[P] != P2[phi[:, None], phi[None, :]])
    rep.add("phi_homomorphism", not len(bad), tuple(bad[0]) if len(bad) else None)
    op, op2 = A.op_table, A2.op_table
    bad = np.argwhere(f[op] != op2[f[:, None], f[None, :]])
    rep.add("f_homomorphism", not len(bad), tuple(bad[0]) if len(bad) else None)
    pa, pa2 = src.em.pi_on_a.maps, dst.em.pi_on_a.maps
    bad = np.argwhere(f[pa] != pa2[phi[:, None], f[None, :]])
    rep.add("f_equivariant", not len(bad), tuple(bad[0]) if len(bad) else None)

    neg2 = np.array([A2.neg(i) for i in range(A2.order)])
    add = lambda *xs: _sum(op2, xs)
    witness = None
    for x, y, z in itertools.product(range(src.pi.order), repeat=3):
        lhs = add(pa2[phi[x], gt[y, z]], neg2[gt[P[x, y], z]], gt[x, P[y, z]], neg2[gt[x, y]])
        rhs = add(dst.xi_index[phi[x], phi[y], phi[z]], neg2[f[src.xi_index[x, y, z]]])
        if lhs != rhs:
            witness = (x, y, z)
            break
    rep.add("hexagon", witness is None, witness)
    bad = [x for x in range(src.pi.order) if add(pa2[phi[x], fd.chat], gt[x, 0]) != 0]
    rep.add("unit_right", not bad, (bad[0],) if bad else None)
    bad = [x for x in range(src.pi.order) if add(fd.chat, gt[0, x]) != 0]
    rep.add("unit_left", not bad, (bad[0],) if bad else None)
    return rep


def _sum(op, xs):
    out = 0
    for v in xs:
        out = op[out, v]
    return int(out)
