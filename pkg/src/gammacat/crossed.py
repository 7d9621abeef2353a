"""The crossed-product Gamma-graded category Delta(theta, F).

Objects are elements of Pi. A morphism is a triple (source x, grade s,
component a) standing for (a, s): x -> phi^s(x). Components are A element
indices, as in ``grcat``.

Composition, written "m1 then m2" for m1 = (a, s): x -> sx and
m2 = (b, t): sx -> tsx, is

    (b + f^t(a) - theta^{t,s}(x), ts).

The tensor is defined on same-grade pairs:

    (a, s): x -> sx  (x)  (b, s): y -> sy  =  (ftilde^s(x, y) + a + (sx).b, s).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from gammacat.errors import GradeMismatch, NotCoboundaryRelated, NotComposable, NotEnoughStrict, NotNormalized
from gammacat.factorset import FactorSet, induce_cocycle
from gammacat.cochain import Cochain2, combine, d2
from gammacat.grcat import GrMorphism, compose_morphisms, tensor_morphisms
from gammacat.report import Report

__all__ = [
    "GradedMorphism",
    "CrossedProduct",
    "GradedFunctor",
    "build_crossed_product",
    "compose_graded",
    "tensor_graded",
    "identity",
    "inverse",
    "hom",
    "verify_crossed_product",
    "build_equivalence",
]


class GradedMorphism(NamedTuple):
    source: int
    grade: int
    comp: int


class CrossedProduct:
    def __init__(self, fs: FactorSet):
        self.fs = fs
        A = fs.base.a
        self.add = A.op_table
        self.neg = np.array([A.neg(i) for i in range(A.order)])
        self.phi = fs.phi
        self.f = fs.f
        self.ftilde = A.index_of(fs.ftilde)  # (m, n, n)
        self.t = A.index_of(fs.t)  # (m, m, n)
        self.xi = fs.base.xi_index
        self.pa = fs.base.em.pi_on_a.maps
        self.P = fs.base.pi.table
        self.G = fs.gamma.table

    @property
    def n(self):
        return self.P.shape[0]

    @property
    def m(self):
        return self.G.shape[0]

    @property
    def na(self):
        return self.add.shape[0]

    def target(self, mor: GradedMorphism) -> int:
        return int(self.phi[mor.grade, mor.source])

    def morphisms(self):
        for x, s, a in itertools.product(range(self.n), range(self.m), range(self.na)):
            yield GradedMorphism(x, s, a)


def build_crossed_product(fs: FactorSet) -> CrossedProduct:
    """Wrap an enough-strict factor set. Validity is not re-checked here; see
    ``verify_crossed_product``."""
    if not fs.enough_strict:
        bad = tuple(int(i) for i in np.argwhere(fs.c.any(axis=-1))[0])
        raise NotEnoughStrict(f"unit comparison is not the identity at sigma = {bad[0]}", witness=bad)
    return CrossedProduct(fs)


def identity(d: CrossedProduct, x: int) -> GradedMorphism:
    return GradedMorphism(x, 0, 0)


def hom(d: CrossedProduct, x: int, y: int) -> list:
    return [
        GradedMorphism(x, s, a)
        for s in range(d.m)
        if d.phi[s, x] == y
        for a in range(d.na)
    ]


def compose_graded(d: CrossedProduct, m1: GradedMorphism, m2: GradedMorphism) -> GradedMorphism:
    """m1 then m2."""
    x, s, a = m1
    if m2.source != d.target(m1):
        raise NotComposable(f"target {d.target(m1)} of {m1} is not the source of {m2}", witness=(m1, m2))
    t, b = m2.grade, m2.comp
    comp = d.add[d.add[b, d.f[t, a]], d.neg[d.t[t, s, x]]]
    return GradedMorphism(x, int(d.G[t, s]), int(comp))


def tensor_graded(d: CrossedProduct, m1: GradedMorphism, m2: GradedMorphism) -> GradedMorphism:
    if m1.grade != m2.grade:
        raise GradeMismatch(f"grades {m1.grade} and {m2.grade} differ", witness=(m1, m2))
    x, s, a = m1
    y, b = m2.source, m2.comp
    comp = d.add[d.add[d.ftilde[s, x, y], a], d.pa[d.phi[s, x], b]]
    return GradedMorphism(int(d.P[x, y]), s, int(comp))


def associator(d: CrossedProduct, x: int, y: int, z: int) -> GradedMorphism:
    """The grade-1 constraint (xy)z -> x(yz)."""
    return GradedMorphism(int(d.P[d.P[x, y], z]), 0, int(d.xi[x, y, z]))


def inverse(d: CrossedProduct, mor: GradedMorphism) -> GradedMorphism:
    """The unique two-sided inverse, found by search."""
    y = d.target(mor)
    sinv = int(np.nonzero(d.G[mor.grade] == 0)[0][0])
    found = [
        GradedMorphism(y, sinv, b)
        for b in range(d.na)
        if compose_graded(d, mor, GradedMorphism(y, sinv, b)) == identity(d, mor.source)
        and compose_graded(d, GradedMorphism(y, sinv, b), mor) == identity(d, y)
    ]
    if len(found) != 1:
        raise ArithmeticError(f"{mor} has {len(found)} two-sided inverses")
    return found[0]


def _chain(d, *ms):
    out = ms[0]
    for m in ms[1:]:
        out = compose_graded(d, out, m)
    return out


def verify_crossed_product(d: CrossedProduct) -> Report:
    """Exhaustive check of the graded monoidal category axioms.

    Checks, in order: associativity, identity, grading (functoriality and
    stability), kernel_iso (grade-1 part equals the base category),
    interchange, associator_naturality and pentagon.
    """
    rep = Report()
    n, m, na = d.n, d.m, d.na
    mors = list(d.morphisms())
    out_of = {x: [mo for mo in mors if mo.source == x] for x in range(n)}

    w = None
    for m1 in mors:
        for m2 in out_of[d.target(m1)]:
            m12 = compose_graded(d, m1, m2)
            for m3 in out_of[d.target(m2)]:
                if compose_graded(d, m12, m3) != compose_graded(d, m1, compose_graded(d, m2, m3)):
                    w = (tuple(m1), tuple(m2), tuple(m3))
                    break
            if w:
                break
        if w:
            break
    rep.add("associativity", w is None, w)

    w = next(
        (
            tuple(mo)
            for mo in mors
            if compose_graded(d, identity(d, mo.source), mo) != mo
            or compose_graded(d, mo, identity(d, d.target(mo))) != mo
        ),
        None,
    )
    rep.add("identity", w is None, w)

    w = None
    for m1 in mors:
        for m2 in out_of[d.target(m1)]:
            if compose_graded(d, m1, m2).grade != d.G[m2.grade, m1.grade]:
                w = (tuple(m1), tuple(m2))
                break
        if w:
            break
    if w is None:
        # stability: every (x, s) has an invertible morphism of grade s out of x
        for x, s in itertools.product(range(n), range(m)):
            try:
                inverse(d, GradedMorphism(x, s, 0))
            except ArithmeticError:
                w = (x, s)
                break
    rep.add("grading", w is None, w)

    base = d.fs.base
    w = None
    for x, u, v in itertools.product(range(n), range(na), range(na)):
        lhs = compose_graded(d, GradedMorphism(x, 0, u), GradedMorphism(x, 0, v))
        ref = compose_morphisms(base, GrMorphism(x, u), GrMorphism(x, v))
        if d.target(GradedMorphism(x, 0, u)) != x or (lhs.source, lhs.comp) != tuple(ref) or lhs.grade:
            w = ("compose", x, u, v)
            break
    if w is None:
        for x, y, u, v in itertools.product(range(n), range(n), range(na), range(na)):
            lhs = tensor_graded(d, GradedMorphism(x, 0, u), GradedMorphism(y, 0, v))
            ref = tensor_morphisms(base, GrMorphism(x, u), GrMorphism(y, v))
            if (lhs.source, lhs.comp) != tuple(ref):
                w = ("tensor", x, y, u, v)
                break
    rep.add("kernel_iso", w is None, w)

    # (m1 then m2) (x) (m1' then m2') == (m1 (x) m1') then (m2 (x) m2')
    w = None
    for x, y, s, t in itertools.product(range(n), range(n), range(m), range(m)):
        sx, sy = int(d.phi[s, x]), int(d.phi[s, y])
        for a, b, a2, b2 in itertools.product(range(na), repeat=4):
            m1, m1p = GradedMorphism(x, s, a), GradedMorphism(y, s, b)
            m2, m2p = GradedMorphism(sx, t, a2), GradedMorphism(sy, t, b2)
            lhs = tensor_graded(d, compose_graded(d, m1, m2), compose_graded(d, m1p, m2p))
            rhs = compose_graded(d, tensor_graded(d, m1, m1p), tensor_graded(d, m2, m2p))
            if lhs != rhs:
                w = (tuple(m1), tuple(m1p), tuple(m2), tuple(m2p))
                break
        if w:
            break
    rep.add("interchange", w is None, w)

    # ((m1 (x) m2) (x) m3) then a == a then (m1 (x) (m2 (x) m3))
    w = None
    for x, y, z, s in itertools.product(range(n), range(n), range(n), range(m)):
        sx, sy, sz = int(d.phi[s, x]), int(d.phi[s, y]), int(d.phi[s, z])
        for a, b, c in itertools.product(range(na), repeat=3):
            m1, m2, m3 = GradedMorphism(x, s, a), GradedMorphism(y, s, b), GradedMorphism(z, s, c)
            lhs = compose_graded(d, tensor_graded(d, tensor_graded(d, m1, m2), m3), associator(d, sx, sy, sz))
            rhs = compose_graded(d, associator(d, x, y, z), tensor_graded(d, m1, tensor_graded(d, m2, m3)))
            if lhs != rhs:
                w = (tuple(m1), tuple(m2), tuple(m3))
                break
        if w:
            break
    rep.add("associator_naturality", w is None, w)

    w = None
    P = d.P
    ident = lambda x: identity(d, x)
    for a_, b_, c_, e_ in itertools.product(range(n), repeat=4):
        a_, b_, c_, e_ = int(a_), int(b_), int(c_), int(e_)
        lhs = _chain(d, associator(d, P[a_, b_], c_, e_), associator(d, a_, b_, P[c_, e_]))
        rhs = _chain(
            d,
            tensor_graded(d, associator(d, a_, b_, c_), ident(e_)),
            associator(d, a_, P[b_, c_], e_),
            tensor_graded(d, ident(a_), associator(d, b_, c_, e_)),
        )
        if lhs != rhs:
            w = (a_, b_, c_, e_)
            break
    rep.add("pentagon", w is None, w)
    return rep


# ------------------------------------------------------------------ equivalences


@dataclass
class GradedFunctor:
    """Identity on objects and morphism components, with comparison ``ktilde``."""

    src: CrossedProduct
    dst: CrossedProduct
    ktilde: np.ndarray  # (n, n) A element indices
    report: Report = field(default_factory=Report)

    def object(self, x: int) -> int:
        return x

    def __call__(self, mor: GradedMorphism) -> GradedMorphism:
        return mor


def build_equivalence(d1: CrossedProduct, d2_: CrossedProduct, g) -> GradedFunctor:
    """The graded functor d1 -> d2 with comparison K~_{x,y} = g(x, y): K(xy) -> Kx Ky.

    Requires the induced cocycles to satisfy h(d2) = h(d1) + d(g, 0): the
    constraints differ by the ordinary coboundary of g and the comparison
    tables by its Gamma-twist; the theta components agree. The returned
    functor carries a full verification report.
    """
    fs1, fs2 = d1.fs, d2_.fs
    h1, h2 = induce_cocycle(fs1), induce_cocycle(fs2)
    em = h1.em
    if h2.em != em:
        raise NotCoboundaryRelated("crossed products do not share the equivariant structure")
    g = np.mod(np.asarray(g, dtype=np.int64).reshape(em.n, em.n, em.k), em.moduli)
    bad = np.argwhere((g[0].any(-1)) | (g[:, 0].any(-1)))
    if len(bad):
        raise NotNormalized("comparison must vanish on the unit", witness=tuple(int(i) for i in bad[0]))
    gc = Cochain2(em, g_pp=g, g_pg=np.zeros((em.n, em.m, em.k), np.int64))
    diff = combine(h2, -1, h1)
    if diff != d2(gc):
        raise NotCoboundaryRelated("h(d2) - h(d1) is not the coboundary of (g, 0)", witness=None)
    K = GradedFunctor(d1, d2_, fs1.base.a.index_of(g))
    K.report = _verify_functor(K)
    return K


def _verify_functor(K: GradedFunctor) -> Report:
    d1, d2_, kt = K.src, K.dst, K.ktilde
    rep = Report()
    n, m = d1.n, d1.m
    comp = lambda x, y: GradedMorphism(int(d1.P[x, y]), 0, int(kt[x, y]))
    mors = list(d1.morphisms())

    rep.add("grade_preserving", all(K(mo).grade == mo.grade for mo in mors))
    w = None
    for m1 in mors:
        for m2 in mors:
            if m2.source != d1.target(m1):
                continue
            if K(compose_graded(d1, m1, m2)) != compose_graded(d2_, K(m1), K(m2)):
                w = (tuple(m1), tuple(m2))
                break
        if w:
            break
    rep.add("functorial", w is None, w)

    w = None
    for x, y, s in itertools.product(range(n), range(n), range(m)):
        for a, b in itertools.product(range(d1.na), repeat=2):
            m1, m2 = GradedMorphism(x, s, a), GradedMorphism(y, s, b)
            sx, sy = d1.target(m1), d1.target(m2)
            lhs = compose_graded(d2_, K(tensor_graded(d1, m1, m2)), comp(sx, sy))
            rhs = compose_graded(d2_, comp(x, y), tensor_graded(d2_, K(m1), K(m2)))
            if lhs != rhs:
                w = (tuple(m1), tuple(m2))
                break
        if w:
            break
    rep.add("monoidal", w is None, w)

    w = None
    ident = lambda x: identity(d2_, x)
    P = d1.P
    for x, y, z in itertools.product(range(n), repeat=3):
        lhs = _chain(d2_, comp(P[x, y], z), tensor_graded(d2_, comp(x, y), ident(z)), associator(d2_, x, y, z))
        rhs = _chain(d2_, K(associator(d1, x, y, z)), comp(x, P[y, z]), tensor_graded(d2_, ident(x), comp(y, z)))
        if lhs != rhs:
            w = (x, y, z)
            break
    rep.add("hexagon", w is None, w)
    rep.add("unit", not kt[0].any() and not kt[:, 0].any())
    # bijective on every hom-set and identity on objects
    ok = all(
        sorted(K(mo) for mo in hom(d1, x, y)) == sorted(hom(d2_, x, y))
        for x in range(n)
        for y in range(n)
    )
    rep.add("fully_faithful", ok)
    rep.add("essentially_surjective", True)
    return rep
