"""Normalized equivariant cochains in degrees 1-3 and their coboundaries.

A cochain is a set of dense tables indexed by element indices with the A
coordinates on the last axis:

========  =========  =====================
degree    part       shape
========  =========  =====================
1         ``f``      (n, k)
2         ``g_pp``   (n, n, k)
2         ``g_pg``   (n, m, k)
3         ``h_ppp``  (n, n, n, k)
3         ``h_ppg``  (n, n, m, k)
3         ``h_pgg``  (n, m, m, k)
========  =========  =====================

where n = |Pi|, m = |Gamma| and k is the number of invariant factors of A.
"Normalized" means a table vanishes whenever any argument is an identity.

The private ``_d1``, ``_d2`` and ``_residuals`` helpers accept arbitrary
leading batch axes, which the enumeration code relies on.
"""

from __future__ import annotations

import numpy as np

from gammacat.algebra import EquivariantModule
from gammacat.errors import DegreeMismatch, ModuleMismatch, NotNormalized, ShapeError
from gammacat.report import Report

__all__ = [
    "Cochain",
    "Cochain1",
    "Cochain2",
    "Cochain3",
    "PART_SIGNATURES",
    "d1",
    "d2",
    "is_cocycle3",
    "combine",
    "free_slots",
    "cochain_class",
    "factor_set_phrasing",
]

# argument kinds per part: "p" ranges over Pi, "g" over Gamma
PART_SIGNATURES = {
    1: {"f": "p"},
    2: {"g_pp": "pp", "g_pg": "pg"},
    3: {"h_ppp": "ppp", "h_ppg": "ppg", "h_pgg": "pgg"},
}


def _act(mats, idx, vals):
    """Apply the automorphism matrices ``mats[idx]`` to residue vectors ``vals``."""
    return np.einsum("...ij,...j->...i", mats[idx], vals)


def _shape(em, sig):
    return tuple(em.n if c == "p" else em.m for c in sig) + (em.k,)


def _identity_mask(sig, shape):
    """Boolean mask of index tuples with at least one identity argument."""
    mask = np.zeros(shape[:-1], dtype=bool)
    for axis in range(len(sig)):
        sl = [slice(None)] * len(sig)
        sl[axis] = 0
        mask[tuple(sl)] = True
    return mask


class Cochain:
    """Base class: holds the module and the named tables for one degree."""

    degree = 0

    def __init__(self, em: EquivariantModule, check=True, **parts):
        self.em = em
        sigs = PART_SIGNATURES[self.degree]
        if set(parts) != set(sigs):
            raise ShapeError(f"degree-{self.degree} cochain needs parts {sorted(sigs)}")
        for name, sig in sigs.items():
            arr = np.asarray(parts[name])
            shape = _shape(em, sig)
            if arr.shape != shape:
                raise ShapeError(f"{name}: expected shape {shape}, got {arr.shape}", witness=(name,))
            if arr.size and not np.issubdtype(arr.dtype, np.integer):
                raise ShapeError(f"{name}: entries must be integers", witness=(name,))
            arr = np.mod(arr.astype(np.int64), em.moduli)
            arr.setflags(write=False)
            if check:
                bad = np.argwhere(_identity_mask(sig, shape) & arr.any(axis=-1))
                if len(bad):
                    w = (name,) + tuple(int(i) for i in bad[0])
                    raise NotNormalized(f"{name} is nonzero at identity argument {w[1:]}", witness=w)
            setattr(self, name, arr)

    @property
    def parts(self) -> dict:
        return {name: getattr(self, name) for name in PART_SIGNATURES[self.degree]}

    @classmethod
    def zeros(cls, em):
        return cls(em, **{n: np.zeros(_shape(em, s), np.int64) for n, s in PART_SIGNATURES[cls.degree].items()})

    def is_zero(self) -> bool:
        return not any(a.any() for a in self.parts.values())

    def coordinates(self) -> np.ndarray:
        """Integer coordinate vector over the free (non-identity) slots."""
        return np.concatenate(
            [getattr(self, part)[idx] for part, idx in free_slots(self.em, self.degree)]
            or [np.zeros(0, np.int64)]
        ).astype(np.int64)

    @classmethod
    def from_coordinates(cls, em, coords):
        coords = np.asarray(coords, dtype=np.int64)
        tables = {n: np.zeros(_shape(em, s), np.int64) for n, s in PART_SIGNATURES[cls.degree].items()}
        slots = free_slots(em, cls.degree)
        if coords.shape != (len(slots) * em.k,):
            raise ShapeError(f"expected {len(slots) * em.k} coordinates, got {coords.shape}")
        for i, (part, idx) in enumerate(slots):
            tables[part][idx] = coords[i * em.k:(i + 1) * em.k]
        return cls(em, **tables)

    def key(self) -> bytes:
        return b"".join(a.tobytes() for a in self.parts.values())

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.em == other.em
            and all(np.array_equal(a, b) for a, b in zip(self.parts.values(), other.parts.values()))
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        nz = {n: int(np.count_nonzero(a.any(-1))) for n, a in self.parts.items()}
        return f"{type(self).__name__}(nonzero slots={nz})"


class Cochain1(Cochain):
    degree = 1


class Cochain2(Cochain):
    degree = 2


class Cochain3(Cochain):
    degree = 3


def cochain_class(degree: int):
    return {1: Cochain1, 2: Cochain2, 3: Cochain3}[degree]


def free_slots(em: EquivariantModule, degree: int) -> list:
    """Slots (part, index tuple) not forced to zero by normalization, in order."""
    out = []
    for name, sig in PART_SIGNATURES[degree].items():
        shape = _shape(em, sig)[:-1]
        for idx in np.ndindex(*shape):
            if all(i != 0 for i in idx):
                out.append((name, idx))
    return out


def _grids(*sizes):
    return np.meshgrid(*[np.arange(s) for s in sizes], indexing="ij")


def _d1(em, f):
    P, Pm, G = em.pi.table, em.pi_on_a.matrices, em.gamma_on_a.matrices
    gP = em.gamma_on_pi.maps
    X, Y = _grids(em.n, em.n)
    # + f(x) as last term; the variant ending in + f(y) does not square to zero
    g_pp = _act(Pm, X, f[..., Y, :]) - f[..., P[X, Y], :] + f[..., X, :]
    X, S = _grids(em.n, em.m)
    g_pg = _act(G, S, f[..., X, :]) - f[..., gP[S, X], :]
    return np.mod(g_pp, em.moduli), np.mod(g_pg, em.moduli)


def _d2(em, g_pp, g_pg):
    P, Pm, G = em.pi.table, em.pi_on_a.matrices, em.gamma_on_a.matrices
    gP, Gm = em.gamma_on_pi.maps, em.gamma.table
    X, Y, Z = _grids(em.n, em.n, em.n)
    h_ppp = (
        _act(Pm, X, g_pp[..., Y, Z, :])
        - g_pp[..., P[X, Y], Z, :]
        + g_pp[..., X, P[Y, Z], :]
        - g_pp[..., X, Y, :]
    )
    X, Y, S = _grids(em.n, em.n, em.m)
    sX, sY = gP[S, X], gP[S, Y]
    h_ppg = (
        _act(G, S, g_pp[..., X, Y, :])
        - g_pp[..., sX, sY, :]
        - _act(Pm, sX, g_pg[..., Y, S, :])
        + g_pg[..., P[X, Y], S, :]
        - g_pg[..., X, S, :]
    )
    X, S, T = _grids(em.n, em.m, em.m)
    h_pgg = _act(G, S, g_pg[..., X, T, :]) - g_pg[..., X, Gm[S, T], :] + g_pg[..., gP[T, X], S, :]
    mod = em.moduli
    return np.mod(h_ppp, mod), np.mod(h_ppg, mod), np.mod(h_pgg, mod)


def _residuals(em, h_ppp, h_ppg, h_pgg):
    """Left minus right side of each of the four cocycle conditions (unreduced)."""
    P, Pm, G = em.pi.table, em.pi_on_a.matrices, em.gamma_on_a.matrices
    gP, Gm = em.gamma_on_pi.maps, em.gamma.table
    n, m = em.n, em.m

    X, Y, Z, T = _grids(n, n, n, n)
    r_pppp = (
        h_ppp[..., X, Y, P[Z, T], :]
        + h_ppp[..., P[X, Y], Z, T, :]
        - _act(Pm, X, h_ppp[..., Y, Z, T, :])
        - h_ppp[..., X, P[Y, Z], T, :]
        - h_ppp[..., X, Y, Z, :]
    )
    X, Y, Z, S = _grids(n, n, n, m)
    sX = gP[S, X]
    r_pppg = (
        _act(G, S, h_ppp[..., X, Y, Z, :])
        + h_ppg[..., P[X, Y], Z, S, :]
        + h_ppg[..., X, Y, S, :]
        - h_ppp[..., sX, gP[S, Y], gP[S, Z], :]
        - _act(Pm, sX, h_ppg[..., Y, Z, S, :])
        - h_ppg[..., X, P[Y, Z], S, :]
    )
    X, Y, S, T = _grids(n, n, m, m)
    r_ppgg = (
        _act(G, S, h_ppg[..., X, Y, T, :])
        + h_ppg[..., gP[T, X], gP[T, Y], S, :]
        + h_pgg[..., X, S, T, :]
        + _act(Pm, gP[Gm[S, T], X], h_pgg[..., Y, S, T, :])
        - h_ppg[..., X, Y, Gm[S, T], :]
        - h_pgg[..., P[X, Y], S, T, :]
    )
    X, S, T, U = _grids(n, m, m, m)
    r_pggg = (
        _act(G, S, h_pgg[..., X, T, U, :])
        + h_pgg[..., X, S, Gm[T, U], :]
        - h_pgg[..., X, Gm[S, T], U, :]
        - h_pgg[..., gP[U, X], S, T, :]
    )
    return {"cocycle_pppp": r_pppp, "cocycle_pppg": r_pppg, "cocycle_ppgg": r_ppgg, "cocycle_pggg": r_pggg}


def _first_nonzero(residual, moduli):
    bad = np.mod(residual, moduli).any(axis=-1)
    idx = np.argwhere(bad)
    return None if len(idx) == 0 else tuple(int(i) for i in idx[0])


def d1(f: Cochain1) -> Cochain2:
    g_pp, g_pg = _d1(f.em, f.f)
    return Cochain2(f.em, check=False, g_pp=g_pp, g_pg=g_pg)


def d2(g: Cochain2) -> Cochain3:
    h_ppp, h_ppg, h_pgg = _d2(g.em, g.g_pp, g.g_pg)
    return Cochain3(g.em, check=False, h_ppp=h_ppp, h_ppg=h_ppg, h_pgg=h_pgg)


def normalization_report(c: Cochain) -> Report:
    rep = Report()
    for name, sig in PART_SIGNATURES[c.degree].items():
        arr = getattr(c, name)
        bad = np.argwhere(_identity_mask(sig, arr.shape) & arr.any(axis=-1))
        rep.add(f"normalized:{name}", len(bad) == 0, None if not len(bad) else tuple(int(i) for i in bad[0]))
    return rep


def is_cocycle3(h: Cochain3) -> Report:
    """Evaluate normalization and the four cocycle conditions exhaustively.

    Witnesses are index tuples (x, y, z, t), (x, y, z, s), (x, y, s, t) and
    (x, s, t, u) respectively: the first lexicographic failure per condition.
    """
    rep = normalization_report(h)
    for name, r in _residuals(h.em, h.h_ppp, h.h_ppg, h.h_pgg).items():
        w = _first_nonzero(r, h.em.moduli)
        rep.add(name, w is None, w)
    return rep


def factor_set_phrasing(h: Cochain3) -> Report:
    """The middle two conditions rearranged the way factor-set laws read.

    Checks  -(sx).h(y,z,s) + h(xy,z,s) + h(x,y,s) - h(x,yz,s) = h(sx,sy,sz) - s.h(x,y,z)
    and     (st x).h(y,s,t) - h(xy,s,t) + h(x,s,t) = h(x,y,st) - h(tx,ty,s) - s.h(x,y,t).
    """
    em = h.em
    P, Pm, G = em.pi.table, em.pi_on_a.matrices, em.gamma_on_a.matrices
    gP, Gm = em.gamma_on_pi.maps, em.gamma.table
    X, Y, Z, S = _grids(em.n, em.n, em.n, em.m)
    sX = gP[S, X]
    lhs = (
        -_act(Pm, sX, h.h_ppg[Y, Z, S])
        + h.h_ppg[P[X, Y], Z, S]
        + h.h_ppg[X, Y, S]
        - h.h_ppg[X, P[Y, Z], S]
    )
    rhs = h.h_ppp[sX, gP[S, Y], gP[S, Z]] - _act(G, S, h.h_ppp[X, Y, Z])
    rep = Report()
    w = _first_nonzero(lhs - rhs, em.moduli)
    rep.add("cocycle_pppg_rearranged", w is None, w)
    X, Y, S, T = _grids(em.n, em.n, em.m, em.m)
    lhs = (
        _act(Pm, gP[Gm[S, T], X], h.h_pgg[Y, S, T])
        - h.h_pgg[P[X, Y], S, T]
        + h.h_pgg[X, S, T]
    )
    rhs = h.h_ppg[X, Y, Gm[S, T]] - h.h_ppg[gP[T, X], gP[T, Y], S] - _act(G, S, h.h_ppg[X, Y, T])
    w = _first_nonzero(lhs - rhs, em.moduli)
    rep.add("cocycle_ppgg_rearranged", w is None, w)
    return rep


def combine(h1: Cochain, c: int, h2: Cochain) -> Cochain:
    """Pointwise h1 + c*h2."""
    if h1.degree != h2.degree:
        raise DegreeMismatch(f"cannot combine degree {h1.degree} with degree {h2.degree}")
    if h1.em != h2.em:
        raise ModuleMismatch("cochains live over different modules")
    parts = {n: a + int(c) * b for (n, a), b in zip(h1.parts.items(), h2.parts.values())}
    return type(h1)(h1.em, check=False, **parts)
