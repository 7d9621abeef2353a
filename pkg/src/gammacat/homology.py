"""H^3 of the truncated equivariant complex, computed two independent ways.

``method="snf"`` assembles the coboundary and cocycle-condition maps as
integer matrices directly from their defining formulas and reads the
quotient Z^3 / B^3 off Smith normal forms. ``method="enum"`` never builds a
matrix: it enumerates candidate tables, filters them with the same residual
evaluation that ``is_cocycle3`` uses and partitions the survivors into cosets
of the enumerated coboundary group.

Coordinates of a cochain are its free-slot values (see
``cochain.free_slots``), k residues per slot. Mixed moduli are handled by
rescaling every coordinate into Z/e with e the exponent of A: a value modulo
d embeds as (e/d) times itself modulo e.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from gammacat.algebra import EquivariantModule
from gammacat.cochain import (
    Cochain2,
    Cochain3,
    PART_SIGNATURES,
    _d2,
    _residuals,
    _shape,
    d2,
    free_slots,
)
from gammacat.errors import CapExceeded, ModuleMismatch, NotNormalized, SNFOverflow
from gammacat.snf import DEFAULT_BOUND, diagonal, smith_normal_form, snf_full

__all__ = [
    "DEFAULT_CAP",
    "CoboundaryMatrix",
    "H3Result",
    "smith_normal_form",
    "coboundary_matrix",
    "cocycle_condition_matrix",
    "compute_h3",
    "solve_coboundary",
    "class_coordinates",
    "enumerate_cocycles",
    "invariant_factors_from_orders",
]

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class CoboundaryMatrix:
    """Integer matrix of a linear map between coordinate spaces.

    Row i of the output is understood modulo ``row_moduli[i]``.
    """

    matrix: np.ndarray
    row_moduli: np.ndarray
    col_moduli: np.ndarray
    row_slots: tuple
    col_slots: tuple

    def apply(self, coords) -> np.ndarray:
        return np.mod(self.matrix @ np.asarray(coords, dtype=np.int64), self.row_moduli)


@dataclass
class H3Result:
    order: int
    invariant_factors: list
    representatives: Optional[list] = None
    method: str = "snf"
    cocycle_count: Optional[int] = field(default=None, compare=False)
    coboundary_count: Optional[int] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        from gammacat.io import cochain_to_json

        return {
            "order": self.order,
            "invariant_factors": list(self.invariant_factors),
            "representatives": None
            if self.representatives is None
            else [cochain_to_json(h) for h in self.representatives],
        }


class _Assembler:
    """Collects k x k blocks into an integer matrix over free-slot coordinates."""

    def __init__(self, em, src_degree):
        self.em = em
        self.k = em.k
        self.cols = free_slots(em, src_degree)
        self.col_index = {s: i for i, s in enumerate(self.cols)}
        self.blocks = []
        self.row_slots = []

    def row(self, label):
        block = np.zeros((self.k, len(self.cols) * self.k), dtype=np.int64)
        self.blocks.append(block)
        self.row_slots.append(label)
        return block

    def term(self, block, coef, mat, part, idx):
        pos = self.col_index.get((part, tuple(int(i) for i in idx)))
        if pos is None:  # normalized slot, always zero
            return
        block[:, pos * self.k:(pos + 1) * self.k] += coef * mat

    def finish(self) -> CoboundaryMatrix:
        k = self.k
        mat = np.vstack(self.blocks) if self.blocks else np.zeros((0, len(self.cols) * k), np.int64)
        mod = np.asarray(self.em.moduli, dtype=np.int64)
        return CoboundaryMatrix(
            matrix=mat,
            row_moduli=np.tile(mod, len(self.blocks)),
            col_moduli=np.tile(mod, len(self.cols)),
            row_slots=tuple(self.row_slots),
            col_slots=tuple(self.cols),
        )


def coboundary_matrix(em: EquivariantModule, degree: int) -> CoboundaryMatrix:
    """Matrix of the coboundary out of degree 1 or 2 on free-slot coordinates."""
    P, gP, G = em.pi.table, em.gamma_on_pi.maps, em.gamma.table
    pi, gam = em.pi_on_a.matrices, em.gamma_on_a.matrices
    one = np.eye(em.k, dtype=np.int64)
    asm = _Assembler(em, degree)
    if degree == 1:
        for part, idx in free_slots(em, 2):
            b = asm.row((part, idx))
            if part == "g_pp":
                x, y = idx
                asm.term(b, 1, pi[x], "f", (y,))
                asm.term(b, -1, one, "f", (P[x, y],))
                asm.term(b, 1, one, "f", (x,))
            else:
                x, s = idx
                asm.term(b, 1, gam[s], "f", (x,))
                asm.term(b, -1, one, "f", (gP[s, x],))
    elif degree == 2:
        for part, idx in free_slots(em, 3):
            b = asm.row((part, idx))
            if part == "h_ppp":
                x, y, z = idx
                asm.term(b, 1, pi[x], "g_pp", (y, z))
                asm.term(b, -1, one, "g_pp", (P[x, y], z))
                asm.term(b, 1, one, "g_pp", (x, P[y, z]))
                asm.term(b, -1, one, "g_pp", (x, y))
            elif part == "h_ppg":
                x, y, s = idx
                asm.term(b, 1, gam[s], "g_pp", (x, y))
                asm.term(b, -1, one, "g_pp", (gP[s, x], gP[s, y]))
                asm.term(b, -1, pi[gP[s, x]], "g_pg", (y, s))
                asm.term(b, 1, one, "g_pg", (P[x, y], s))
                asm.term(b, -1, one, "g_pg", (x, s))
            else:
                x, s, t = idx
                asm.term(b, 1, gam[s], "g_pg", (x, t))
                asm.term(b, -1, one, "g_pg", (x, G[s, t]))
                asm.term(b, 1, one, "g_pg", (gP[t, x], s))
    else:
        raise ValueError("degree must be 1 or 2")
    return asm.finish()


def cocycle_condition_matrix(em: EquivariantModule) -> CoboundaryMatrix:
    """One block row per instance of the four cocycle conditions; Z^3 is its kernel."""
    P, gP, G = em.pi.table, em.gamma_on_pi.maps, em.gamma.table
    pi, gam = em.pi_on_a.matrices, em.gamma_on_a.matrices
    one = np.eye(em.k, dtype=np.int64)
    n, m = em.n, em.m
    asm = _Assembler(em, 3)
    for x, y, z, t in itertools.product(range(n), repeat=4):
        b = asm.row(("cocycle_pppp", (x, y, z, t)))
        asm.term(b, 1, one, "h_ppp", (x, y, P[z, t]))
        asm.term(b, 1, one, "h_ppp", (P[x, y], z, t))
        asm.term(b, -1, pi[x], "h_ppp", (y, z, t))
        asm.term(b, -1, one, "h_ppp", (x, P[y, z], t))
        asm.term(b, -1, one, "h_ppp", (x, y, z))
    for x, y, z in itertools.product(range(n), repeat=3):
        for s in range(m):
            b = asm.row(("cocycle_pppg", (x, y, z, s)))
            sx = gP[s, x]
            asm.term(b, 1, gam[s], "h_ppp", (x, y, z))
            asm.term(b, 1, one, "h_ppg", (P[x, y], z, s))
            asm.term(b, 1, one, "h_ppg", (x, y, s))
            asm.term(b, -1, one, "h_ppp", (sx, gP[s, y], gP[s, z]))
            asm.term(b, -1, pi[sx], "h_ppg", (y, z, s))
            asm.term(b, -1, one, "h_ppg", (x, P[y, z], s))
    for x, y in itertools.product(range(n), repeat=2):
        for s, t in itertools.product(range(m), repeat=2):
            b = asm.row(("cocycle_ppgg", (x, y, s, t)))
            st = G[s, t]
            asm.term(b, 1, gam[s], "h_ppg", (x, y, t))
            asm.term(b, 1, one, "h_ppg", (gP[t, x], gP[t, y], s))
            asm.term(b, 1, one, "h_pgg", (x, s, t))
            asm.term(b, 1, pi[gP[st, x]], "h_pgg", (y, s, t))
            asm.term(b, -1, one, "h_ppg", (x, y, st))
            asm.term(b, -1, one, "h_pgg", (P[x, y], s, t))
    for x in range(n):
        for s, t, u in itertools.product(range(m), repeat=3):
            b = asm.row(("cocycle_pggg", (x, s, t, u)))
            asm.term(b, 1, gam[s], "h_pgg", (x, t, u))
            asm.term(b, 1, one, "h_pgg", (x, s, G[t, u]))
            asm.term(b, -1, one, "h_pgg", (x, G[s, t], u))
            asm.term(b, -1, one, "h_pgg", (gP[u, x], s, t))
    return asm.finish()


def _to_exponent(mat: CoboundaryMatrix, e: int) -> np.ndarray:
    """Rescale rows so that every output coordinate lives in Z/e."""
    scale = e // mat.row_moduli
    return np.mod(mat.matrix * scale[:, None], e)


class _SNFData:
    """Cached lattice data for one module: Z^3 basis and the quotient map."""

    def __init__(self, em: EquivariantModule, bound: int):
        self.em = em
        e = em.a.exponent
        self.e = e
        cond = cocycle_condition_matrix(em)
        n3 = cond.matrix.shape[1]
        self.n3 = n3
        self.col_moduli = cond.col_moduli
        rows = _to_exponent(cond, e)
        rows = rows[rows.any(axis=1)]
        if len(rows):
            rows = np.unique(rows, axis=0)
        # Z^3 = {v : rows @ v == 0 mod e} = V diag(q) Z^n with q_i = e / gcd(s_i, e)
        rows = rows.reshape(len(rows), n3)
        el = snf_full(rows, want_u=False, want_inv=True, bound=bound)
        s = diagonal(el.A) + [0] * (n3 - min(el.A.shape))
        self.q = np.array([e // math.gcd(int(si), e) for si in s[:n3]], dtype=np.int64)
        self.V, self.Vi = el.V, el.Vi
        # B^3 + modulus relations, expressed in the Z^3 basis
        m2 = coboundary_matrix(em, 2)
        self.m2 = m2
        gens = np.hstack([m2.matrix, np.diag(self.col_moduli)]) if n3 else np.zeros((0, 0), np.int64)
        R = self.Vi @ gens
        if np.any(R % self.q[:, None]):
            raise ArithmeticError("coboundary generators are not in the cocycle lattice")
        R = R // self.q[:, None]
        rel = snf_full(R, want_u=True, want_v=False, want_inv=True, bound=bound)
        self.UR, self.URi = rel.U, rel.Ui
        self.s = np.array(diagonal(rel.A) + [0] * (n3 - min(rel.A.shape)), dtype=np.int64)[:n3]
        if np.any(self.s == 0):
            raise ArithmeticError("H^3 came out infinite; lattice computation is inconsistent")
        self.nontrivial = np.nonzero(self.s > 1)[0]

    def lattice_coords(self, v):
        x = self.Vi @ v
        if np.any(x % self.q):
            return None
        return x // self.q

    def class_coords(self, v) -> Optional[tuple]:
        x = self.lattice_coords(v)
        if x is None:
            return None
        y = self.UR @ x
        return tuple(int(y[i] % self.s[i]) for i in self.nontrivial)

    def representative(self, coords) -> np.ndarray:
        y = np.zeros(self.n3, dtype=np.int64)
        y[self.nontrivial] = coords
        x = self.URi @ y
        return np.mod(self.V @ (self.q * x), self.col_moduli)


@functools.lru_cache(maxsize=64)
def _snf_data(em: EquivariantModule, bound: int = DEFAULT_BOUND) -> _SNFData:
    return _SNFData(em, bound)


def class_coordinates(h: Cochain3, *, bound: int = DEFAULT_BOUND) -> Optional[tuple]:
    """Coordinates of the class of h in H^3 = sum of Z/d_i, or None if h is not a cocycle."""
    return _snf_data(h.em, bound).class_coords(h.coordinates())


# ---------------------------------------------------------------- enumeration


def _all_tables(em, part, sig, cap):
    """Every normalized table for one part, as a batch array."""
    shape = _shape(em, sig)
    slots = [idx for idx in np.ndindex(*shape[:-1]) if all(i != 0 for i in idx)]
    count = em.a.order ** len(slots)
    if count > cap:
        raise CapExceeded(f"{part}: {count} candidate tables exceed the cap {cap}", witness=(part, count))
    out = np.zeros((count,) + shape, dtype=np.int64)
    elems = em.a.elements
    for i, combo in enumerate(itertools.product(range(em.a.order), repeat=len(slots))):
        for idx, a in zip(slots, combo):
            out[(i,) + idx] = elems[a]
    return out


def _row_keys(arr) -> list:
    flat = np.ascontiguousarray(arr.reshape(len(arr), -1))
    return [r.tobytes() for r in flat]


def _group_by_key(keys) -> dict:
    out = {}
    for i, k in enumerate(keys):
        out.setdefault(k, []).append(i)
    return out


def enumerate_cocycles(em: EquivariantModule, fixed_xi=None, cap: int = DEFAULT_CAP):
    """All normalized 3-cocycles (optionally with a fixed Pi^3 part), lex-ordered.

    Returns a tuple of three batch arrays (h_ppp, h_ppg, h_pgg). The
    conditions split by part: cocycle_pppp involves only h_ppp,
    cocycle_pggg only h_pgg, cocycle_pppg couples h_ppp with h_ppg and
    cocycle_ppgg couples h_ppg with h_pgg. Each part is
    enumerated on its own and the couplings are matched by residual value,
    which is exact since every residual is additive in the parts.
    """
    sigs = PART_SIGNATURES[3]
    mod = em.moduli
    z = {name: np.zeros((1,) + _shape(em, s), np.int64) for name, s in sigs.items()}

    if fixed_xi is None:
        ppp = _all_tables(em, "h_ppp", sigs["h_ppp"], cap)
    else:
        ppp = np.mod(np.asarray(fixed_xi, dtype=np.int64), mod)[None]
    ppg = _all_tables(em, "h_ppg", sigs["h_ppg"], cap)
    pgg = _all_tables(em, "h_pgg", sigs["h_pgg"], cap)

    r_pppp = np.mod(_residuals(em, ppp, z["h_ppg"], z["h_pgg"])["cocycle_pppp"], mod)
    ppp = ppp[~r_pppp.reshape(len(ppp), -1).any(axis=1)]
    r_pggg = np.mod(_residuals(em, z["h_ppp"], z["h_ppg"], pgg)["cocycle_pggg"], mod)
    pgg = pgg[~r_pggg.reshape(len(pgg), -1).any(axis=1)]

    res_ppp = _residuals(em, ppp, np.zeros((len(ppp),) + ppg.shape[1:], np.int64), z["h_pgg"])
    res_ppg = _residuals(em, np.zeros((len(ppg),) + ppp.shape[1:], np.int64), ppg, z["h_pgg"])
    res_pgg = _residuals(em, z["h_ppp"], np.zeros((len(pgg),) + ppg.shape[1:], np.int64), pgg)
    by_pppg = _group_by_key(_row_keys(np.mod(-res_ppp["cocycle_pppg"], mod)))
    by_ppgg = _group_by_key(_row_keys(np.mod(-res_pgg["cocycle_ppgg"], mod)))
    key_pppg = _row_keys(np.mod(res_ppg["cocycle_pppg"], mod))
    key_ppgg = _row_keys(np.mod(res_ppg["cocycle_ppgg"], mod))

    triples = []
    for j in range(len(ppg)):
        for i in by_pppg.get(key_pppg[j], ()):
            for l in by_ppgg.get(key_ppgg[j], ()):
                triples.append((i, j, l))
                if len(triples) > cap:
                    raise CapExceeded(f"more than {cap} cocycles", witness=("cocycles", cap))
    if not triples:
        shape = lambda a: (0,) + a.shape[1:]
        return np.zeros(shape(ppp), np.int64), np.zeros(shape(ppg), np.int64), np.zeros(shape(pgg), np.int64)
    ti = np.array(triples)
    out = ppp[ti[:, 0]], ppg[ti[:, 1]], pgg[ti[:, 2]]
    coords = _coordinate_matrix(em, out)
    if coords.shape[1] == 0:
        return out
    order = np.lexsort(coords.T[::-1])
    return tuple(a[order] for a in out)


def _coordinate_matrix(em, parts) -> np.ndarray:
    """Batch of cochain tables -> matrix of free-slot coordinate rows."""
    cols = []
    for (name, sig), arr in zip(PART_SIGNATURES[3].items(), parts):
        shape = _shape(em, sig)
        for idx in np.ndindex(*shape[:-1]):
            if all(i != 0 for i in idx):
                cols.append(arr[(slice(None),) + idx])
    if not cols:
        return np.zeros((len(parts[0]), 0), np.int64)
    return np.concatenate(cols, axis=1)


def _all_coboundaries(em, cap) -> np.ndarray:
    sigs = PART_SIGNATURES[2]
    g_pp = _all_tables(em, "g_pp", sigs["g_pp"], cap)
    g_pg = _all_tables(em, "g_pg", sigs["g_pg"], cap)
    if len(g_pp) * len(g_pg) > cap:
        raise CapExceeded(f"{len(g_pp) * len(g_pg)} 2-cochains exceed the cap {cap}", witness=("C2", cap))
    a = np.repeat(g_pp, len(g_pg), axis=0)
    b = np.tile(g_pg, (len(g_pp),) + (1,) * (g_pg.ndim - 1))
    coords = _coordinate_matrix(em, _d2(em, a, b))
    return np.unique(coords, axis=0)


def _prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def invariant_factors_from_orders(orders: list) -> list:
    """Invariant factors of a finite abelian group from the list of its element orders."""
    size = len(orders)
    if size <= 1:
        return []
    prime_parts = []
    for p in _prime_factors(size):
        ranks = []
        j, prev = 1, 1
        while True:
            count = sum(1 for o in orders if (p**j) % o == 0 and _is_p_power(o, p))
            r = round(math.log(count / prev, p))
            if r == 0:
                break
            ranks.append(r)
            prev = count
            j += 1
        # ranks[j-1] = number of cyclic p-factors with exponent >= j
        exps = []
        for j, r in enumerate(ranks, start=1):
            nxt = ranks[j] if j < len(ranks) else 0
            exps += [j] * (r - nxt)
        prime_parts.append(sorted((p**x for x in exps), reverse=True))
    width = max(len(pp) for pp in prime_parts)
    factors = [1] * width
    for pp in prime_parts:
        for i, v in enumerate(pp):
            factors[i] *= v
    return sorted(factors)


def _is_p_power(o, p):
    while o % p == 0:
        o //= p
    return o == 1


def _h3_enum(em, cap):
    mod = np.tile(em.moduli, len(free_slots(em, 3)))
    z = _coordinate_matrix(em, enumerate_cocycles(em, cap=cap))
    b = _all_coboundaries(em, cap)
    b_keys = set(_row_keys(b))
    seen = set()
    reps = []
    for row in z:  # already lex-sorted, so the first member met is the class minimum
        key = row.tobytes()
        if key in seen:
            continue
        reps.append(row)
        seen.update(_row_keys(np.mod(row[None, :] + b, mod)))
    if len(z) != len(reps) * len(b):
        raise ArithmeticError("coset sizes do not match |Z3| / |B3|")
    orders = []
    for row in reps:
        j = 1
        while np.mod(j * row, mod).tobytes() not in b_keys:
            j += 1
        orders.append(j)
    return reps, orders, len(z), len(b)


def compute_h3(em: EquivariantModule, method: str = "snf", *, cap: int = DEFAULT_CAP,
               representative_cap: int = 4096, bound: int = DEFAULT_BOUND) -> H3Result:
    """H^3 of the truncated complex: order, invariant factors, representatives.

    With ``method="snf"`` representatives are produced only when the order is
    at most ``representative_cap``; with ``method="enum"`` they are always
    the lexicographically smallest cocycle of each class.
    """
    if method == "snf":
        data = _snf_data(em, bound)
        factors = [int(s) for s in data.s if s > 1]
        order = int(np.prod(factors, dtype=np.int64)) if factors else 1
        reps = None
        if order <= representative_cap:
            ranges = [range(int(data.s[i])) for i in data.nontrivial]
            reps = [Cochain3.from_coordinates(em, data.representative(c)) for c in itertools.product(*ranges)]
        return H3Result(order, factors, reps, "snf")
    if method == "enum":
        reps, orders, nz, nb = _h3_enum(em, cap)
        factors = invariant_factors_from_orders(orders)
        return H3Result(
            len(reps), factors, [Cochain3.from_coordinates(em, r) for r in reps], "enum", nz, nb
        )
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------- solving


def _solve_mod(A, b, e, bound):
    """Some integer y with A @ y == b (mod e), or None."""
    rows, cols = A.shape
    el = snf_full(A, want_u=True, want_v=True, bound=bound)
    bp = np.mod(el.U @ b, e)
    d = diagonal(el.A)
    z = np.zeros(cols, dtype=np.int64)
    for i in range(rows):
        s = d[i] if i < len(d) else 0
        g = math.gcd(s, e)
        if bp[i] % g:
            return None
        if s:
            # s z == b (mod e): z = (b/g) * inverse(s/g) mod e/g
            mm = e // g
            z[i] = (int(bp[i]) // g) * pow(s // g, -1, mm) % mm if mm > 1 else 0
    return el.V @ z


def _solve_enum(em, target, pi_part_zero, cap):
    sigs = PART_SIGNATURES[2]
    g_pg = _all_tables(em, "g_pg", sigs["g_pg"], cap)
    if pi_part_zero:
        g_pp = np.zeros((1,) + _shape(em, sigs["g_pp"]), np.int64)
    else:
        g_pp = _all_tables(em, "g_pp", sigs["g_pp"], cap)
    if len(g_pp) * len(g_pg) > cap:
        raise CapExceeded(f"{len(g_pp) * len(g_pg)} 2-cochains exceed the cap {cap}", witness=("C2", cap))
    want = target.key()
    for a in g_pp:
        batch = _d2(em, np.broadcast_to(a, (len(g_pg),) + a.shape), g_pg)
        for j in range(len(g_pg)):
            if b"".join(np.ascontiguousarray(p[j]).tobytes() for p in batch) == want:
                return Cochain2(em, g_pp=a, g_pg=g_pg[j])
    return None


def solve_coboundary(em: EquivariantModule, target: Cochain3, *, pi_part_zero: bool = False,
                     method: str = "snf", cap: int = DEFAULT_CAP,
                     bound: int = DEFAULT_BOUND) -> Optional[Cochain2]:
    """Find g with d2(g) == target, or return None if target is not a coboundary.

    ``pi_part_zero`` restricts the search to g with g_pp identically zero.
    The SNF route falls back to enumeration if elimination overflows.
    """
    if target.em != em:
        raise ModuleMismatch("target lives over a different module")
    bad = [c for c in _normalization_failures(target)]
    if bad:
        raise NotNormalized(f"target is not normalized at {bad[0]}", witness=bad[0])
    if method == "enum":
        return _solve_enum(em, target, pi_part_zero, cap)
    m2 = coboundary_matrix(em, 2)
    cols = np.arange(m2.matrix.shape[1])
    if pi_part_zero:
        cols = np.array([i for i in cols if m2.col_slots[i // max(em.k, 1)][0] == "g_pg"], dtype=np.int64)
    e = em.a.exponent
    A = _to_exponent(m2, e)[:, cols]
    b = np.mod(target.coordinates() * (e // m2.row_moduli), e)
    try:
        y = _solve_mod(A, b, e, bound) if A.size or b.any() else np.zeros(len(cols), np.int64)
    except SNFOverflow:
        return _solve_enum(em, target, pi_part_zero, cap)
    if y is None:
        return None
    full = np.zeros(m2.matrix.shape[1], dtype=np.int64)
    full[cols] = y
    g = Cochain2.from_coordinates(em, np.mod(full, m2.col_moduli))
    if d2(g) != target:
        raise ArithmeticError("linear solve returned a non-witness")
    return g


def _normalization_failures(h):
    from gammacat.cochain import normalization_report

    return [c.witness for c in normalization_report(h).failed]
