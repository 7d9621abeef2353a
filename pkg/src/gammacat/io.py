"""JSON (de)serialization for every value the CLI reads or writes.

Loaders are strict: a missing key, a non-integer entry, a wrong table shape
or an out-of-range element raises ``ShapeError``. Algebraic laws are then
checked by the usual validators. Group elements are indices ``0..order-1``;
elements of A are written as residue lists (one residue per invariant
factor); integer element indices are also accepted on input.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from gammacat.algebra import (
    EquivariantModule,
    FiniteAbelianGroup,
    FiniteGroup,
    trivial_action,
    validate_action,
    validate_equivariant_module,
    validate_group,
)
from gammacat.cochain import PART_SIGNATURES, Cochain, cochain_class
from gammacat.errors import ShapeError
from gammacat.factorset import CohomologyWitness, FactorSet
from gammacat.grcat import GrCategory, build_gr_category
from gammacat.report import Report

__all__ = [
    "dumps",
    "group_to_json",
    "group_from_json",
    "abelian_to_json",
    "abelian_from_json",
    "module_to_json",
    "module_from_json",
    "cochain_to_json",
    "cochain_from_json",
    "factor_set_to_json",
    "factor_set_from_json",
    "witness_to_json",
    "witness_from_json",
    "xi_from_json",
]


def dumps(doc: Any) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _require(doc, key, kind=None):
    if not isinstance(doc, dict):
        raise ShapeError(f"expected a JSON object holding {key!r}")
    if key not in doc:
        raise ShapeError(f"missing key {key!r}")
    v = doc[key]
    if kind is not None and not isinstance(v, kind):
        raise ShapeError(f"{key!r} must be a {kind.__name__ if isinstance(kind, type) else 'valid value'}")
    return v


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _int(v, what) -> int:
    if not _is_int(v):
        raise ShapeError(f"{what}: expected an integer, got {v!r}")
    return v


def _index(v, size, what) -> int:
    v = _int(v, what)
    if not 0 <= v < size:
        raise ShapeError(f"{what}: index {v} outside 0..{size - 1}")
    return v


def _int_list(v, what) -> list:
    if not isinstance(v, list):
        raise ShapeError(f"{what}: expected a list")
    return [_int(x, what) for x in v]


def _keyed(doc, size, what) -> list:
    """A mapping {"0": v0, ..., "size-1": v} (or a plain list) -> list in index order."""
    if isinstance(doc, list):
        if len(doc) != size:
            raise ShapeError(f"{what}: expected {size} entries, got {len(doc)}")
        return doc
    if not isinstance(doc, dict):
        raise ShapeError(f"{what}: expected an object keyed by element index")
    keys = set(doc)
    want = {str(i) for i in range(size)}
    if keys != want:
        raise ShapeError(f"{what}: keys must be exactly {sorted(want, key=int)}")
    return [doc[str(i)] for i in range(size)]


# ----------------------------------------------------------------- elements of A


def _a_elem(v, a: FiniteAbelianGroup, what) -> list:
    if _is_int(v):
        return list(a.element(_index(v, a.order, what)))
    vals = _int_list(v, what)
    if len(vals) != a.rank:
        raise ShapeError(f"{what}: expected {a.rank} residues, got {len(vals)}")
    for r, d in zip(vals, a.invariant_factors):
        if not 0 <= r < d:
            raise ShapeError(f"{what}: residue {r} outside 0..{d - 1}")
    return vals


def _a_table(v, a: FiniteAbelianGroup, shape, what) -> np.ndarray:
    """Nested lists of depth len(shape) with A elements at the leaves -> residue array."""
    out = np.zeros(tuple(shape) + (a.rank,), np.int64)

    def walk(node, idx):
        depth = len(idx)
        if depth == len(shape):
            out[idx] = _a_elem(node, a, f"{what}{list(idx)}")
            return
        if not isinstance(node, list) or len(node) != shape[depth]:
            raise ShapeError(f"{what}: expected {shape[depth]} entries at depth {depth}")
        for i, child in enumerate(node):
            walk(child, idx + (i,))

    walk(v, ())
    return out


def _a_out(arr) -> list:
    return np.asarray(arr).tolist()


# ----------------------------------------------------------------- groups and modules


def group_to_json(g: FiniteGroup) -> dict:
    return {"order": g.order, "table": g.table.tolist()}


def group_from_json(doc) -> FiniteGroup:
    order = _int(_require(doc, "order"), "order")
    table = _require(doc, "table", list)
    if order < 1 or len(table) != order or any(not isinstance(r, list) or len(r) != order for r in table):
        raise ShapeError(f"table must be {order} x {order}")
    rows = [_int_list(r, "table") for r in table]
    return validate_group(rows)


def abelian_to_json(a: FiniteAbelianGroup) -> dict:
    return {"invariant_factors": list(a.invariant_factors)}


def abelian_from_json(doc) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(_int_list(_require(doc, "invariant_factors"), "invariant_factors"))


def _action_to_json(act, carrier) -> dict:
    if isinstance(carrier, FiniteAbelianGroup):
        images = {str(s): [list(carrier.element(i)) for i in row] for s, row in enumerate(act.maps)}
    else:
        images = {str(s): row.tolist() for s, row in enumerate(act.maps)}
    return {"maps": images}


def _action_maps(doc, actor, carrier, what) -> list:
    rows = _keyed(_require(doc, "maps"), actor.order, what)
    out = []
    for s, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != carrier.order:
            raise ShapeError(f"{what}[{s}]: expected {carrier.order} images")
        if isinstance(carrier, FiniteAbelianGroup):
            out.append([int(carrier.index_of(_a_elem(v, carrier, f"{what}[{s}]"))) for v in row])
        else:
            out.append([_index(v, carrier.order, f"{what}[{s}]") for v in row])
    return out


def module_to_json(em: EquivariantModule) -> dict:
    return {
        "pi": group_to_json(em.pi),
        "gamma": group_to_json(em.gamma),
        "a": abelian_to_json(em.a),
        "pi_on_a": _action_to_json(em.pi_on_a, em.a),
        "gamma_on_pi": _action_to_json(em.gamma_on_pi, em.pi),
        "gamma_on_a": _action_to_json(em.gamma_on_a, em.a),
    }


def module_from_json(doc) -> EquivariantModule:
    """Build and validate a module. ``gamma`` and any action may be omitted (trivial)."""
    if not isinstance(doc, dict):
        raise ShapeError("module document must be a JSON object")
    pi = group_from_json(_require(doc, "pi"))
    gamma = group_from_json(doc["gamma"]) if "gamma" in doc else validate_group([[0]])
    a = abelian_from_json(_require(doc, "a"))

    def action(key, actor, carrier):
        if key not in doc:
            return trivial_action(actor, carrier)
        return validate_action(actor, carrier, _action_maps(doc[key], actor, carrier, key))

    return validate_equivariant_module(
        pi, gamma, a,
        action("pi_on_a", pi, a),
        action("gamma_on_pi", gamma, pi),
        action("gamma_on_a", gamma, a),
    )


# ----------------------------------------------------------------- cochains


def _part_shape(em, sig):
    return tuple(em.n if ch == "p" else em.m for ch in sig)


def cochain_to_json(c: Cochain) -> dict:
    return {name: _a_out(arr) for name, arr in c.parts.items()}


def cochain_from_json(em: EquivariantModule, doc, degree: int = 3) -> Cochain:
    if not isinstance(doc, dict):
        raise ShapeError("cochain document must be a JSON object")
    sigs = PART_SIGNATURES[degree]
    extra = set(doc) - set(sigs)
    if extra:
        raise ShapeError(f"unknown cochain parts {sorted(extra)}")
    parts = {name: _a_table(_require(doc, name), em.a, _part_shape(em, sig), name) for name, sig in sigs.items()}
    return cochain_class(degree)(em, **parts)


def xi_from_json(em: EquivariantModule, doc) -> np.ndarray:
    """Read the Pi^3 table under key "xi" (or "h_ppp")."""
    if isinstance(doc, dict) and "xi" not in doc and "h_ppp" in doc:
        return _a_table(doc["h_ppp"], em.a, (em.n,) * 3, "h_ppp")
    return _a_table(_require(doc, "xi"), em.a, (em.n,) * 3, "xi")


# ----------------------------------------------------------------- factor sets


def factor_set_to_json(fs: FactorSet) -> dict:
    a = fs.base.a
    m = fs.gamma.order
    return {
        "xi": _a_out(fs.base.xi),
        "phi": {str(s): fs.phi[s].tolist() for s in range(m)},
        "f": {str(s): [list(a.element(i)) for i in fs.f[s]] for s in range(m)},
        "ftilde": {str(s): _a_out(fs.ftilde[s]) for s in range(m)},
        "c": {str(s): _a_out(fs.c[s]) for s in range(m)},
        "t": {str(s): {str(u): _a_out(fs.t[s, u]) for u in range(m)} for s in range(m)},
    }


def factor_set_from_json(em: EquivariantModule, doc) -> FactorSet:
    """Read a factor set over the Pi, Gamma, A and Pi-action of ``em``.

    The Gamma-actions of ``em`` are not used; the factor set carries its own
    phi and f. The base category is built (and xi validated) from "xi".
    """
    if not isinstance(doc, dict):
        raise ShapeError("factor set document must be a JSON object")
    n, m, a = em.n, em.m, em.a
    base = build_gr_category(em, xi_from_json(em, doc))
    phi = [
        [_index(v, n, f"phi[{s}]") for v in _checked_list(row, n, f"phi[{s}]")]
        for s, row in enumerate(_keyed(_require(doc, "phi"), m, "phi"))
    ]
    f = [
        [int(a.index_of(_a_elem(v, a, f"f[{s}]"))) for v in _checked_list(row, a.order, f"f[{s}]")]
        for s, row in enumerate(_keyed(_require(doc, "f"), m, "f"))
    ]
    ftilde = np.stack([
        _a_table(v, a, (n, n), f"ftilde[{s}]") for s, v in enumerate(_keyed(_require(doc, "ftilde"), m, "ftilde"))
    ]) if m else np.zeros((0, n, n, a.rank), np.int64)
    c = np.array([_a_elem(v, a, f"c[{s}]") for s, v in enumerate(_keyed(_require(doc, "c"), m, "c"))], np.int64)
    t_rows = _keyed(_require(doc, "t"), m, "t")
    t = np.stack([
        np.stack([_a_table(v, a, (n,), f"t[{s}][{u}]") for u, v in enumerate(_keyed(row, m, f"t[{s}]"))])
        for s, row in enumerate(t_rows)
    ])
    return FactorSet(base, em.gamma, phi, f, ftilde, c.reshape(m, a.rank), t)


def _checked_list(v, size, what):
    if not isinstance(v, list) or len(v) != size:
        raise ShapeError(f"{what}: expected a list of {size} entries")
    return v


def witness_to_json(w: CohomologyWitness) -> dict:
    return {"u": _a_out(w.u)}


def witness_from_json(em: EquivariantModule, doc) -> CohomologyWitness:
    return CohomologyWitness(_a_table(_require(doc, "u"), em.a, (em.n, em.m), "u"))


def report_to_json(rep: Report) -> dict:
    return rep.to_dict()
