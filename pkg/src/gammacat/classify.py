"""Desk-scale verification of the classification of Gamma-extensions.

Both sides of the correspondence are enumerated independently: cohomology
classes of cocycles with a fixed Pi^3 part on one side, cohomology classes
of factor sets over the same base category on the other. The report records
the pairing and whether it is a bijection.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from gammacat.algebra import EquivariantModule
from gammacat.cochain import Cochain3, combine
from gammacat.crossed import build_crossed_product, verify_crossed_product
from gammacat.errors import ModuleMismatch
from gammacat.factorset import (
    FactorSet,
    are_cohomologous_factor_sets,
    factor_set_from_cocycle,
    induce_cocycle,
    strictify,
    validate_factor_set,
)
from gammacat.grcat import GrCategory
from gammacat.homology import DEFAULT_CAP, enumerate_cocycles, solve_coboundary

__all__ = ["enumerate_z3", "partition_classes", "verify_omega", "ClassificationReport", "fingerprint"]


def enumerate_z3(em: EquivariantModule, fixed_xi=None, cap: int = DEFAULT_CAP) -> list:
    """All normalized 3-cocycles, optionally with a fixed Pi^3 part, in lex order."""
    ppp, ppg, pgg = enumerate_cocycles(em, fixed_xi=fixed_xi, cap=cap)
    return [Cochain3(em, check=False, h_ppp=a, h_ppg=b, h_pgg=c) for a, b, c in zip(ppp, ppg, pgg)]


def _lex_key(h: Cochain3):
    return tuple(h.coordinates().tolist())


def partition_classes(em: EquivariantModule, cocycles: list, *, cap: int = DEFAULT_CAP) -> list:
    """Group cocycles by cohomology class.

    Returns a list of classes, each a lex-sorted list whose first element is
    the representative; classes are ordered by representative.
    """
    classes = []
    for h in sorted(cocycles, key=_lex_key):
        for cls in classes:
            if solve_coboundary(em, combine(h, -1, cls[0]), cap=cap) is not None:
                cls.append(h)
                break
        else:
            classes.append([h])
    return classes


def fingerprint(fs: FactorSet) -> str:
    """Short stable digest of the crossed product's defining tables."""
    d = build_crossed_product(fs)
    blob = b"".join(a.tobytes() for a in (d.phi, d.f, d.ftilde, d.t, d.xi))
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class ClassificationReport:
    em: EquivariantModule
    xi: object
    cocycle_count: int
    cohomology_class_count: int
    factor_set_class_count: int
    pairing: list = field(default_factory=list)  # dicts: cocycle, factor_set, fingerprint, class indices
    well_defined: bool = False
    surjective: bool = False
    injective: bool = False
    crossed_products_verified: bool = False
    bijection_verified: bool = False

    def to_dict(self) -> dict:
        from gammacat.io import cochain_to_json

        return {
            "cocycle_count": self.cocycle_count,
            "cohomology_class_count": self.cohomology_class_count,
            "factor_set_class_count": self.factor_set_class_count,
            "well_defined": self.well_defined,
            "surjective": self.surjective,
            "injective": self.injective,
            "crossed_products_verified": self.crossed_products_verified,
            "bijection_verified": self.bijection_verified,
            "pairing": [
                {
                    "cohomology_class": p["cohomology_class"],
                    "factor_set_class": p["factor_set_class"],
                    "representative": cochain_to_json(p["cocycle"]),
                    "fingerprint": p["fingerprint"],
                }
                for p in self.pairing
            ],
        }


def verify_omega(em: EquivariantModule, base: GrCategory, cap: int = DEFAULT_CAP) -> ClassificationReport:
    """Enumerate both sides of the classification over ``base`` and pair them."""
    if em.pi != base.em.pi or em.a != base.em.a or em.pi_on_a != base.em.pi_on_a:
        raise ModuleMismatch("module does not extend the base category's Pi-module")
    z = enumerate_z3(em, fixed_xi=base.xi, cap=cap)
    h_classes = partition_classes(em, z, cap=cap)

    def h_class_of(h):
        for i, cls in enumerate(h_classes):
            if solve_coboundary(em, combine(h, -1, cls[0]), cap=cap) is not None:
                return i
        return None

    # factor-set side: build, validate one by one, partition by cohomologousness
    factor_sets = []
    for h in z:
        fs = factor_set_from_cocycle(base, em, h)
        rep = validate_factor_set(fs)
        if not rep.ok:
            raise ArithmeticError(f"constructed factor set fails {rep.failed[0].name}")
        factor_sets.append(fs)
    fs_classes = []
    for fs in factor_sets:
        for cls in fs_classes:
            if are_cohomologous_factor_sets(fs, cls[0], cap=cap) is not None:
                cls.append(fs)
                break
        else:
            fs_classes.append([fs])

    well_defined = True
    image = []
    for cls in fs_classes:
        targets = {h_class_of(induce_cocycle(strictify(fs)[0])) for fs in cls}
        if len(targets) != 1 or None in targets:
            well_defined = False
        image.append(min(t for t in targets if t is not None) if targets - {None} else None)
    surjective = set(image) >= set(range(len(h_classes)))
    injective = len(set(image)) == len(image) and None not in image

    pairing = []
    cp_ok = True
    for j, (cls, i) in enumerate(zip(fs_classes, image)):
        fs = cls[0]
        cp_ok &= verify_crossed_product(build_crossed_product(fs)).ok
        pairing.append(
            {
                "cohomology_class": i,
                "factor_set_class": j,
                "cocycle": h_classes[i][0] if i is not None else induce_cocycle(fs),
                "factor_set": fs,
                "fingerprint": fingerprint(fs),
            }
        )
    pairing.sort(key=lambda p: (p["cohomology_class"] is None, p["cohomology_class"] or 0))
    bijection = (
        len(h_classes) == len(fs_classes) and well_defined and surjective and injective and cp_ok
    )
    return ClassificationReport(
        em, base.xi, len(z), len(h_classes), len(fs_classes), pairing,
        well_defined, surjective, injective, cp_ok, bijection,
    )
