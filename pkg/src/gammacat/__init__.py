"""Finite Gamma-graded categorical groups: equivariant cohomology, factor sets,
crossed products and a desk-scale check of their classification."""

from gammacat.algebra import (
    EquivariantModule,
    FiniteAbelianGroup,
    FiniteGroup,
    cyclic_group,
    make_action,
    trivial_action,
    validate_action,
    validate_equivariant_module,
    validate_group,
)
from gammacat.classify import enumerate_z3, partition_classes, verify_omega
from gammacat.cochain import Cochain1, Cochain2, Cochain3, combine, d1, d2, is_cocycle3
from gammacat.crossed import build_crossed_product, build_equivalence, verify_crossed_product
from gammacat.factorset import (
    FactorSet,
    are_cohomologous_factor_sets,
    derive_equivariant_structure,
    factor_set_from_cocycle,
    induce_cocycle,
    strictify,
    validate_factor_set,
)
from gammacat.grcat import build_gr_category
from gammacat.homology import compute_h3, solve_coboundary

__version__ = "0.1.0"
