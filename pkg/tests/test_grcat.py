import itertools

import numpy as np
import pytest

from conftest import make_module
from gammacat.errors import NotACocycle, NotNormalized, ObjectMismatch, ShapeError
from gammacat.grcat import (
    GrFunctorData,
    GrMorphism,
    build_gr_category,
    check_gr_functor,
    compose_morphisms,
    hom,
    pentagon_report,
    tensor_morphisms,
)
from gammacat.homology import enumerate_cocycles


def _xi(n, k=1, **entries):
    xi = np.zeros((n, n, n, k), int)
    for key, v in entries.items():
        xi[tuple(int(c) for c in key[1:])] = v
    return xi


def test_zero_constraint_is_valid():
    c = build_gr_category(make_module(3, 1, 3), _xi(3))
    assert pentagon_report(c).ok


def test_z2_constraint_is_valid():
    build_gr_category(make_module(2, 1, 2), _xi(2, p111=1))


def test_z3_coefficients_reject_z2_constraint():
    with pytest.raises(NotACocycle) as ei:
        build_gr_category(make_module(2, 1, 3), _xi(2, p111=1))
    assert ei.value.witness == (1, 1, 1, 1)


def test_unnormalized_constraint():
    with pytest.raises(NotNormalized) as ei:
        build_gr_category(make_module(2, 1, 2), _xi(2, p011=1))
    assert ei.value.witness == (0, 1, 1)


def test_wrong_shape():
    with pytest.raises(ShapeError):
        build_gr_category(make_module(2, 1, 2), np.zeros((2, 2, 1)))


def test_compose_examples():
    em = make_module(2, 1, 3)
    c = build_gr_category(em, _xi(2))
    assert compose_morphisms(c, GrMorphism(1, 0), GrMorphism(1, 2)) == GrMorphism(1, 2)
    assert compose_morphisms(c, GrMorphism(1, 1), GrMorphism(1, 2)) == GrMorphism(1, 0)
    with pytest.raises(ObjectMismatch):
        compose_morphisms(c, GrMorphism(0, 1), GrMorphism(1, 1))


def test_compose_in_klein_coefficients():
    from gammacat.algebra import FiniteAbelianGroup, cyclic_group, trivial_action, validate_equivariant_module

    P, G, A = cyclic_group(2), cyclic_group(1), FiniteAbelianGroup([2, 2])
    em = validate_equivariant_module(P, G, A, trivial_action(P, A), trivial_action(G, P), trivial_action(G, A))
    c = build_gr_category(em, np.zeros((2, 2, 2, 2), int))
    u, v = int(A.index_of([1, 0])), int(A.index_of([1, 1]))
    assert A.element(compose_morphisms(c, GrMorphism(1, u), GrMorphism(1, v)).component) == (0, 1)


def test_tensor_examples():
    em = make_module(2, 1, 3, pi_on_a=2)  # Pi acts on Z/3 by negation
    c = build_gr_category(em, _xi(2))
    assert tensor_morphisms(c, GrMorphism(1, 0), GrMorphism(1, 1)) == GrMorphism(0, 2)
    assert tensor_morphisms(c, GrMorphism(0, 0), GrMorphism(1, 1)) == GrMorphism(1, 1)
    triv = build_gr_category(make_module(2, 1, 3), _xi(2))
    assert tensor_morphisms(triv, GrMorphism(1, 1), GrMorphism(1, 1)) == GrMorphism(0, 2)


def test_hom_sets():
    c = build_gr_category(make_module(2, 1, 3), _xi(2))
    assert hom(c, 0, 1) == []
    assert len(hom(c, 1, 1)) == 3


def test_compose_associative_and_tensor_functorial():
    c = build_gr_category(make_module(2, 1, 3, pi_on_a=2), _xi(2))
    for x, y in itertools.product(range(2), repeat=2):
        for u, u2, v, v2 in itertools.product(range(3), repeat=4):
            a, a2, b, b2 = GrMorphism(x, u), GrMorphism(x, u2), GrMorphism(y, v), GrMorphism(y, v2)
            lhs = tensor_morphisms(c, compose_morphisms(c, a, a2), compose_morphisms(c, b, b2))
            rhs = compose_morphisms(c, tensor_morphisms(c, a, b), tensor_morphisms(c, a2, b2))
            assert lhs == rhs


def test_pentagon_agrees_with_cocycle_identity():
    """Every normalized Pi^3 table: pentagon holds iff the table is accepted."""
    em = make_module(2, 1, 3, pi_on_a=2)
    from gammacat.grcat import GrCategory

    for v in range(3):
        xi = _xi(2, p111=v)
        accepted = True
        try:
            build_gr_category(em, xi)
        except NotACocycle:
            accepted = False
        assert pentagon_report(GrCategory(em, xi)).ok == accepted


def test_identity_functor_passes():
    c = build_gr_category(make_module(2, 1, 2), _xi(2, p111=1))
    fd = GrFunctorData(np.arange(2), np.arange(2), np.zeros((2, 2), int), 0)
    assert check_gr_functor(c, c, fd).ok


def test_functor_between_cohomologous_constraints():
    em = make_module(3, 1, 3)
    src = build_gr_category(em, _xi(3))
    # any 2-cocycle g~ gives a functor from the strict category to itself
    g = np.zeros((3, 3), int)
    for x, y in itertools.product(range(1, 3), repeat=2):
        g[x, y] = ((x + y) % 3 - x - y) % 3 and 0  # zero table: d(0) = 0
    fd = GrFunctorData(np.arange(3), np.arange(3), g, 0)
    assert check_gr_functor(src, src, fd)["hexagon"].passed


def test_no_functor_kills_nontrivial_constraint():
    em = make_module(2, 1, 2)
    src = build_gr_category(em, _xi(2, p111=1))
    dst = build_gr_category(em, _xi(2))
    for v in range(2):
        g = np.zeros((2, 2), int)
        g[1, 1] = v
        rep = check_gr_functor(src, dst, GrFunctorData(np.arange(2), np.arange(2), g, 0))
        assert not rep["hexagon"].passed


def test_functor_unit_failures_reported():
    c = build_gr_category(make_module(2, 1, 2), _xi(2))
    fd = GrFunctorData(np.arange(2), np.arange(2), np.zeros((2, 2), int), 1)
    rep = check_gr_functor(c, c, fd)
    assert not rep["unit_left"].passed and not rep["unit_right"].passed


def test_functor_shape_failure_is_reported():
    c = build_gr_category(make_module(2, 1, 2), _xi(2))
    rep = check_gr_functor(c, c, GrFunctorData(np.arange(3), np.arange(2), np.zeros((2, 2), int)))
    assert not rep.ok and rep.checks[0].name == "shape"


def test_every_ordinary_cocycle_builds():
    em = make_module(3, 1, 3)
    ppp, _, _ = enumerate_cocycles(em)
    for xi in ppp:
        assert pentagon_report(build_gr_category(em, xi)).ok
