import numpy as np
import pytest
from hypothesis import given, strategies as st

from gammacat.algebra import (
    FiniteAbelianGroup,
    cyclic_group,
    make_action,
    trivial_action,
    validate_action,
    validate_equivariant_module,
    validate_group,
)
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


def test_cyclic_group_table():
    g = cyclic_group(3)
    assert g.order == 3
    assert g.table.tolist() == [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
    assert g.inv(1) == 2 and g.is_abelian()


def test_klein_four():
    t = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    g = validate_group(t)
    assert all(g.inv(i) == i for i in range(4))


def test_symmetric_group_is_nonabelian():
    import itertools

    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]
    g = validate_group(table)
    assert g.order == 6 and not g.is_abelian()


def test_identity_is_relabelled_to_zero():
    # identity sits at label 1
    t = [[1, 0], [0, 1]]
    g = validate_group(t)
    assert g.identity == 0
    assert g.table[0].tolist() == [0, 1]


@pytest.mark.parametrize(
    "table, exc",
    [
        ([[0, 1], [1, 2]], NotClosed),
        ([[0, 1, 2]], ShapeError),
        ([[1, 1], [1, 1]], NoIdentity),
        ([[0, 1, 2], [1, 2, 2], [2, 2, 2]], NoInverse),
        ([[0.5, 1], [1, 0]], ShapeError),
        ("abc", ShapeError),
    ],
)
def test_group_validation_errors(table, exc):
    with pytest.raises(exc):
        validate_group(table)


def test_non_associative_latin_square():
    # a loop with identity 0 and inverses but not associative
    t = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NotAssociative) as ei:
        validate_group(t)
    assert len(ei.value.witness) == 3


def test_abelian_group_elements_and_ops():
    a = FiniteAbelianGroup([2, 4])
    assert a.order == 8 and a.exponent == 4 and a.rank == 2
    assert a.element(a.index_of([1, 3])) == (1, 3)
    assert a.element(a.add(a.index_of([1, 3]), a.index_of([1, 2]))) == (0, 1)
    assert a.element(a.neg(a.index_of([1, 1]))) == (1, 3)


@pytest.mark.parametrize("factors", [[1], [2, 3], [0]])
def test_abelian_group_rejects_bad_factors(factors):
    with pytest.raises(ShapeError):
        FiniteAbelianGroup(factors)


@given(st.lists(st.sampled_from([2, 4]), min_size=0, max_size=3).map(sorted))
def test_abelian_op_table_is_a_group(factors):
    if any(b % a for a, b in zip(factors, factors[1:])):
        return
    a = FiniteAbelianGroup(factors)
    g = validate_group(a.op_table)
    assert g.is_abelian() and g.order == a.order


def test_negation_action():
    P, A = cyclic_group(2), FiniteAbelianGroup([3])
    act = make_action(P, A, lambda x, a: (-a) % 3 if x else a)
    assert act(1, 1) == 2 and not act.is_trivial()
    assert act.matrices[1].tolist() == [[2]]


def test_action_errors():
    P, A = cyclic_group(2), FiniteAbelianGroup([3])
    with pytest.raises(NotBijective):
        validate_action(P, A, [[0, 1, 2], [0, 0, 0]])
    with pytest.raises(IdentityActsNontrivially):
        validate_action(P, A, [[0, 2, 1], [0, 1, 2]])
    with pytest.raises(ShapeError):
        validate_action(P, A, [[0, 1, 2]])
    with pytest.raises(NotClosed):
        validate_action(P, A, [[0, 1, 2], [0, 1, 3]])
    A4 = FiniteAbelianGroup([4])
    with pytest.raises(NotHomomorphic):
        validate_action(P, A4, [[0, 1, 2, 3], [0, 2, 1, 3]])
    P3 = cyclic_group(3)
    # negation from a group of order 3 is not an action
    with pytest.raises(NotAnAction):
        validate_action(P3, A, [[0, 1, 2], [0, 2, 1], [0, 2, 1]])


def test_action_accepts_string_keys():
    P, A = cyclic_group(2), FiniteAbelianGroup([2])
    act = validate_action(P, A, {"0": [0, 1], "1": [0, 1]})
    assert act.is_trivial()


def test_equivariance_check():
    P, G, A = cyclic_group(3), cyclic_group(2), FiniteAbelianGroup([3])
    inv = validate_action(G, P, [[0, 1, 2], [0, 2, 1]])
    neg = validate_action(G, A, [[0, 1, 2], [0, 2, 1]])
    em = validate_equivariant_module(P, G, A, trivial_action(P, A), inv, neg)
    assert em.n == 3 and em.m == 2 and em.k == 1


def test_equivariance_failure_witness():
    P, G, A = cyclic_group(2), cyclic_group(2), FiniteAbelianGroup([2, 2])
    swap = [[0, 1, 2, 3], [0, 2, 1, 3]]  # swaps the two basis vectors
    pa = validate_action(P, A, swap)
    # Gamma fixing Pi but acting by the "shear" (a, b) -> (a, a + b)
    shear = [[0, 1, 2, 3], [0, 1, 3, 2]]
    ga = validate_action(G, A, shear)
    with pytest.raises(NotEquivariant) as ei:
        validate_equivariant_module(P, G, A, pa, trivial_action(G, P), ga)
    s, x, a = ei.value.witness
    assert (s, x) == (1, 1)


def test_module_mismatch():
    P, G, A = cyclic_group(2), cyclic_group(2), FiniteAbelianGroup([2])
    with pytest.raises(ModuleMismatch):
        validate_equivariant_module(
            P, G, A, trivial_action(P, FiniteAbelianGroup([3])), trivial_action(G, P), trivial_action(G, A)
        )
