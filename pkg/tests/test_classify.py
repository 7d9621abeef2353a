import numpy as np
import pytest

import oracles
from conftest import make_module
from gammacat.classify import enumerate_z3, fingerprint, partition_classes, verify_omega
from gammacat.cochain import Cochain2, combine, d2, free_slots
from gammacat.errors import CapExceeded, ModuleMismatch
from gammacat.factorset import are_cohomologous_factor_sets, factor_set_from_cocycle, induce_cocycle, strictify
from gammacat.grcat import build_gr_category
from gammacat.homology import solve_coboundary


def _zero_base(em):
    return build_gr_category(em, np.zeros((em.n,) * 3 + (em.k,), int))


def test_enumerate_ordinary_z2():
    assert len(enumerate_z3(make_module(2, 1, 2))) == 2


def test_enumerate_all_trivial_222():
    z = enumerate_z3(make_module(2, 2, 2))
    assert len(z) == 8
    keys = [tuple(h.coordinates()) for h in z]
    assert keys == sorted(keys)


def test_enumeration_closed_under_coboundaries():
    em = make_module(3, 2, 3, 1, 2, 2)
    z = enumerate_z3(em)
    keys = {tuple(h.coordinates()) for h in z}
    rng = np.random.default_rng(0)
    for h in z[:10]:
        g = Cochain2.from_coordinates(em, rng.integers(0, 3, len(free_slots(em, 2))))
        assert tuple(combine(h, 1, d2(g)).coordinates()) in keys


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_z3(make_module(3, 3, 3), cap=10)


def test_partition_singleton_and_pair():
    em = make_module(3, 2, 3, 1, 2, 2)
    h = enumerate_z3(em)[5]
    assert len(partition_classes(em, [h])) == 1
    g = Cochain2.from_coordinates(em, np.arange(len(free_slots(em, 2))) % 3)
    classes = partition_classes(em, [h, combine(h, 1, d2(g))])
    assert len(classes) == 1 or d2(g).is_zero()


def test_partition_222_has_trivial_coboundaries():
    em = make_module(2, 2, 2)
    classes = partition_classes(em, enumerate_z3(em))
    assert len(classes) == 8
    assert all(len(c) == 1 for c in classes)


def test_partition_representatives_are_lex_minimal():
    em = make_module(3, 2, 3, 1, 2, 2)
    for cls in partition_classes(em, enumerate_z3(em)):
        keys = [tuple(h.coordinates()) for h in cls]
        assert keys[0] == min(keys)


def test_omega_all_trivial_222():
    em = make_module(2, 2, 2)
    rep = verify_omega(em, _zero_base(em))
    assert rep.cohomology_class_count == rep.factor_set_class_count == 4
    assert rep.cocycle_count == 4
    assert rep.bijection_verified
    assert oracles.class_count_with_zero_xi(oracles.CyclicModule(2, 2, 2)) == 4


def test_omega_gamma_trivial():
    em = make_module(2, 1, 2)
    rep = verify_omega(em, _zero_base(em))
    assert rep.cohomology_class_count == rep.factor_set_class_count == 1
    assert rep.bijection_verified


def test_omega_negation_module(z3_negation):
    rep = verify_omega(z3_negation, _zero_base(z3_negation))
    assert rep.bijection_verified
    assert rep.cohomology_class_count == oracles.class_count_with_zero_xi(
        oracles.CyclicModule(2, 2, 3, 2, 1, 2)
    )


def test_omega_inversion_module():
    em = make_module(3, 2, 3, 1, 2, 2)
    rep = verify_omega(em, _zero_base(em))
    assert rep.cocycle_count == 9 and rep.cohomology_class_count == 1
    assert rep.bijection_verified


def test_omega_nonzero_base():
    em = make_module(2, 2, 2)
    xi = np.zeros((2, 2, 2, 1), int)
    xi[1, 1, 1] = 1
    rep = verify_omega(em, build_gr_category(em, xi))
    assert rep.bijection_verified and rep.cohomology_class_count == 4


def test_omega_report_dict():
    em = make_module(2, 2, 2)
    doc = verify_omega(em, _zero_base(em)).to_dict()
    assert doc["bijection_verified"] is True
    assert len(doc["pairing"]) == 4
    assert len({p["fingerprint"] for p in doc["pairing"]}) == 4
    assert sorted(p["cohomology_class"] for p in doc["pairing"]) == [0, 1, 2, 3]


def test_omega_cap_and_mismatch():
    em = make_module(3, 3, 3)
    with pytest.raises(CapExceeded):
        verify_omega(em, _zero_base(em), cap=10)
    with pytest.raises(ModuleMismatch):
        verify_omega(make_module(2, 2, 2), _zero_base(make_module(2, 2, 3)))


def test_well_defined_and_injective_pairwise_222():
    """fs1 ~ fs2 exactly when their induced cocycles are cohomologous."""
    em = make_module(2, 2, 2)
    base = _zero_base(em)
    fss = [factor_set_from_cocycle(base, em, h) for h in enumerate_z3(em, fixed_xi=base.xi)]
    for a in fss:
        for b in fss:
            ha, hb = induce_cocycle(strictify(a)[0]), induce_cocycle(strictify(b)[0])
            same_h = solve_coboundary(em, combine(ha, -1, hb)) is not None
            assert (are_cohomologous_factor_sets(a, b) is not None) == same_h


def test_fingerprint_is_stable_and_discriminating():
    em = make_module(2, 2, 2)
    base = _zero_base(em)
    fss = [factor_set_from_cocycle(base, em, h) for h in enumerate_z3(em, fixed_xi=base.xi)]
    prints = [fingerprint(fs) for fs in fss]
    assert prints == [fingerprint(fs) for fs in fss]
    assert len(set(prints)) == len(prints)
    assert all(len(p) == 16 for p in prints)
