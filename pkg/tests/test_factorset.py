import numpy as np
import pytest

import oracles
from conftest import make_module
from gammacat.algebra import cyclic_group
from gammacat.cochain import Cochain2, Cochain3, combine, d2, free_slots
from gammacat.errors import ModuleMismatch, NotACocycle, NotEnoughStrict, XiMismatch
from gammacat.factorset import (
    FactorSet,
    are_cohomologous_factor_sets,
    check_witness,
    derive_equivariant_structure,
    factor_set_from_cocycle,
    induce_cocycle,
    strictify,
    transport,
    trivial_factor_set,
    validate_factor_set,
)
from gammacat.grcat import build_gr_category
from gammacat.homology import enumerate_cocycles, solve_coboundary


def _cocycles(em):
    ppp, ppg, pgg = enumerate_cocycles(em)
    return [Cochain3(em, h_ppp=a, h_ppg=b, h_pgg=c) for a, b, c in zip(ppp, ppg, pgg)]


def _z2_trivial():
    em = make_module(2, 2, 2)
    base = build_gr_category(em, np.zeros((2, 2, 2, 1), int))
    return em, base


def _with_tss(fs, v=1):
    t = fs.t.copy()
    t[1, 1, 1] = v
    return fs.replace(t=t)


FS_MODULES = [
    make_module(2, 2, 2),
    make_module(3, 2, 3, 1, 2, 2),
    make_module(2, 2, 3, 2, 1, 2),
    make_module(3, 3, 3),
]


def test_trivial_factor_set_is_valid():
    em, base = _z2_trivial()
    fs = trivial_factor_set(base, em.gamma)
    assert validate_factor_set(fs).ok
    assert validate_factor_set(fs, assume_condition_i=False).ok
    assert fs.enough_strict


def test_report_lists_every_law():
    em, base = _z2_trivial()
    names = [c.name for c in validate_factor_set(trivial_factor_set(base, em.gamma)).checks]
    for law in ("hexagon", "unit_right", "unit_left", "composition", "theta_monoidal", "theta_unit", "theta_cocycle", "condition_i", "condition_ii"):
        assert law in names
    names = [c.name for c in validate_factor_set(trivial_factor_set(base, em.gamma), False).checks]
    assert "condition_i" not in names and "derived:ftilde1_zero" in names


def test_perturbed_t_is_valid_in_z2():
    # 2 t(p) = 0 in Z/2, so the perturbation satisfies both the naturality law and the t-cocycle law
    em, base = _z2_trivial()
    fs = _with_tss(trivial_factor_set(base, em.gamma))
    rep = validate_factor_set(fs)
    lhs = (fs.t[1, 1, 1, 0] + fs.t[1, 1, 1, 0] - fs.t[1, 1, 0, 0]) % 2
    assert rep["theta_monoidal"].passed == (lhs == 0)
    assert rep.ok


def test_perturbed_t_is_invalid_in_z3():
    em = make_module(2, 2, 3)
    base = build_gr_category(em, np.zeros((2, 2, 2, 1), int))
    rep = validate_factor_set(_with_tss(trivial_factor_set(base, em.gamma)))
    assert not rep["theta_monoidal"].passed
    assert rep["theta_monoidal"].witness[:2] == (1, 1)


def test_condition_ii_violation():
    em, base = _z2_trivial()
    fs = trivial_factor_set(base, em.gamma)
    t = fs.t.copy()
    t[0, 1, 1] = 1
    rep = validate_factor_set(fs.replace(t=t))
    assert not rep["condition_ii"].passed


def test_condition_i_redundancy_detects_bad_identity_component():
    em, base = _z2_trivial()
    fs = trivial_factor_set(base, em.gamma)
    c = fs.c.copy()
    c[0] = 1
    rep = validate_factor_set(fs.replace(c=c), assume_condition_i=False)
    assert not rep.ok


def test_derive_equivariant_structure():
    em = make_module(3, 2, 3, 1, 2, 2)
    base = build_gr_category(em, np.zeros((3, 3, 3, 1), int))
    fs = trivial_factor_set(base, em.gamma, em.gamma_on_pi, em.gamma_on_a)
    assert validate_factor_set(fs).ok
    d = derive_equivariant_structure(fs)
    assert d == em
    assert d.gamma_on_pi.maps[1].tolist() == [0, 2, 1]
    assert d.gamma_on_a.maps[1].tolist() == [0, 2, 1]


def test_derive_trivial():
    em, base = _z2_trivial()
    d = derive_equivariant_structure(trivial_factor_set(base, em.gamma))
    assert d.gamma_on_pi.is_trivial() and d.gamma_on_a.is_trivial()


@pytest.mark.parametrize("em", FS_MODULES, ids=str)
def test_round_trip_is_exhaustive(em):
    for h in _cocycles(em):
        base = build_gr_category(em, h.h_ppp)
        fs = factor_set_from_cocycle(base, em, h)
        assert validate_factor_set(fs).ok
        assert validate_factor_set(fs, assume_condition_i=False).ok
        assert fs.enough_strict
        back = induce_cocycle(fs)
        assert back == h
        assert not back.h_pgg[0].any()


def test_from_cocycle_with_only_tss():
    em, base = _z2_trivial()
    h = np.zeros((2, 2, 2, 1), int)
    h[1, 1, 1] = 1
    z = np.zeros((2, 2, 2, 1), int)
    hc = Cochain3(em, h_ppp=z, h_ppg=z, h_pgg=h)
    fs = factor_set_from_cocycle(base, em, hc)
    assert fs.t[1, 1, 1].tolist() == [1] and fs.t.sum() == 1
    assert validate_factor_set(fs).ok


def test_from_cocycle_errors():
    em = make_module(2, 2, 2)
    base = build_gr_category(em, np.zeros((2, 2, 2, 1), int))
    xi = np.zeros((2, 2, 2, 1), int)
    xi[1, 1, 1] = 1
    z = np.zeros((2, 2, 2, 1), int)
    with pytest.raises(XiMismatch):
        factor_set_from_cocycle(base, em, Cochain3(em, h_ppp=xi, h_ppg=z, h_pgg=z))
    em3 = make_module(2, 2, 3)
    bad = Cochain3(em3, h_ppp=xi, h_ppg=z, h_pgg=z)
    base3 = build_gr_category(em3, np.zeros((2, 2, 2, 1), int))
    with pytest.raises(NotACocycle):
        factor_set_from_cocycle(base3, em3, bad)
    with pytest.raises(ModuleMismatch):
        factor_set_from_cocycle(base3, em, Cochain3.zeros(em))


def test_induce_requires_enough_strict():
    em, base = _z2_trivial()
    fs = trivial_factor_set(base, em.gamma)
    c = fs.c.copy()
    c[1] = 1
    with pytest.raises(NotEnoughStrict):
        induce_cocycle(fs.replace(c=c))


def _nonstrict_z2():
    """c[s] = 1 with ftilde fixed by the unit laws: f~(p, 1) = f~(1, x) = 1."""
    em, base = _z2_trivial()
    fs = trivial_factor_set(base, em.gamma)
    c, ft = fs.c.copy(), fs.ftilde.copy()
    c[1] = 1
    ft[1, 1, 0] = 1
    ft[1, 0, :] = 1
    return fs.replace(c=c, ftilde=ft)


def test_strictify_nonstrict_example():
    fs = _nonstrict_z2()
    assert validate_factor_set(fs).ok
    s, w = strictify(fs)
    assert s.enough_strict and validate_factor_set(s).ok
    assert check_witness(fs, s, w).ok


def test_strictify_of_strict_is_identity():
    em, base = _z2_trivial()
    fs = _with_tss(trivial_factor_set(base, em.gamma))
    s, w = strictify(fs)
    assert s == fs and not w.u.any()


def test_strictify_is_idempotent():
    fs = _nonstrict_z2()
    once = strictify(fs)[0]
    assert strictify(once)[0] == once


@pytest.mark.parametrize("em", FS_MODULES, ids=str)
def test_transport_and_cohomologous(em):
    rng = np.random.default_rng(11)
    for h in _cocycles(em)[:12]:
        base = build_gr_category(em, h.h_ppp)
        fs = factor_set_from_cocycle(base, em, h)
        w = rng.integers(0, em.a.exponent, (em.n, em.m, em.k))
        w[:, 0] = 0
        fs2 = transport(fs, w)
        assert validate_factor_set(fs2).ok
        assert check_witness(fs, fs2, w).ok
        s, u = strictify(fs2)
        assert validate_factor_set(s).ok and check_witness(fs2, s, u).ok
        for a, b in ((fs, fs2), (fs2, fs)):
            got = are_cohomologous_factor_sets(a, b)
            assert got is not None and check_witness(a, b, got).ok
        # cohomologous => same class of induced cocycles
        diff = combine(induce_cocycle(strictify(fs)[0]), -1, induce_cocycle(s))
        assert solve_coboundary(em, diff) is not None


def test_cohomologous_with_itself_gives_zero_witness():
    em, base = _z2_trivial()
    fs = _with_tss(trivial_factor_set(base, em.gamma))
    assert not are_cohomologous_factor_sets(fs, fs).u.any()


def test_coboundary_perturbation_is_cohomologous():
    em = make_module(3, 2, 3, 1, 2, 2)
    base = build_gr_category(em, np.zeros((3, 3, 3, 1), int))
    fs1 = factor_set_from_cocycle(base, em, Cochain3.zeros(em))
    rng = np.random.default_rng(2)
    for _ in range(5):
        g = Cochain2.from_coordinates(em, rng.integers(0, 3, len(free_slots(em, 2))))
        g = Cochain2(em, g_pp=np.zeros_like(g.g_pp), g_pg=g.g_pg)
        fs2 = factor_set_from_cocycle(base, em, d2(g))
        assert are_cohomologous_factor_sets(fs1, fs2) is not None


def test_not_cohomologous_example():
    em, base = _z2_trivial()
    fs1 = trivial_factor_set(base, em.gamma)
    assert are_cohomologous_factor_sets(fs1, _with_tss(fs1)) is None


def test_different_functors_are_not_cohomologous():
    em = make_module(3, 2, 3, 1, 2, 2)
    base = build_gr_category(em, np.zeros((3, 3, 3, 1), int))
    a = trivial_factor_set(base, em.gamma)
    b = trivial_factor_set(base, em.gamma, em.gamma_on_pi, em.gamma_on_a)
    assert are_cohomologous_factor_sets(a, b) is None


def test_cohomologous_requires_same_base():
    em, base = _z2_trivial()
    xi = np.zeros((2, 2, 2, 1), int)
    xi[1, 1, 1] = 1
    other = build_gr_category(em, xi)
    with pytest.raises(ModuleMismatch):
        are_cohomologous_factor_sets(trivial_factor_set(base, em.gamma), trivial_factor_set(other, em.gamma))


def test_enough_strict_counts_match_cocycle_counts():
    """Valid enough-strict factor sets over xi = 0 are exactly the cocycles with zero Pi^3 part."""
    em, base = _z2_trivial()
    import itertools

    valid = 0
    fs0 = trivial_factor_set(base, em.gamma)
    # free entries: ftilde[s](p, p) and t[s][s](p); everything else is forced by normalization
    for a, b in itertools.product(range(2), repeat=2):
        ft, t = fs0.ftilde.copy(), fs0.t.copy()
        ft[1, 1, 1] = a
        t[1, 1, 1] = b
        valid += validate_factor_set(fs0.replace(ftilde=ft, t=t)).ok
    z = len(oracles.cocycles(oracles.CyclicModule(2, 2, 2), xi_zero=True))
    assert valid == z == 4


def test_factor_sets_are_immutable_and_hashable():
    em, base = _z2_trivial()
    fs = trivial_factor_set(base, em.gamma)
    with pytest.raises(ValueError):
        fs.t[1, 1, 1, 0] = 1
    assert len({fs, trivial_factor_set(base, em.gamma), _with_tss(fs)}) == 2
    assert isinstance(fs, FactorSet) and fs.gamma == cyclic_group(2)
