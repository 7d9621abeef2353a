import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gammacat.algebra import (  # noqa: E402
    FiniteAbelianGroup,
    cyclic_group,
    validate_action,
    validate_equivariant_module,
)
from gammacat.errors import ValidationError  # noqa: E402

import oracles  # noqa: E402


def cyclic_actions(actor_order, carrier_order):
    """Multipliers u (unit mod carrier) with u**actor_order == 1: generator acts by u."""
    if carrier_order == 1:
        return [1]
    return [
        u for u in range(1, carrier_order)
        if np.gcd(u, carrier_order) == 1 and pow(u, actor_order, carrier_order) == 1
    ]


def make_module(n, m, d, pi_on_a=1, gamma_on_pi=1, gamma_on_a=1):
    """Cyclic Pi = Z/n, Gamma = Z/m, A = Z/d with multiplier actions, validated."""
    P, G, A = cyclic_group(n), cyclic_group(m), FiniteAbelianGroup([d])
    pa = validate_action(P, A, [[(pow(pi_on_a, x, d) * a) % d for a in range(d)] for x in range(n)])
    gp = validate_action(G, P, [[(pow(gamma_on_pi, s, n) * x) % n if n > 1 else 0 for x in range(n)] for s in range(m)])
    ga = validate_action(G, A, [[(pow(gamma_on_a, s, d) * a) % d for a in range(d)] for s in range(m)])
    return validate_equivariant_module(P, G, A, pa, gp, ga)


def all_desk_modules():
    """Every valid module with |Pi|, |Gamma| in {1, 2, 3} and |A| in {2, 3}.

    Groups of these orders are cyclic, so every action is a multiplier
    action; the combinations failing equivariance are dropped.
    Yields (label, module, oracle-module).
    """
    out = []
    for n, m, d in itertools.product((1, 2, 3), (1, 2, 3), (2, 3)):
        for pa, gp, ga in itertools.product(cyclic_actions(n, d), cyclic_actions(m, n), cyclic_actions(m, d)):
            try:
                em = make_module(n, m, d, pa, gp, ga)
            except ValidationError:
                continue
            label = f"pi{n}-gamma{m}-a{d}-act{pa}{gp}{ga}"
            out.append((label, em, oracles.CyclicModule(n, m, d, pa, gp, ga)))
    return out


DESK_MODULES = all_desk_modules()


@pytest.fixture(scope="session")
def desk_modules():
    return DESK_MODULES


@pytest.fixture
def trivial_222():
    return make_module(2, 2, 2)


@pytest.fixture
def z3_negation():
    """Pi = Z/2 acting on A = Z/3 by negation, Gamma = Z/2 trivial on Pi, negation on A."""
    return make_module(2, 2, 3, pi_on_a=2, gamma_on_pi=1, gamma_on_a=2)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.summary_lines():
            terminalreporter.write_line(line)
