"""Shared groups, subgroups and weights used across the suite."""

from fractions import Fraction

import pytest

from lumpwalk import AlgebraElement, FiniteGroup, LumpingProblem, parse_cycles
from lumpwalk.shuffles import symmetric_group, top_stabilizer


@pytest.fixture(scope="session")
def sym4():
    return symmetric_group(4)


@pytest.fixture(scope="session")
def top_prob(sym4):
    """Sym_4 lumped to the stabilizer of the top position."""
    return LumpingProblem(sym4, top_stabilizer(sym4))


@pytest.fixture(scope="session")
def mid_swap_T(sym4):
    """The order-2 subgroup swapping the middle positions."""
    return sym4.subgroup([parse_cycles(4, "(2,3)")])


def lazy_frustrator(G, lam):
    """Lazy shuffle that lumps weakly (compatible with averaging over the
    middle swap) but not strongly or exactly for 0 < lam <= 1."""
    lam = Fraction(lam)
    return AlgebraElement.from_cycle_pairs(G, [
        ("id", 1 - lam),
        ("(1,4)(2,3)", lam / 3),
        ("(1,4,3)", lam / 3),
        ("(1,4,2,3)", lam / 3),
    ])


@pytest.fixture(scope="session")
def frustrator(sym4):
    return lazy_frustrator(sym4, Fraction(3, 4))


@pytest.fixture(scope="session")
def die_prob(sym4):
    """Sym_4 acting as die rotations, lumped to the top-face stabilizer C_4."""
    return LumpingProblem(sym4, sym4.subgroup([parse_cycles(4, "(1,2,3,4)")]))


@pytest.fixture(scope="session")
def die_weight(sym4):
    return AlgebraElement.from_cycle_pairs(sym4, [
        ("(1,2)", Fraction(2, 12)),
        ("(1,4,2,3)", Fraction(1, 12)),
        ("(1,3,4)", Fraction(1, 12)),
        ("(2,4,3)", Fraction(2, 12)),
        ("(3,4)", Fraction(3, 12)),
        ("(1,4,2)", Fraction(3, 12)),
    ])


@pytest.fixture(scope="session")
def dihedral10():
    G = FiniteGroup.generate(
        5, [parse_cycles(5, "(1,2,3,4,5)"), parse_cycles(5, "(2,5)(3,4)")]
    )
    sigma = G.element_of("(1,2,3,4,5)")
    tau = G.element_of("(2,5)(3,4)")
    return G, sigma, tau


@pytest.fixture(scope="session")
def dihedral_prob(dihedral10):
    G, sigma, tau = dihedral10
    return LumpingProblem(G, G.subgroup([G.elements[tau]]))


def uniform_on(G, ids):
    ids = list(ids)
    return AlgebraElement.from_pairs(G, [(i, Fraction(1, len(ids))) for i in ids])
