"""Shared fixtures: the two preset instances plus small cross-check builds.

Heavy skeletons are session scoped; the naive reference models from
bruteforce.py are kept at depths where their pure-python loops stay cheap.
"""

import pytest

import bruteforce as bf
from toeplitzlab import (
    GenericTower,
    IntegerLatticeTower,
    IntegerLineTower,
    STYLE_CENTERED,
    STYLE_NONNEG,
    build_skeleton,
    build_tower,
    preset_config,
)

IRREGULAR_INDICES = [15, 31, 63, 127, 255]


def cyclic_generic(moduli, domains=None, style=STYLE_NONNEG):
    """Explicit-table model of the nonneg integer line on the given moduli.

    Lets tests exercise the generic code paths against line answers, and
    lets them pick nonstandard coset representatives.
    """
    sizes = [1]
    for q in moduli:
        sizes.append(sizes[-1] * q)
    levels = []
    for n, size in enumerate(sizes[1:], start=1):
        lvl = {"size": size,
               "op": [[(a + b) % size for b in range(size)] for a in range(size)]}
        if n > 1:
            lvl["proj"] = [g % sizes[n - 1] for g in range(size)]
        levels.append(lvl)
    if domains is None:
        domains = [list(range(s)) for s in sizes]
    return GenericTower(levels, domains, style=style)


@pytest.fixture(scope="session")
def threeadic():
    return build_skeleton(build_tower(preset_config("threeadic")), 10)


@pytest.fixture(scope="session")
def threeadic5():
    return build_skeleton(build_tower(preset_config("threeadic")), 5)


@pytest.fixture(scope="session")
def centered6():
    return build_skeleton(IntegerLineTower([3] * 6, style=STYLE_CENTERED), 6)


@pytest.fixture(scope="session")
def irregular():
    return build_skeleton(build_tower(preset_config("irregular-demo")), 5)


@pytest.fixture(scope="session")
def lattice():
    return build_skeleton(IntegerLatticeTower([[3, 3, 3], [3, 3, 3]]), 3)


@pytest.fixture(scope="session")
def oracle3():
    return bf.NaiveBuild(bf.NaiveLine([3] * 10, "nonneg"), 10)


@pytest.fixture(scope="session")
def oracle3c():
    return bf.NaiveBuild(bf.NaiveLine([3] * 6, "centered"), 6)


@pytest.fixture(scope="session")
def oracle_irr():
    # depth 4 keeps the naive window/level loops under a second
    return bf.NaiveBuild(bf.NaiveLine(IRREGULAR_INDICES, "centered"), 4)


@pytest.fixture(scope="session")
def oracle_lat():
    return bf.NaiveBuild(bf.NaiveLattice([[3, 3, 3], [3, 3, 3]], "nonneg"), 3)
