"""Odometer coordinates, pushforward uniformity, and fiber multiplicity."""

import csv
import io
from fractions import Fraction

import pytest

from toeplitzlab import (
    NotInDomain,
    d_exact,
    fiber_profile,
    haar_cylinder,
    odometer_point,
    pi_of_orbit,
    pushforward_check,
    toeplitz_mass_estimate,
)


def test_pi_traces_reductions(threeadic):
    pt = pi_of_orbit(threeadic, 14, depth=4)
    assert pt.cosets == (2, 5, 14, 14)
    T = threeadic.tower
    full = pi_of_orbit(threeadic, 14)
    assert full.cosets == tuple(T.reduce(14, n) for n in range(1, 11))


def test_pi_is_equivariant(threeadic):
    T = threeadic.tower
    for v in (0, 7, 100):
        for g in (1, 9, 40):
            shifted = pi_of_orbit(threeadic, T.add(v, g))
            base = pi_of_orbit(threeadic, v)
            assert shifted.cosets == tuple(
                T.reduce(T.add(c, g), n)
                for n, c in enumerate(base.cosets, start=1))


def test_odometer_point_coherence(threeadic):
    T = threeadic.tower
    odometer_point(T, [2, 5, 14])
    with pytest.raises(NotInDomain):
        odometer_point(T, [2, 4, 14])  # 4 does not reduce to 2
    with pytest.raises(NotInDomain):
        odometer_point(T, [2, 5, 99])


def test_haar_cylinder_uniform(threeadic):
    T = threeadic.tower
    assert haar_cylinder(T, 5, 2) == Fraction(1, 9)
    with pytest.raises(NotInDomain):
        haar_cylinder(T, 9, 2)


def test_pushforward_uniform(threeadic, centered6):
    ok, info = pushforward_check(threeadic, 2, 5)
    assert ok and info["mass"] == Fraction(1, 9)
    ok2, _ = pushforward_check(centered6, 1, 4)
    assert ok2


def test_mass_estimate_equals_density(threeadic, irregular):
    assert toeplitz_mass_estimate(threeadic, 5) == d_exact(threeadic, 5)
    assert toeplitz_mass_estimate(irregular, 3) == Fraction(1, 9)


def test_fiber_profile_counts(threeadic):
    prof = fiber_profile(threeadic, 1)
    assert prof.level == 1
    assert dict(prof.items()) == {"0": 2, "1": 2, "2": 2}
    assert all(v == 0 for v in prof.partial.values())
    prof2 = fiber_profile(threeadic, 2)
    assert len(prof2) == 9
    assert all(c >= 1 for _, c in prof2.items())


def test_fiber_profile_csv(threeadic):
    prof = fiber_profile(threeadic, 1)
    rows = list(csv.reader(io.StringIO(prof.to_csv())))
    assert rows[0] == ["coset", "distinct_windows", "partial_lifts"]
    assert rows[1:] == [["0", "2", "0"], ["1", "2", "0"], ["2", "2", "0"]]
