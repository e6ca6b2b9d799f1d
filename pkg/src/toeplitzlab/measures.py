"""Exact measures of cylinder sets under the level-m periodizations.

mu_m is normalized counting over D_m translates of the periodized array
eta_m.  Once the depth passes m every cell of D_m is decided, so all masses
are exact rationals with denominator |D_m|.
"""

import time
from fractions import Fraction

import numpy as np

from . import budgets
from .errors import DepthExceeded, InconclusiveTail, NotInDomain
from .density import regularity_verdict, VERDICT_INCONCLUSIVE
from .result import failed, passed
from .skeleton import j_size
from .tower import KIND_LATTICE, KIND_LINE
from .window import window_values


def a_counts(skeleton, n, cross_check=None, budget=None):
    """(a_{n,0}, a_{n,1}): decided cosets of each symbol inside D_n.

    Computed from the step log; when `cross_check` is true (default for small
    domains) an enumeration must reproduce the same pair.
    """
    T = skeleton.tower
    if n > skeleton.depth:
        raise DepthExceeded(f"a_counts needs n <= depth, got {n}")
    a0 = 0
    a1 = 0
    for t in range(1, n + 1):
        cosets = T.size(n) // T.size(t)
        cells = j_size(T, t - 1)
        if skeleton.steps[t - 1][0] == "plant":
            a1 += cosets
            a0 += (cells - 1) * cosets
        else:
            a0 += cells * cosets
    if cross_check is None:
        cross_check = T.size(n) <= 1 << 16
    if cross_check:
        from .window import window_levels
        lvls = window_levels(skeleton, n, budget)
        vals = window_values(skeleton, n, budget)
        decided = (lvls >= 0) & (lvls < n)
        e0 = int((decided & (vals == 0)).sum())
        e1 = int((decided & (vals == 1)).sum())
        if (e0, e1) != (a0, a1):
            raise ArithmeticError(
                f"a_counts mismatch at level {n}: log {(a0, a1)} vs count {(e0, e1)}")
    return a0, a1


class PeriodicMeasure:
    """mu_m: exact masses for eta_m-cylinders; needs depth > m."""

    def __init__(self, skeleton, m, budget=None):
        if m < 1:
            raise DepthExceeded("measure level must be >= 1")
        if skeleton.depth < m + 1:
            raise DepthExceeded(
                f"mu_{m} needs depth >= {m + 1} so every D_{m} cell is decided")
        self.skeleton = skeleton
        self.m = m
        self.tower = skeleton.tower
        self.size = self.tower.size(m)
        budgets.check_window(self.size, f"mu_{m}", budget)
        self._vals = window_values(skeleton, m, budget)
        if (self._vals == 255).any():
            raise DepthExceeded(f"mu_{m} found undecided cells")

    def values(self):
        return self._vals

    def eta(self, g):
        return int(self._vals[self.tower.index_of(self.tower.reduce(g, self.m),
                                                  self.m)])

    def mu_cylinder(self, pattern):
        """Mass of {d : eta_m(d + s) = v for every (s, v) in pattern}."""
        T = self.tower
        if not pattern:
            return Fraction(1)
        if T.kind == KIND_LINE:
            acc = np.ones(self.size, dtype=bool)
            for s, v in pattern:
                acc &= np.roll(self._vals, -int(s)) == v
            return Fraction(int(acc.sum()), self.size)
        if T.kind == KIND_LATTICE:
            shape = [ax.size(self.m) for ax in T.axes]
            grid = self._vals.reshape(shape)
            acc = np.ones(shape, dtype=bool)
            axes = tuple(range(T.dim))
            for s, v in pattern:
                acc &= np.roll(grid, tuple(-c for c in s), axis=axes) == v
            return Fraction(int(acc.sum()), self.size)
        count = 0
        for d in T.domain(self.m):
            if all(self.eta(T.add(d, s)) == v for s, v in pattern):
                count += 1
        return Fraction(count, self.size)

    def mu_symbol(self, symbol):
        return Fraction(int((self._vals == symbol).sum()), self.size)


def periodic_measure(skeleton, m, budget=None):
    return PeriodicMeasure(skeleton, m, budget)


def mu_cylinder(skeleton, m, pattern, budget=None):
    return periodic_measure(skeleton, m, budget).mu_cylinder(pattern)


def parse_pattern(tower, obj):
    """JSON form: {"support": [g, ...], "values": [0/1, ...]}."""
    support = obj.get("support", [])
    values = obj.get("values", [])
    if len(support) != len(values):
        raise NotInDomain("pattern support and values need equal lengths")
    out = []
    for g, v in zip(support, values):
        if isinstance(g, list):
            g = tuple(g)
        if v not in (0, 1):
            raise NotInDomain(f"pattern value must be 0/1, got {v!r}")
        out.append((g, v))
    return out


def limit_01(skeleton, level=None, budget=None):
    """Certified enclosures for the limiting masses of the symbol cylinders.

    The one-mass partials a_{m,1}/|D_m| are nondecreasing, and every later
    step adds at most one coset of its own level, so indices >= 2 bound the
    future contribution by 1/|D_m|.  The zero-mass enclosure is the exact
    complement; a second route through the density interval must intersect it.
    Raises InconclusiveTail when the tower declares no tail.
    """
    t0 = time.perf_counter()
    T = skeleton.tower
    m = level if level is not None else skeleton.depth - 1
    if m < 1 or m + 1 > skeleton.depth:
        raise DepthExceeded(f"limit_01 needs a level in 1..{skeleton.depth - 1}")
    report = regularity_verdict(T)
    if report.verdict == VERDICT_INCONCLUSIVE:
        raise InconclusiveTail(
            "limit_01 needs a certified density interval; declare a tail")
    a0, a1 = a_counts(skeleton, m, budget=budget)
    size = T.size(m)
    one_lo = Fraction(a1, size)
    one_hi = one_lo + Fraction(1, size)
    zero_lo, zero_hi = 1 - one_hi, 1 - one_lo

    d_lo, d_hi = report.d_interval
    d_m = Fraction(a0 + a1, size)
    # future zero mass: each step t > m contributes j_size(t-1)/|D_t| which is
    # (1 - d_{t-1})/q_t <= (1 - d_m)/2, summing to at most (1 - d_m)
    future_zero = 1 - d_m
    via_lo = Fraction(a0, size) + (1 - d_hi)
    via_hi = Fraction(a0, size) + future_zero + (1 - d_lo)
    if via_hi > 1:
        via_hi = Fraction(1)
    if max(zero_lo, via_lo) > min(zero_hi, via_hi):
        raise ArithmeticError("zero-mass enclosures fail to intersect")

    return {
        "level": m,
        "one": (one_lo, one_hi),
        "zero": (zero_lo, zero_hi),
        "zero_via_density": (via_lo, via_hi),
        "a_counts": (a0, a1),
        "verdict": report.verdict,
        "millis": (time.perf_counter() - t0) * 1e3,
    }


def an_det_check(skeleton, n, override_counts=None, budget=None):
    """det [[a0+j, a0+j-1], [a1, a1+1]] must equal |D_n| exactly."""
    t0 = time.perf_counter()
    name = "an-det"
    a0, a1 = override_counts if override_counts is not None \
        else a_counts(skeleton, n, budget=budget)
    j = j_size(skeleton.tower, n)
    size = skeleton.tower.size(n)
    mat = ((a0 + j, a0 + j - 1), (a1, a1 + 1))
    det = mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    if det != size:
        res = failed(name, f"level {n}",
                     {"level": n, "matrix": mat, "det": det, "expected": size})
    else:
        res = passed(name, f"level {n}: det {det} = |D_{n}|"
                           + (", injected counts" if override_counts else ""),
                     [{"a0": a0, "a1": a1, "j": j}])
    res.millis = (time.perf_counter() - t0) * 1e3
    return res
