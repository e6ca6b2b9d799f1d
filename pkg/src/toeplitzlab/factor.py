"""Finite-depth odometer coordinates, the coset map on orbit points, and
fiber diagnostics.

The inverse limit of the quotients G/Gamma_n is represented up to the
constructed depth as a coherent coset sequence.  Orbit points map to their
reduction sequence; cylinder masses under the limit measure are uniform.
"""

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from . import budgets
from .errors import DepthExceeded, NotInDomain
from .skeleton import Undefined


@dataclass(frozen=True)
class OdometerPoint:
    depth: int
    cosets: tuple

    def verify(self, tower):
        """Coherence: each coset reduces to the previous one."""
        if len(self.cosets) != self.depth:
            raise NotInDomain("coset count must equal depth")
        for n in range(1, self.depth + 1):
            c = self.cosets[n - 1]
            if not tower.in_domain(c, n):
                raise NotInDomain(f"coset {c} not in D_{n}")
            if n < self.depth and tower.reduce(self.cosets[n], n) != c:
                raise NotInDomain(f"incoherent cosets at level {n}")
        return self

    def to_json(self, tower=None):
        fmt = tower.format_element if tower is not None else str
        return {"depth": self.depth, "cosets": [fmt(c) for c in self.cosets]}


def odometer_point(tower, cosets):
    return OdometerPoint(len(cosets), tuple(cosets)).verify(tower)


def pi_of_orbit(skeleton, v, depth=None):
    """Coset coordinates of the orbit point indexed by v.

    The point sigma^{v^{-1}} eta lies in the v Gamma_n translate of C_n for
    every n, so the algebraic reduction sequence is the image.
    """
    T = skeleton.tower
    if depth is None:
        depth = skeleton.depth
    if depth < 1 or depth > skeleton.depth:
        raise DepthExceeded(f"depth {depth} outside 1..{skeleton.depth}")
    return OdometerPoint(depth,
                         tuple(T.reduce(v, n) for n in range(1, depth + 1))
                         ).verify(T)


def haar_cylinder(tower, c, n):
    """Mass of the level-n cylinder at coset c: uniform over D_n."""
    if not tower.in_domain(c, n):
        raise NotInDomain(f"{tower.format_element(c)} not in D_{n}")
    return Fraction(1, tower.size(n))


def toeplitz_mass_estimate(skeleton, depth=None, budget=None):
    """Fraction of depth-level cosets whose symbol is forced by periodicity.

    Computed from the step log and cross-checked against the density value,
    which is derived independently.
    """
    from .density import d_exact
    from .measures import a_counts
    if depth is None:
        depth = skeleton.depth
    a0, a1 = a_counts(skeleton, depth, budget=budget)
    est = Fraction(a0 + a1, skeleton.tower.size(depth))
    d = d_exact(skeleton, depth, budget)
    if est != d:
        raise ArithmeticError(
            f"mass estimate {est} disagrees with density {d} at level {depth}")
    return est


@dataclass
class FiberProfile:
    """Distinct fully defined windows seen over each level-n coset.

    counts[c] is a lower bound on the fiber cardinality over the cylinder at
    c.  Lifts whose window contains undecided positions are tallied in
    partial[c] instead of being fingerprinted.
    """

    level: int
    counts: dict
    partial: dict

    def __getitem__(self, c):
        return self.counts[c]

    def __len__(self):
        return len(self.counts)

    def items(self):
        return self.counts.items()

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["coset", "distinct_windows", "partial_lifts"])
        for c in sorted(self.counts):
            w.writerow([c, self.counts[c], self.partial.get(c, 0)])
        return buf.getvalue()


def fiber_profile(skeleton, n, budget=None):
    """Window multiplicity over each level-n coset, from level-(n+1) lifts.

    For every v in D_{n+1} the D_n-window of sigma^{v^{-1}} eta is read off;
    windows group by reduce(v, n).  Cosets whose whole neighborhood is
    periodically forced below level n always report exactly one window.
    """
    T = skeleton.tower
    if n + 1 > T.depth:
        raise DepthExceeded(f"fiber profile at {n} needs tower depth {n + 1}")
    dom_n = list(T.domain(n, budget=budget))
    budgets.check_enum(T.size(n + 1) * len(dom_n), f"fiber profile at {n}",
                       budget)
    seen = {c: set() for c in dom_n}
    partial = {c: 0 for c in dom_n}
    fmt = T.format_element
    for v in T.domain(n + 1, budget=budget):
        c = T.reduce(v, n)
        window = []
        for s in dom_n:
            val = skeleton.eval(T.add(v, s))
            if val is Undefined:
                window = None
                break
            window.append(val)
        if window is None:
            partial[c] += 1
        else:
            seen[c].add(tuple(window))
    counts = {fmt(c): len(seen[c]) for c in dom_n}
    return FiberProfile(n, counts, {fmt(c): partial[c] for c in dom_n})


def pushforward_check(skeleton, n, m, budget=None):
    """Every level-n cylinder pulls back to mu_m-mass 1/|D_n| exactly."""
    from .measures import periodic_measure
    T = skeleton.tower
    if m < n:
        raise DepthExceeded("pushforward needs m >= n")
    periodic_measure(skeleton, m, budget)  # existence: all cells decided
    want = Fraction(1, T.size(n))
    tallies = {}
    for d in T.domain(m, budget=budget):
        c = T.reduce(d, n)
        tallies[c] = tallies.get(c, 0) + 1
    size = T.size(m)
    for c, hit in tallies.items():
        if Fraction(hit, size) != want:
            return False, {"coset": T.format_element(c),
                           "mass": Fraction(hit, size), "want": want}
    if len(tallies) != T.size(n):
        return False, {"missing_cosets": T.size(n) - len(tallies)}
    return True, {"cosets": len(tallies), "mass": want}
