"""Density of the decided region and the regularity dichotomy.

d_n is the fraction of D_n whose Gamma_n-coset is already forced.  Three
routes must agree: counting cells, summing step contributions, and the
telescoping product.  The limit behavior is certified from the declared tail:
a divergent index-ratio sum pushes d_n to 1, a geometric one pins sup d_n
strictly below 1 with an exact rational interval.

All arithmetic is fractions.Fraction; the only transcendental, exp, is
enclosed by interval Taylor summation with argument halving.
"""

import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import budgets
from .errors import DepthExceeded
from .skeleton import j_size
from .tower import TAIL_DIVERGENT, TAIL_GEOMETRIC

VERDICT_REGULAR = "Regular"
VERDICT_IRREGULAR = "Irregular"
VERDICT_INCONCLUSIVE = "Inconclusive"


def ratio_term(tower, j):
    """t_j = |D_j| / |D_{j+1}|."""
    if j + 1 > tower.depth:
        raise DepthExceeded(f"t_{j} needs tower level {j + 1}")
    return Fraction(tower.size(j), tower.size(j + 1))


def d_product(tower, n):
    """Telescoping closed form: 1 - d_n = prod_{j<n} (1 - t_j)."""
    out = Fraction(1)
    for j in range(n):
        out *= 1 - ratio_term(tower, j)
    return 1 - out


def d_recursion(tower, n):
    """Sum of per-step contributions: step t decides j_size(t-1) cosets of
    Gamma_t inside every D_n."""
    total = 0
    for t in range(1, n + 1):
        total += j_size(tower, t - 1) * (tower.size(n) // tower.size(t))
    return Fraction(total, tower.size(n))


def d_enumeration(skeleton, n, budget=None):
    from .window import window_levels
    budgets.check_enum(skeleton.tower.size(n), f"density level {n}", budget)
    lvls = window_levels(skeleton, n, budget)
    decided = int(((lvls >= 0) & (lvls < n)).sum())
    return Fraction(decided, skeleton.tower.size(n))


def density_methods(skeleton, n, budget=None):
    """All computable routes to d_n; enumeration is skipped past the budget."""
    tower = skeleton.tower
    out = {"product": d_product(tower, n), "recursion": d_recursion(tower, n)}
    try:
        if skeleton.depth >= n:
            out["enumeration"] = d_enumeration(skeleton, n, budget)
    except budgets.BudgetExceeded:
        pass
    return out


def d_exact(skeleton, n, budget=None):
    vals = density_methods(skeleton, n, budget)
    distinct = set(vals.values())
    if len(distinct) != 1:
        raise ArithmeticError(f"density methods disagree at level {n}: {vals}")
    return distinct.pop()


@dataclass
class LSeries:
    terms: int
    partial: Fraction
    tail_bound: Fraction = None  # None renders as Unbounded
    declared: str = None


def L_series(tower, terms):
    """Partial sum of t_j for j < terms, plus a certified tail bound when the
    tower declares a geometric tail (the bound covers every j >= terms)."""
    if terms < 0 or terms > tower.depth - 1:
        raise DepthExceeded(f"terms must lie in 0..{tower.depth - 1}")
    partial = sum((ratio_term(tower, j) for j in range(terms)), Fraction(0))
    tail = tower.tail
    if tail is not None and tail.kind == TAIL_GEOMETRIC:
        bound = ratio_term(tower, terms) / (1 - tail.ratio)
        return LSeries(terms, partial, bound, TAIL_GEOMETRIC)
    declared = tail.kind if tail is not None else None
    return LSeries(terms, partial, None, declared)


def exp_enclosure(x, width=Fraction(1, 10**7)):
    """Certified rational interval around e^x, x <= 0, of at most `width`.

    Halve the argument until it is small, bracket by alternating Taylor
    partial sums, then square the interval back up.
    """
    if x > 0:
        raise ArithmeticError("exp_enclosure expects a nonpositive argument")
    if x == 0:
        return Fraction(1), Fraction(1)
    halvings = 0
    y = x
    while y < Fraction(-1, 2):
        y /= 2
        halvings += 1
    # squaring roughly doubles relative width each time; aim well inside
    inner = width / (4 ** halvings) / 4
    lo, hi = None, None
    term = Fraction(1)
    total = Fraction(1)
    i = 0
    while True:
        i += 1
        term *= Fraction(y, i)
        total += term
        # for y < 0 the partial sums alternate around the limit
        if term >= 0:
            hi = total
        else:
            lo = total
        if lo is not None and hi is not None and hi - lo < inner:
            break
        if i > 500:
            raise ArithmeticError("exp series failed to close")
    if lo < 0:
        lo = Fraction(0)
    for _ in range(halvings):
        lo, hi = lo * lo, hi * hi
    return lo, hi


@dataclass
class DensityReport:
    verdict: str
    depth: int
    d_seq: list
    d_interval: tuple
    L_partial: Fraction
    L_tail_bound: Fraction
    product_partial: Fraction
    exp_interval: tuple
    exp_width: Fraction
    notes: list = field(default_factory=list)
    millis: float = 0.0

    def to_json(self):
        def frac(f):
            if f is None:
                return None
            return {"num": str(f.numerator), "den": str(f.denominator),
                    "approx": float(f)}
        return {
            "verdict": self.verdict,
            "depth": self.depth,
            "d_seq": [{"n": n, "d": frac(d)} for n, d in self.d_seq],
            "d_interval": [frac(self.d_interval[0]), frac(self.d_interval[1])],
            "L_partial": frac(self.L_partial),
            "L_tail_bound": frac(self.L_tail_bound),
            "product_partial": frac(self.product_partial),
            "exp_interval": [frac(self.exp_interval[0]), frac(self.exp_interval[1])],
            "exp_width": frac(self.exp_width),
            "notes": self.notes,
            "millis": round(self.millis, 3),
        }

    def render(self):
        lines = [f"verdict: {self.verdict}"]
        for n, d in self.d_seq:
            lines.append(f"  d_{n} = {d} ~ {float(d):.9f}")
        lo, hi = self.d_interval
        lines.append(f"  sup d in [{lo} ~ {float(lo):.9f}, {hi} ~ {float(hi):.9f}]")
        lines.append(f"  L partial = {self.L_partial} ~ {float(self.L_partial):.9f}"
                     + (f", tail <= {self.L_tail_bound} ~ {float(self.L_tail_bound):.9f}"
                        if self.L_tail_bound is not None else ", tail Unbounded"))
        elo, ehi = self.exp_interval
        lines.append(f"  exp(-2L) in [{float(elo):.9f}, {float(ehi):.9f}] "
                     f"(width {float(self.exp_width):.3e})")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


def regularity_verdict(tower, levels=None, exp_width=Fraction(1, 10**7)):
    """Certified judgment of whether the decided density tends to 1."""
    t0 = time.perf_counter()
    depth = tower.depth
    top = min(depth, levels if levels is not None else 6)
    d_seq = [(n, d_product(tower, n)) for n in range(1, top + 1)]
    d_depth = d_product(tower, depth)
    product_partial = 1 - d_depth

    terms = depth - 1
    series = L_series(tower, terms)
    last = ratio_term(tower, depth - 1)
    L_lo = series.partial + last  # every computable term
    notes = []

    tail = tower.tail
    if tail is None:
        report = DensityReport(
            VERDICT_INCONCLUSIVE, depth, d_seq, (d_depth, Fraction(1)),
            L_lo, None, product_partial, (Fraction(0), Fraction(1)), Fraction(1),
            ["no tail declaration: the limit of d_n cannot be certified"])
    elif tail.kind == TAIL_DIVERGENT:
        lo, hi = exp_enclosure(-2 * L_lo, exp_width)
        report = DensityReport(
            VERDICT_REGULAR, depth, d_seq, (d_depth, Fraction(1)),
            L_lo, None, product_partial, (lo, hi), hi - lo,
            ["declared divergent ratio sum: the telescoping product tends to 0, "
             "so d_n tends to 1"])
    else:
        future = last * tail.ratio / (1 - tail.ratio)
        d_hi = d_depth + (1 - d_depth) * future
        if d_hi > 1:
            d_hi = Fraction(1)
        L_hi = L_lo + future
        lo_hi, hi_hi = exp_enclosure(-2 * L_lo, exp_width)   # largest exp(-2L)
        lo_lo, hi_lo = exp_enclosure(-2 * L_hi, exp_width)   # smallest exp(-2L)
        exp_iv = (lo_lo, hi_hi)
        notes.append(f"remark bound: sup d_n <= 1 - exp(-2L) <= {float(1 - lo_lo):.9f}")
        verdict = VERDICT_IRREGULAR if d_hi < 1 else VERDICT_INCONCLUSIVE
        if verdict == VERDICT_IRREGULAR:
            notes.append("declared geometric tail keeps the telescoping product "
                         "positive, so sup d_n < 1")
        report = DensityReport(
            verdict, depth, d_seq, (d_depth, d_hi),
            L_lo, future, product_partial, exp_iv, hi_hi - lo_hi, notes)
    report.millis = (time.perf_counter() - t0) * 1e3
    return report
