"""Residually finite quotient towers and their nested fundamental domains.

A tower fixes a group G together with finite-index subgroups
G = Gamma_0 > Gamma_1 > Gamma_2 > ... and a fundamental domain D_n for each
quotient, nested D_0 = {0} <= D_1 <= D_2 <= ...  Three kinds are supported:

  IntegerLine     G = Z, Gamma_n = N_n Z with N_n a product of indices >= 2
  IntegerLattice  G = Z^d, one index chain per axis
  Generic         a finite model of G given by explicit quotient tables

Domain styles for the integer kinds:

  NonNegative  D_n = {0, ..., N_n - 1}
  Centered     D_n = {-(N_n-1)/2, ..., (N_n-1)/2}; every N_n must be odd

Elements are plain ints (line), tuples of ints (lattice), or table indices
(generic).  All towers are abelian except possibly Generic.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import budgets
from .errors import (DepthExceeded, InvalidIndex, NonAbelianUnsupported,
                     NotInDomain, ParityError)

KIND_LINE = "IntegerLine"
KIND_LATTICE = "IntegerLattice"
KIND_GENERIC = "Generic"

STYLE_NONNEG = "NonNegative"
STYLE_CENTERED = "Centered"

TAIL_DIVERGENT = "divergent"
TAIL_GEOMETRIC = "geometric"


@dataclass
class TailDecl:
    """Declared behavior of the index ratios t_j = |D_j| / |D_{j+1}| past depth.

    divergent: sum t_j diverges (e.g. bounded indices); geometric: each later
    term is at most `ratio` times the previous one, ratio < 1.
    """

    kind: str
    ratio: Fraction = None

    def to_json(self):
        out = {"kind": self.kind}
        if self.ratio is not None:
            out["ratio"] = [self.ratio.numerator, self.ratio.denominator]
        return out

    @staticmethod
    def from_json(obj):
        if obj is None:
            return None
        kind = obj["kind"]
        if kind == TAIL_DIVERGENT:
            return TailDecl(TAIL_DIVERGENT)
        if kind == TAIL_GEOMETRIC:
            raw = obj["ratio"]
            ratio = Fraction(raw[0], raw[1]) if isinstance(raw, (list, tuple)) else Fraction(raw)
            if not 0 < ratio < 1:
                raise InvalidIndex(f"geometric tail ratio must be in (0,1), got {ratio}")
            return TailDecl(TAIL_GEOMETRIC, ratio)
        raise InvalidIndex(f"unknown tail kind {kind!r}")


def _coerce_tail(tail):
    return TailDecl.from_json(tail) if isinstance(tail, dict) else tail


def _check_indices(indices):
    if not indices:
        raise InvalidIndex("need at least one index")
    for q in indices:
        if not isinstance(q, int) or q < 2:
            raise InvalidIndex(f"indices must be integers >= 2, got {q!r}")


class IntegerLineTower:
    kind = KIND_LINE

    def __init__(self, indices, style=STYLE_NONNEG, tail=None):
        _check_indices(indices)
        if style not in (STYLE_NONNEG, STYLE_CENTERED):
            raise InvalidIndex(f"unknown style {style!r}")
        self.indices = list(indices)
        self.style = style
        self.tail = _coerce_tail(tail)
        self.depth = len(indices)
        self.N = [1]
        for q in indices:
            self.N.append(self.N[-1] * q)
        if style == STYLE_CENTERED:
            for m in self.N[1:]:
                if m % 2 == 0:
                    raise ParityError(f"centered style needs odd moduli, got {m}")
        self.half = [(m - 1) // 2 for m in self.N]
        self.zero = 0
        self.abelian = True

    def _chk(self, n):
        if not 0 <= n <= self.depth:
            raise DepthExceeded(f"level {n} outside 0..{self.depth}")

    def size(self, n):
        self._chk(n)
        return self.N[n]

    def lo(self, n):
        self._chk(n)
        return 0 if self.style == STYLE_NONNEG else -self.half[n]

    def reduce(self, g, n):
        self._chk(n)
        m = self.N[n]
        if self.style == STYLE_NONNEG:
            return g % m
        return (g + self.half[n]) % m - self.half[n]

    def in_domain(self, g, n):
        self._chk(n)
        if self.style == STYLE_NONNEG:
            return 0 <= g < self.N[n]
        return abs(g) <= self.half[n]

    def domain(self, n, budget=None):
        budgets.check_enum(self.size(n), f"D_{n}", budget)
        lo = self.lo(n)
        return range(lo, lo + self.N[n])

    def section(self, i, j, budget=None):
        """Gamma_i intersected with D_j, in enumeration order."""
        self._chk(i)
        self._chk(j)
        if i > j:
            raise DepthExceeded(f"section needs i <= j, got ({i},{j})")
        q = self.N[j] // self.N[i]
        budgets.check_enum(q, f"Gamma_{i} cap D_{j}", budget)
        step = self.N[i]
        if self.style == STYLE_NONNEG:
            return range(0, self.N[j], step)
        k = (q - 1) // 2
        return range(-k * step, (k + 1) * step, step)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def index_of(self, g, n):
        if not self.in_domain(g, n):
            raise NotInDomain(f"{g} not in D_{n}")
        return g - self.lo(n)

    def element_at(self, n, idx):
        return idx + self.lo(n)

    def parse_element(self, text):
        return int(text)

    def format_element(self, g):
        return str(g)

    def config(self):
        return TowerConfig(KIND_LINE, indices=list(self.indices), style=self.style,
                           tail=self.tail)


class IntegerLatticeTower:
    kind = KIND_LATTICE

    def __init__(self, per_axis_indices, style=STYLE_NONNEG, tail=None):
        if not per_axis_indices:
            raise InvalidIndex("need at least one axis")
        depth = len(per_axis_indices[0])
        for chain in per_axis_indices:
            if len(chain) != depth:
                raise InvalidIndex("all axes need the same number of levels")
            _check_indices(chain)
        self.axes = [IntegerLineTower(chain, style) for chain in per_axis_indices]
        self.dim = len(self.axes)
        self.style = style
        self.tail = _coerce_tail(tail)
        self.depth = depth
        self.zero = (0,) * self.dim
        self.abelian = True

    def _chk(self, n):
        if not 0 <= n <= self.depth:
            raise DepthExceeded(f"level {n} outside 0..{self.depth}")

    def size(self, n):
        self._chk(n)
        out = 1
        for ax in self.axes:
            out *= ax.size(n)
        return out

    def reduce(self, g, n):
        return tuple(ax.reduce(c, n) for ax, c in zip(self.axes, g))

    def in_domain(self, g, n):
        return all(ax.in_domain(c, n) for ax, c in zip(self.axes, g))

    def domain(self, n, budget=None):
        budgets.check_enum(self.size(n), f"D_{n}", budget)
        return self._product([ax.domain(n) for ax in self.axes])

    def section(self, i, j, budget=None):
        self._chk(i)
        self._chk(j)
        if i > j:
            raise DepthExceeded(f"section needs i <= j, got ({i},{j})")
        size = 1
        for ax in self.axes:
            size *= ax.size(j) // ax.size(i)
        budgets.check_enum(size, f"Gamma_{i} cap D_{j}", budget)
        return self._product([ax.section(i, j) for ax in self.axes])

    @staticmethod
    def _product(ranges):
        # lexicographic, first axis slowest: matches tuple comparison order
        out = [()]
        for r in ranges:
            out = [t + (v,) for t in out for v in r]
        return out

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def index_of(self, g, n):
        if not self.in_domain(g, n):
            raise NotInDomain(f"{g} not in D_{n}")
        idx = 0
        for ax, c in zip(self.axes, g):
            idx = idx * ax.size(n) + (c - ax.lo(n))
        return idx

    def element_at(self, n, idx):
        coords = []
        for ax in reversed(self.axes):
            m = ax.size(n)
            coords.append(idx % m + ax.lo(n))
            idx //= m
        return tuple(reversed(coords))

    def parse_element(self, text):
        parts = [int(p) for p in text.replace("(", "").replace(")", "").split(",")]
        if len(parts) != self.dim:
            raise NotInDomain(f"expected {self.dim} coordinates, got {len(parts)}")
        return tuple(parts)

    def format_element(self, g):
        return ",".join(str(c) for c in g)

    def config(self):
        return TowerConfig(KIND_LATTICE,
                           indices=[list(ax.indices) for ax in self.axes],
                           style=self.style, tail=self.tail)


class GenericTower:
    """Finite model of a tower given by explicit quotient tables.

    levels[n-1] describes G/Gamma_n for n = 1..depth: its size, its addition
    table (or `op` table when non-abelian), and for n >= 2 a projection onto
    the previous level.  Group elements are indices into the deepest level;
    D_n is a supplied list of such indices, one per Gamma_n-coset.
    """

    kind = KIND_GENERIC

    def __init__(self, levels, domains, style=STYLE_NONNEG, tail=None):
        if not levels:
            raise InvalidIndex("generic tower needs at least one level")
        self.depth = len(levels)
        self.sizes = [1]
        self.ops = [None]
        self.projs = [None]  # projs[n] maps level n -> level n-1
        prev = 1
        for n, lvl in enumerate(levels, start=1):
            try:
                size = int(lvl["size"])
                op = lvl["op"]
            except KeyError as exc:
                raise InvalidIndex(f"level {n} table missing field {exc}") from exc
            if size % prev != 0 or size // prev < 2:
                raise InvalidIndex(f"level {n} size {size} not a multiple >=2 of {prev}")
            if len(op) != size or any(len(row) != size for row in op):
                raise InvalidIndex(f"level {n} op table must be {size}x{size}")
            if n == 1:
                proj = [0] * size
            else:
                proj = list(lvl["proj"])
                if len(proj) != size:
                    raise InvalidIndex(f"level {n} proj must have {size} entries")
            self.sizes.append(size)
            self.ops.append([list(row) for row in op])
            self.projs.append(proj)
            prev = size
        # domains[0] is D_0 = {identity}; identity is table index 0 at depth
        if len(domains) != self.depth + 1 or list(domains[0]) != [0]:
            raise InvalidIndex("domains must list D_0..D_depth with D_0 = [0]")
        self.domains = [list(d) for d in domains]
        self.style = style
        self.tail = _coerce_tail(tail)
        self.zero = 0
        top = self.ops[self.depth]
        self.abelian = all(top[a][b] == top[b][a]
                           for a in range(self.sizes[self.depth])
                           for b in range(self.sizes[self.depth]))
        # inverse lookup at the deepest level
        self._inv = [None] * self.sizes[self.depth]
        for a in range(self.sizes[self.depth]):
            for b in range(self.sizes[self.depth]):
                if top[a][b] == 0:
                    self._inv[a] = b
                    break
            if self._inv[a] is None:
                raise InvalidIndex(f"element {a} has no inverse; op table is not a group")
        # coset key of g at level n: project the deepest index down
        self._down = []
        for g in range(self.sizes[self.depth]):
            keys = [0] * (self.depth + 1)
            keys[self.depth] = g
            for n in range(self.depth, 1, -1):
                keys[n - 1] = self.projs[n][keys[n]]
            keys[0] = 0
            self._down.append(keys)
        self._rep = [dict() for _ in range(self.depth + 1)]
        for n in range(self.depth + 1):
            for d in self.domains[n]:
                self._rep[n][self._down[d][n]] = d

    def _chk(self, n):
        if not 0 <= n <= self.depth:
            raise DepthExceeded(f"level {n} outside 0..{self.depth}")

    def size(self, n):
        self._chk(n)
        return self.sizes[n]

    def coset_key(self, g, n):
        return self._down[g][n]

    def reduce(self, g, n):
        self._chk(n)
        try:
            return self._rep[n][self._down[g][n]]
        except KeyError:
            raise NotInDomain(f"D_{n} has no representative for the coset of {g}")

    def in_domain(self, g, n):
        self._chk(n)
        return g in self._domain_sets(n)

    def _domain_sets(self, n):
        if not hasattr(self, "_dsets"):
            self._dsets = [frozenset(d) for d in self.domains]
        return self._dsets[n]

    def domain(self, n, budget=None):
        self._chk(n)
        budgets.check_enum(len(self.domains[n]), f"D_{n}", budget)
        return list(self.domains[n])

    def section(self, i, j, budget=None):
        self._chk(i)
        self._chk(j)
        out = [g for g in self.domains[j] if self._down[g][i] == self._down[0][i]]
        budgets.check_enum(len(out), f"Gamma_{i} cap D_{j}", budget)
        return out

    def add(self, a, b):
        return self.ops[self.depth][a][b]

    def sub(self, a, b):
        return self.ops[self.depth][a][self._inv[b]]

    def neg(self, a):
        return self._inv[a]

    def index_of(self, g, n):
        try:
            return self.domains[n].index(g)
        except ValueError:
            raise NotInDomain(f"{g} not in D_{n}")

    def element_at(self, n, idx):
        return self.domains[n][idx]

    def parse_element(self, text):
        return int(text)

    def format_element(self, g):
        return str(g)

    def require_abelian(self, what):
        if not self.abelian:
            raise NonAbelianUnsupported(f"{what} needs an abelian tower")

    def config(self):
        levels = []
        for n in range(1, self.depth + 1):
            lvl = {"size": self.sizes[n], "op": self.ops[n]}
            if n > 1:
                lvl["proj"] = self.projs[n]
            levels.append(lvl)
        return TowerConfig(KIND_GENERIC, style=self.style, tail=self.tail,
                           levels=levels, domains=[list(d) for d in self.domains])


@dataclass
class TowerConfig:
    kind: str
    indices: list = None
    style: str = STYLE_NONNEG
    tail: TailDecl = None
    levels: list = None
    domains: list = None

    def __post_init__(self):
        self.tail = _coerce_tail(self.tail)

    def to_json(self):
        out = {"kind": self.kind, "style": self.style}
        if self.indices is not None:
            out["indices"] = self.indices
        if self.levels is not None:
            out["levels"] = self.levels
            out["domains"] = self.domains
        if self.tail is not None:
            out["tail"] = self.tail.to_json()
        return out

    @staticmethod
    def from_json(obj):
        kind = obj.get("kind")
        if kind not in (KIND_LINE, KIND_LATTICE, KIND_GENERIC):
            raise InvalidIndex(f"unknown tower kind {kind!r}")
        return TowerConfig(kind,
                           indices=obj.get("indices"),
                           style=obj.get("style", STYLE_NONNEG),
                           tail=TailDecl.from_json(obj.get("tail")),
                           levels=obj.get("levels"),
                           domains=obj.get("domains"))

    @staticmethod
    def load(path):
        with open(path, "r", encoding="utf-8") as fh:
            return TowerConfig.from_json(json.load(fh))


def build_tower(config):
    if isinstance(config, dict):
        config = TowerConfig.from_json(config)
    if config.kind == KIND_LINE:
        return IntegerLineTower(config.indices, config.style, config.tail)
    if config.kind == KIND_LATTICE:
        return IntegerLatticeTower(config.indices, config.style, config.tail)
    if config.kind == KIND_GENERIC:
        return GenericTower(config.levels, config.domains, config.style, config.tail)
    raise InvalidIndex(f"unknown tower kind {config.kind!r}")


def tile_decompose(tower, g, j, i):
    """Split g in D_j uniquely as v + u with v in D_j cap Gamma_i, u in D_i."""
    if i > j:
        raise DepthExceeded(f"tile_decompose needs i <= j, got ({i},{j})")
    if not tower.in_domain(g, j):
        raise NotInDomain(f"{g} not in D_{j}")
    u = tower.reduce(g, i)
    v = tower.sub(g, u)
    if not tower.in_domain(v, j):
        # only reachable on a corrupted generic tower
        raise NotInDomain(f"tile part {v} escapes D_{j}; tower domains inconsistent")
    return v, u


def validate_tower(tower, max_level=None, budget=None):
    """Check the nesting/tiling axioms by enumeration up to a level cap."""
    from .result import failed, passed  # local import to avoid a cycle

    cap = budgets.enum_budget(budget)
    top = tower.depth if max_level is None else min(max_level, tower.depth)
    checked_pairs = []
    name = "decom"

    sizes = [tower.size(n) for n in range(top + 1)]
    for n in range(top):
        if sizes[n + 1] <= sizes[n]:
            return failed(name, f"levels 0..{top}",
                          {"level": n + 1, "reason": "index below 2",
                           "sizes": (sizes[n], sizes[n + 1])})

    levels_in_budget = [n for n in range(top + 1) if sizes[n] <= cap]
    for n in levels_in_budget:
        dom = list(tower.domain(n, budget=cap))
        if len(dom) != len(set(dom)):
            return failed(name, f"levels {levels_in_budget}",
                          {"level": n, "reason": "repeated element in D_n"})
        if len(dom) != sizes[n]:
            return failed(name, f"levels {levels_in_budget}",
                          {"level": n, "reason": "domain size mismatch",
                           "expected": sizes[n], "got": len(dom)})
        if tower.zero not in set(dom):
            return failed(name, f"levels {levels_in_budget}",
                          {"level": n, "reason": "identity missing from D_n"})
        # one representative per coset: reduce must fix the domain pointwise
        for d in dom:
            if tower.reduce(d, n) != d:
                return failed(name, f"levels {levels_in_budget}",
                              {"level": n, "element": d,
                               "reason": "reduce does not fix D_n"})
        if n > 0 and sizes[n - 1] <= cap:
            prev = set(tower.domain(n - 1, budget=cap))
            if not prev.issubset(set(dom)):
                missing = sorted(prev - set(dom), key=repr)[0]
                return failed(name, f"levels {levels_in_budget}",
                              {"level": n, "reason": "domains not nested",
                               "element": missing})

    for i in range(top + 1):
        for j in range(i + 1, top + 1):
            if sizes[j] > cap:
                continue
            dom_j = list(tower.domain(j, budget=cap))
            sec = list(tower.section(i, j, budget=cap))
            if len(sec) * sizes[i] != sizes[j]:
                return failed(name, f"tilings up to level {top}",
                              {"pair": (i, j), "reason": "section size mismatch",
                               "expected": sizes[j] // sizes[i], "got": len(sec)})
            seen = set()
            for v in sec:
                for u in tower.domain(i, budget=cap):
                    w = tower.add(v, u)
                    if w in seen:
                        return failed(name, f"tilings up to level {top}",
                                      {"pair": (i, j), "reason": "tiling overlaps",
                                       "element": w})
                    seen.add(w)
            if seen != set(dom_j):
                diff = sorted(set(dom_j) ^ seen, key=repr)[0]
                return failed(name, f"tilings up to level {top}",
                              {"pair": (i, j), "reason": "tiling misses D_j",
                               "element": diff})
            checked_pairs.append((i, j))

    return passed(name, f"levels 0..{top}, tilings {len(checked_pairs)} pairs, "
                        f"enumerated where |D_j| <= {cap}",
                  [{"pairs": checked_pairs}])
