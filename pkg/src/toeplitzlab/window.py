"""Materialized symbol windows over fundamental domains.

A window holds the array restricted to D_n as bit-packed values plus a
defined-mask (cells past the constructed depth exist once n reaches the
skeleton depth).  Windows are built by level tiling, not cell-by-cell
evaluation: the cells of level l inside D_n form full arithmetic progressions,
so one vectorized pass per level settles everything.

File formats:
  csv   one row per cell: coordinates, then 0/1 or ? for undefined
  bits  16-byte header (magic TPW1, level u32 LE, cells u64 LE), then the
        value bits LSB-first, then the defined-mask bits
  pgm   binary P5; 0 -> black, 1 -> white, undefined -> mid gray
"""

import numpy as np

from . import budgets
from .errors import DepthExceeded, NotInDomain
from .tower import KIND_LATTICE, KIND_LINE, STYLE_CENTERED

MAGIC = b"TPW1"


def _cache(skeleton):
    if not hasattr(skeleton, "_wincache"):
        skeleton._wincache = {}
    return skeleton._wincache


def _line_dtype(size):
    return np.int64 if size > (1 << 31) - 2 else np.int32


def line_values(skeleton, n, budget=None):
    """uint8 array over D_n in enumeration order; 255 marks undefined."""
    key = ("vals", n)
    cache = _cache(skeleton)
    if key in cache:
        return cache[key]
    T = skeleton.tower
    size = T.size(n)
    budgets.check_window(size, f"window D_{n}", budget)
    lo = T.lo(n)
    dt = _line_dtype(size + abs(lo))
    g = np.arange(lo, lo + size, dtype=dt)
    val = np.full(size, 255, dtype=np.uint8)
    undec = np.ones(size, dtype=bool)
    r = np.empty(size, dtype=dt)
    for l in range(min(skeleton.depth, n + 1)):
        m = T.size(l + 1)
        if T.style == STYLE_CENTERED:
            half = T.half[l + 1]
            np.add(g, half, out=r)
            np.mod(r, m, out=r)
            np.subtract(r, half, out=r)
            # in-place bool ops beat an |r| integer temp on big windows
            cells = r <= T.half[l]
            np.logical_and(cells, r >= -T.half[l], out=cells)
        else:
            np.mod(g, m, out=r)
            cells = r < T.size(l)
        np.logical_and(cells, undec, out=cells)
        kind = skeleton.steps[l]
        if kind[0] == "zero":
            val[cells] = 0
        else:
            val[cells] = (r[cells] == kind[1])
        np.logical_not(cells, out=cells)
        undec &= cells
        if not undec.any():
            break
    cache[key] = val
    return val


def line_levels(skeleton, n, budget=None):
    """int16 array of cell levels over D_n; -1 marks beyond-depth cells."""
    key = ("lvls", n)
    cache = _cache(skeleton)
    if key in cache:
        return cache[key]
    T = skeleton.tower
    size = T.size(n)
    budgets.check_window(size, f"level map D_{n}", budget)
    lo = T.lo(n)
    dt = _line_dtype(size + abs(lo))
    g = np.arange(lo, lo + size, dtype=dt)
    lvl = np.full(size, -1, dtype=np.int16)
    undec = np.ones(size, dtype=bool)
    r = np.empty(size, dtype=dt)
    for l in range(min(skeleton.depth, n + 1)):
        m = T.size(l + 1)
        if T.style == STYLE_CENTERED:
            half = T.half[l + 1]
            np.add(g, half, out=r)
            np.mod(r, m, out=r)
            np.subtract(r, half, out=r)
            cells = r <= T.half[l]
            np.logical_and(cells, r >= -T.half[l], out=cells)
        else:
            np.mod(g, m, out=r)
            cells = r < T.size(l)
        np.logical_and(cells, undec, out=cells)
        lvl[cells] = l
        np.logical_not(cells, out=cells)
        undec &= cells
        if not undec.any():
            break
    cache[key] = lvl
    return lvl


def window_values(skeleton, n, budget=None):
    """Values over D_n for any tower kind (line path is vectorized)."""
    if skeleton.tower.kind == KIND_LINE:
        return line_values(skeleton, n, budget)
    key = ("vals", n)
    cache = _cache(skeleton)
    if key in cache:
        return cache[key]
    T = skeleton.tower
    budgets.check_window(T.size(n), f"window D_{n}", budget)
    from .skeleton import Undefined
    out = np.empty(T.size(n), dtype=np.uint8)
    for idx, d in enumerate(T.domain(n, budget=budgets.enum_budget(budget))):
        v = skeleton.eval(d)
        out[idx] = 255 if v is Undefined else v
    cache[key] = out
    return out


def window_levels(skeleton, n, budget=None):
    if skeleton.tower.kind == KIND_LINE:
        return line_levels(skeleton, n, budget)
    key = ("lvls", n)
    cache = _cache(skeleton)
    if key in cache:
        return cache[key]
    T = skeleton.tower
    budgets.check_window(T.size(n), f"level map D_{n}", budget)
    out = np.empty(T.size(n), dtype=np.int16)
    for idx, d in enumerate(T.domain(n, budget=budgets.enum_budget(budget))):
        lvl = skeleton.level_of(d)
        out[idx] = -1 if lvl is None else lvl
    cache[key] = out
    return out


class SymbolWindow:
    """Bit-packed values + defined-mask over D_level."""

    def __init__(self, level, values_u8, dims=None):
        self.level = level
        self.n_cells = int(values_u8.shape[0])
        defined = values_u8 != 255
        self.bits = np.packbits(values_u8 == 1, bitorder="little")
        self.mask = np.packbits(defined, bitorder="little")
        self.dims = dims

    @property
    def fully_defined(self):
        return bool(self.defined_array().all())

    def values_array(self):
        """uint8 with 0/1 where defined and 255 elsewhere."""
        vals = np.unpackbits(self.bits, count=self.n_cells, bitorder="little")
        defined = self.defined_array()
        out = np.where(defined, vals, np.uint8(255)).astype(np.uint8)
        return out

    def defined_array(self):
        return np.unpackbits(self.mask, count=self.n_cells,
                             bitorder="little").astype(bool)

    def value_at(self, idx):
        if not 0 <= idx < self.n_cells:
            raise NotInDomain(f"cell {idx} outside window of {self.n_cells}")
        if not self.mask[idx >> 3] >> (idx & 7) & 1:
            return None
        return int(self.bits[idx >> 3] >> (idx & 7) & 1)

    def counts(self):
        vals = self.values_array()
        return {"zeros": int((vals == 0).sum()), "ones": int((vals == 1).sum()),
                "undefined": int((vals == 255).sum())}

    def __eq__(self, other):
        if not isinstance(other, SymbolWindow):
            return NotImplemented
        return (self.level == other.level and self.n_cells == other.n_cells
                and np.array_equal(self.bits, other.bits)
                and np.array_equal(self.mask, other.mask))

    # -- files -----------------------------------------------------------

    def to_bits(self, path):
        header = MAGIC + np.uint32(self.level).tobytes() + np.uint64(self.n_cells).tobytes()
        assert len(header) == 16
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(self.bits.tobytes())
            fh.write(self.mask.tobytes())

    @staticmethod
    def from_bits(path):
        with open(path, "rb") as fh:
            header = fh.read(16)
            if header[:4] != MAGIC:
                raise NotInDomain(f"{path} is not a window file")
            level = int(np.frombuffer(header[4:8], dtype=np.uint32)[0])
            n_cells = int(np.frombuffer(header[8:16], dtype=np.uint64)[0])
            nbytes = (n_cells + 7) // 8
            bits = np.frombuffer(fh.read(nbytes), dtype=np.uint8)
            mask = np.frombuffer(fh.read(nbytes), dtype=np.uint8)
        out = SymbolWindow.__new__(SymbolWindow)
        out.level = level
        out.n_cells = n_cells
        out.bits = bits.copy()
        out.mask = mask.copy()
        out.dims = None
        return out

    def to_csv(self, tower, path):
        vals = self.values_array()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# level={self.level}\n# cells={self.n_cells}\n")
            for idx in range(self.n_cells):
                g = tower.element_at(self.level, idx)
                v = vals[idx]
                fh.write(f"{tower.format_element(g)},{'?' if v == 255 else int(v)}\n")

    @staticmethod
    def from_csv(tower, path):
        level = None
        cells = None
        rows = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].strip().partition("=")
                    if key == "level":
                        level = int(val)
                    elif key == "cells":
                        cells = int(val)
                    continue
                coord, _, sym = line.rpartition(",")
                rows.append((tower.parse_element(coord),
                             255 if sym == "?" else int(sym)))
        if level is None or cells != len(rows):
            raise NotInDomain(f"{path} has a malformed window header")
        vals = np.full(cells, 255, dtype=np.uint8)
        for g, v in rows:
            vals[tower.index_of(g, level)] = v
        return SymbolWindow(level, vals, dims=_dims_for(tower, level))

    def to_pgm(self, path):
        vals = self.values_array()
        pixels = np.where(vals == 255, np.uint8(128),
                          np.where(vals == 1, np.uint8(255), np.uint8(0)))
        if self.dims and len(self.dims) == 2:
            height, width = self.dims
        else:
            height, width = 1, self.n_cells
        with open(path, "wb") as fh:
            fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
            fh.write(pixels.astype(np.uint8).tobytes())


def _dims_for(tower, n):
    if tower.kind == KIND_LATTICE and tower.dim == 2:
        return tuple(ax.size(n) for ax in tower.axes)
    return None


def materialize_window(skeleton, n, budget=None):
    """Build the D_n window; raises BudgetExceeded past the window cap."""
    if n < 0:
        raise DepthExceeded(f"negative level {n}")
    if n > skeleton.tower.depth:
        raise DepthExceeded(f"window level {n} exceeds tower depth")
    vals = window_values(skeleton, n, budget)
    return SymbolWindow(n, vals, dims=_dims_for(skeleton.tower, n))


def restrict_window(window, tower, lower):
    """The D_lower part of a D_level window, as its own window."""
    if lower > window.level:
        raise DepthExceeded(f"cannot restrict level {window.level} to {lower}")
    vals = window.values_array()
    idx = domain_indices(tower, lower, window.level)
    return SymbolWindow(lower, vals[idx], dims=_dims_for(tower, lower))


def domain_indices(tower, lower, upper):
    """Indices of D_lower cells inside the D_upper enumeration."""
    if tower.kind == KIND_LINE:
        off = tower.lo(lower) - tower.lo(upper)
        return np.arange(off, off + tower.size(lower))
    if tower.kind == KIND_LATTICE:
        axes_idx = []
        for ax in tower.axes:
            off = ax.lo(lower) - ax.lo(upper)
            axes_idx.append(np.arange(off, off + ax.size(lower)))
        idx = axes_idx[0]
        for k, ax_idx in enumerate(axes_idx[1:], start=1):
            stride = tower.axes[k].size(upper)
            idx = (idx[:, None] * stride + ax_idx[None, :]).ravel()
        return idx
    return np.array([tower.index_of(g, upper) for g in tower.domain(lower)],
                    dtype=np.int64)
