"""Cells, their refinement between consecutive levels, and orbit tests.

A level-n cell is a pair (v, tag) with v in D_n and tag one of
  ("Zero",)    the translate of the all-zero slot block
  ("One", g)   the translate picking the planted position g in J(n)
  ("Full",)    the whole translate, i.e. the union over all tags

Every level-(n+1) cell sits inside exactly one level-n cell.  With
w = gamma + v (gamma in Gamma_n cap D_{n+1}, v = reduce(w, n)) and a One-tag
position u = gamma~ + g~ (gamma~ nonzero since J(n+1) is built from nonzero
translates of J(n)), the parent tag is:

  (1) gamma != 0, Zero                 -> Zero
  (2) gamma != 0, One(u), gamma~ == gamma -> One(g~)
  (3) gamma != 0, One(u), gamma~ != gamma -> Zero
  (4) gamma == 0, step n+1 is zero     -> Zero      (whole child cell)
  (5) gamma == 0, step n+1 plants h    -> One(h)    (whole child cell)

These rules are verified empirically on the periodized measures by
classify/parent comparison over whole domains, and they drive the set
identities for Z_n and the corollary chains.
"""

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import budgets
from .errors import DepthExceeded, NotInDomain, Unsupported
from .skeleton import Undefined
from .tower import KIND_LINE, STYLE_CENTERED
from .window import window_values

TAG_ZERO = ("Zero",)
TAG_FULL = ("Full",)


def tag_one(g):
    return ("One", g)


@dataclass(frozen=True)
class CellSet:
    level: int
    cells: frozenset

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __contains__(self, cell):
        return cell in self.cells


def decompose_one_position(skeleton, u, n1):
    """u in J(n1) as gamma~ + g~ with g~ = reduce(u, n1 - 1)."""
    T = skeleton.tower
    g_t = T.reduce(u, n1 - 1)
    gamma_t = T.sub(u, g_t)
    return gamma_t, g_t


def parent_cell(skeleton, cell, child_level):
    """The unique level-(child_level - 1) cell containing the given cell."""
    T = skeleton.tower
    n = child_level - 1
    if n < 0:
        raise DepthExceeded("no parent below level 0")
    w, tag = cell
    if not T.in_domain(w, child_level):
        raise NotInDomain(f"cell rep {w} not in D_{child_level}")
    v = T.reduce(w, n)
    gamma = T.sub(w, v)
    if gamma == T.zero:
        if child_level > skeleton.depth:
            raise DepthExceeded(f"step {child_level} not constructed")
        kind = skeleton.steps[child_level - 1]
        return (v, tag_one(kind[1]) if kind[0] == "plant" else TAG_ZERO)
    if tag == TAG_ZERO:
        return (v, TAG_ZERO)
    if tag[0] == "One":
        gamma_t, g_t = decompose_one_position(skeleton, tag[1], child_level)
        return (v, tag_one(g_t)) if gamma_t == gamma else (v, TAG_ZERO)
    raise Unsupported("Full cells have mixed parents; normalize first")


def containment_case(skeleton, cell, child_level):
    """Which of the five refinement rules applies to this child cell."""
    T = skeleton.tower
    w, tag = cell
    gamma = T.sub(w, T.reduce(w, child_level - 1))
    if gamma == T.zero:
        return "c4" if skeleton.steps[child_level - 1][0] == "zero" else "c5"
    if tag == TAG_ZERO:
        return "c1"
    gamma_t, _ = decompose_one_position(skeleton, tag[1], child_level)
    return "c2" if gamma_t == gamma else "c3"


def cell_decompose(skeleton, set_id, n, budget=None):
    """Named sets as unions of level-n cells.

    Ids: Cn, Cn0, Cn1, Zn, Wn, [0], [1], or ("Cng", g).  U_n and Y_n are not
    cell unions at their own level and raise Unsupported.
    """
    T = skeleton.tower
    zero = T.zero
    if isinstance(set_id, tuple) and len(set_id) == 2 and set_id[0] == "Cng":
        g = set_id[1]
        if not skeleton.in_jset(g, n):
            raise NotInDomain(f"{g} is not in J({n})")
        return CellSet(n, frozenset({(zero, tag_one(g))}))
    if set_id == "Cn":
        return CellSet(n, frozenset({(zero, TAG_FULL)}))
    if set_id == "Cn0":
        return CellSet(n, frozenset({(zero, TAG_ZERO)}))
    if set_id == "Cn1":
        jn = skeleton.jset(n, budget=budget)
        return CellSet(n, frozenset((zero, tag_one(g)) for g in jn))
    if set_id == "Zn":
        budgets.check_enum(T.size(n), f"Zn cells level {n}", budget)
        return CellSet(n, frozenset((v, TAG_ZERO) for v in T.domain(n, budget=budget)))
    if set_id == "Wn":
        if n < 1:
            raise DepthExceeded("Wn needs n >= 1")
        sec = [s for s in T.section(n - 1, n, budget=budget) if s != zero]
        jn1 = skeleton.jset(n - 1, budget=budget)
        size = T.size(n - 1) * len(jn1) * len(sec) * max(len(sec) - 1, 0)
        budgets.check_enum(size, f"Wn cells level {n}", budget)
        cells = set()
        for v in T.domain(n - 1, budget=budget):
            for g in jn1:
                for g_t in sec:
                    u = T.add(g_t, g)
                    for gam in sec:
                        if gam == g_t:
                            continue
                        cells.add((T.add(gam, v), tag_one(u)))
        return CellSet(n, frozenset(cells))
    if set_id in ("[0]", "[1]"):
        from .periods import per_set
        symbol = int(set_id[1])
        pset = per_set(skeleton, n, symbol, budget)
        jn = skeleton.jset(n, budget=budget)
        cells = set((v, TAG_FULL) for v in pset)
        if symbol == 1:
            for g in jn:
                cells.add((g, tag_one(g)))
        else:
            for g in jn:
                cells.add((g, TAG_ZERO))
                for h in jn:
                    if h != g:
                        cells.add((g, tag_one(h)))
        return CellSet(n, frozenset(cells))
    if set_id in ("Un", "Yn"):
        raise Unsupported(f"{set_id} is not a union of level-{n} cells")
    raise NotInDomain(f"unknown set id {set_id!r}")


def normalize_cells(skeleton, cellset, budget=None):
    """Expand Full tags into Zero plus every One tag."""
    jn = skeleton.jset(cellset.level, budget=budget)
    out = set()
    for v, tag in cellset:
        if tag == TAG_FULL:
            out.add((v, TAG_ZERO))
            for g in jn:
                out.add((v, tag_one(g)))
        else:
            out.add((v, tag))
    return CellSet(cellset.level, frozenset(out))


# -- classification of periodized points ---------------------------------


def classify_points(skeleton, m, l, d_list, budget=None):
    """Level-l tags of sigma^{-d} eta_m for each d: -1 for Zero, else the
    index of the planted position in the ordered J(l)."""
    T = skeleton.tower
    jl = skeleton.jset(l, budget=budget)
    if T.kind == KIND_LINE:
        return _classify_line(skeleton, m, l, np.asarray(d_list, dtype=np.int64))
    out = []
    for d in d_list:
        v = T.reduce(d, l)
        gamma = T.sub(d, v)
        hit = -1
        for idx, g in enumerate(jl.elements):
            val = skeleton.eval_periodized(m, T.add(gamma, g))
            if val is Undefined:
                raise DepthExceeded(f"probe undefined at level {l}")
            if val == 1:
                if hit >= 0:
                    raise ArithmeticError("two planted cells in one translate")
                hit = idx
        out.append(hit)
    return np.asarray(out, dtype=np.int64)


def _classify_line(skeleton, m, l, d_arr, chunk=1 << 20):
    T = skeleton.tower
    vals = window_values(skeleton, m)
    if (vals == 255).any():
        raise DepthExceeded(f"mu_{m} region has undecided cells")
    size = T.size(m)
    lo = T.lo(m)
    jl = np.asarray(skeleton.jset(l).elements, dtype=np.int64)
    ml = T.size(l)
    if T.style == STYLE_CENTERED:
        half = T.half[l]
        v = (d_arr + half) % ml - half
    else:
        v = d_arr % ml
    gamma = d_arr - v
    out = np.empty(len(d_arr), dtype=np.int64)
    rows = max(1, chunk // max(len(jl), 1))
    for start in range(0, len(d_arr), rows):
        gm = gamma[start:start + rows, None]
        idx = (gm + jl[None, :] - lo) % size
        probe = vals[idx] == 1
        counts = probe.sum(axis=1)
        if (counts > 1).any():
            raise ArithmeticError("two planted cells in one translate")
        hit = np.where(counts == 1, probe.argmax(axis=1), -1)
        out[start:start + rows] = hit
    return out


def verify_refinement(skeleton, n, m, sample=None, seed=0, budget=None):
    """Compare the symbolic parent rule against pointwise classification.

    Classifies sigma^{-d} eta_m at levels n and n+1 for d over D_m (or a
    seeded sample) and checks the child cell's parent matches.  Returns
    (counterexample_or_None, case_counts, points).
    """
    T = skeleton.tower
    if skeleton.depth < m + 1:
        raise DepthExceeded(f"mu_{m} needs depth >= {m + 1}")
    if m < n + 1:
        raise DepthExceeded("refinement needs m >= n + 1")
    size = T.size(m)
    if sample is None:
        budgets.check_enum(size * max(len(skeleton.jset(n + 1, budget=budget)), 1),
                           f"refinement n={n} m={m}", budget)
        if T.kind == KIND_LINE:
            lo = T.lo(m)
            d_list = np.arange(lo, lo + size, dtype=np.int64)
        else:
            d_list = list(T.domain(m, budget=budget))
    else:
        rng = random.Random(seed)
        if T.kind == KIND_LINE:
            lo = T.lo(m)
            d_list = np.asarray([lo + rng.randrange(size) for _ in range(sample)],
                                dtype=np.int64)
        else:
            dom = list(T.domain(m, budget=budget))
            d_list = [dom[rng.randrange(len(dom))] for _ in range(sample)]

    jn = skeleton.jset(n, budget=budget)
    jn1 = skeleton.jset(n + 1, budget=budget)
    cidx = classify_points(skeleton, m, n + 1, d_list, budget)
    pidx = classify_points(skeleton, m, n, d_list, budget)

    kind = skeleton.steps[n]  # step n+1 decides the gamma == 0 column
    plant = kind[0] == "plant"
    counts = {"c1": 0, "c2": 0, "c3": 0, "c4": 0, "c5": 0}

    if T.kind == KIND_LINE:
        d_arr = np.asarray(d_list, dtype=np.int64)
        vn = _red_vec(T, d_arr, n)
        vn1 = _red_vec(T, d_arr, n + 1)
        gamma_c = vn1 - vn
        j1 = np.asarray(jn1.elements, dtype=np.int64)
        j1_red = _red_vec(T, j1, n)
        j1_gam = j1 - j1_red
        j0 = np.asarray(jn.elements, dtype=np.int64)

        is0 = gamma_c == 0
        has_c = cidx >= 0
        safe = np.where(has_c, cidx, 0)
        match = has_c & (j1_gam[safe] == gamma_c)
        exp_one = np.where(is0, plant, match)
        exp_g = np.where(is0, kind[1] if plant else 0, j1_red[safe])
        act_one = pidx >= 0
        act_g = j0[np.where(act_one, pidx, 0)]
        bad = (exp_one != act_one) | (exp_one & act_one & (exp_g != act_g))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            return ({"d": int(d_arr[i]),
                     "child": (int(vn1[i]),
                               TAG_ZERO if cidx[i] < 0 else tag_one(int(j1[cidx[i]]))),
                     "expected_parent_one": bool(exp_one[i]),
                     "actual_parent_one": bool(act_one[i])},
                    counts, len(d_arr))
        counts["c1"] = int((~is0 & ~has_c).sum())
        counts["c2"] = int((~is0 & match).sum())
        counts["c3"] = int((~is0 & has_c & ~match).sum())
        counts["c4"] = 0 if plant else int(is0.sum())
        counts["c5"] = int(is0.sum()) if plant else 0
        return None, counts, len(d_arr)

    for pos, d in enumerate(d_list):
        v1 = T.reduce(d, n + 1)
        child = (v1, TAG_ZERO if cidx[pos] < 0 else tag_one(jn1.elements[cidx[pos]]))
        counts[containment_case(skeleton, child, n + 1)] += 1
        want = parent_cell(skeleton, child, n + 1)
        got = (T.reduce(d, n),
               TAG_ZERO if pidx[pos] < 0 else tag_one(jn.elements[pidx[pos]]))
        if want != got:
            return ({"d": d, "child": child, "expected": want, "actual": got},
                    counts, len(d_list))
    return None, counts, len(d_list)


def _red_vec(T, arr, l):
    ml = T.size(l)
    if T.style == STYLE_CENTERED:
        half = T.half[l]
        return (arr + half) % ml - half
    return arr % ml


# -- the set identities ----------------------------------------------------


def zero_set_identity(skeleton, n, budget=None):
    """Class algebra for the Z_n recursion at level n.

    Children classes are (gamma, tag-class) with gamma over Gamma_n cap
    D_{n+1} and tag-class Zero or One(gamma~).  LHS: classes whose parent tag
    is Zero.  RHS: Z_{n+1} union W_{n+1}, plus the full One column at
    gamma == 0 when step n+1 is a zero step.  Equality must hold exactly at
    zero steps (n in M) and containment LHS <= RHS otherwise.

    Returns (equality_holds, containment_holds, class_table).
    """
    T = skeleton.tower
    if n + 1 > skeleton.depth:
        raise DepthExceeded(f"zero-set identity at {n} needs depth >= {n + 1}")
    plant = skeleton.steps[n][0] == "plant"
    sec = list(T.section(n, n + 1, budget=budget))
    nz = [g for g in sec if g != T.zero]
    table = []
    equality = True
    containment = True
    for gamma in sec:
        is0 = gamma == T.zero
        for tagc in [("Zero",)] + [("OneClass", gt) for gt in nz]:
            if tagc[0] == "Zero":
                lhs = True if not is0 else not plant
                in_rhs = True  # Z_{n+1}
            else:
                gt = tagc[1]
                if is0:
                    lhs = not plant
                    in_rhs = not plant  # the C^1 column exists at zero steps
                else:
                    lhs = gt != gamma
                    in_rhs = gt != gamma  # W_{n+1} needs gamma not in {0, gamma~}
            if lhs and not in_rhs:
                containment = False
            if lhs != in_rhs:
                equality = False
            table.append({"gamma": gamma, "tag": tagc, "parent_zero": lhs,
                          "rhs": in_rhs})
    return equality, containment, table


def corollary_chain(skeleton, n_j, n_s, sample=None, seed=0,
                    exhaustive_cap=200000, budget=None):
    """Every finest Zero-ancestor atom passes through an allowed exit.

    For atoms (w, tag) at level n_s whose iterated parent at level n_j is a
    Zero cell, one of: the atom itself is a Zero cell, some intermediate cell
    lies in W_r, or the chain crosses a zero-step One column at some m in M.
    Returns (counterexample_or_None, branch_counts, atoms_checked).
    """
    T = skeleton.tower
    if n_s > skeleton.depth:
        raise DepthExceeded("chain exceeds constructed depth")
    js = skeleton.jset(n_s, budget=budget)
    size = T.size(n_s)
    total = size * (1 + len(js))
    rng = random.Random(seed)
    m_zero_steps = {skeleton.m_k[k] - 1 for k in skeleton.completed_blocks()}
    m_window = {m for m in m_zero_steps if n_j <= m < n_s}

    def atoms():
        if sample is None and total <= exhaustive_cap:
            for w in T.domain(n_s, budget=budget):
                yield (w, TAG_ZERO)
                for u in js:
                    yield (w, tag_one(u))
        else:
            count = sample if sample is not None else exhaustive_cap
            for _ in range(count):
                if T.kind == KIND_LINE:
                    w = T.lo(n_s) + rng.randrange(size)
                else:
                    dom = list(T.domain(n_s, budget=budget))
                    w = dom[rng.randrange(len(dom))]
                pick = rng.randrange(len(js) + 1)
                yield (w, TAG_ZERO) if pick == 0 else (w, tag_one(js.elements[pick - 1]))

    branches = {"already_zero": 0, "w_exit": 0, "one_column": 0, "not_zero_ancestor": 0}
    checked = 0
    for atom in atoms():
        checked += 1
        chain = {n_s: atom}
        cell = atom
        for r in range(n_s, n_j, -1):
            cell = parent_cell(skeleton, cell, r)
            chain[r - 1] = cell
        if chain[n_j][1] != TAG_ZERO:
            branches["not_zero_ancestor"] += 1
            continue
        if atom[1] == TAG_ZERO:
            branches["already_zero"] += 1
            continue
        exited = False
        for r in range(n_j + 1, n_s + 1):
            w_r, tag_r = chain[r]
            case = containment_case(skeleton, chain[r], r)
            if case == "c3":
                branches["w_exit"] += 1
                exited = True
                break
            if r - 1 in m_window and case == "c4" and tag_r[0] == "One":
                branches["one_column"] += 1
                exited = True
                break
        if not exited:
            return {"atom": atom, "chain": sorted(chain.items())}, branches, checked
    return None, branches, checked


# -- orbit membership ------------------------------------------------------


def orbit_member(skeleton, v, set_id, n, budget=None):
    """Membership of the orbit point indexed by v in the named level-n set."""
    T = skeleton.tower

    def probe(g):
        val = skeleton.eval(T.add(v, g))
        if val is Undefined:
            raise DepthExceeded(
                f"probe at {T.format_element(T.add(v, g))} is undefined; "
                "increase depth")
        return val

    if set_id == "Un":
        for s in T.domain(n + 1, budget=budget):
            want = skeleton.eval(T.reduce(s, n))
            if want is Undefined:
                raise DepthExceeded(f"eta_{n} undefined; increase depth")
            if probe(s) != want:
                return False
        return True
    if set_id == "Yn":
        if T.reduce(v, n) != T.zero:
            return False
        jn = skeleton.jset(n, budget=budget)
        for gamma in T.section(n, n + 1, budget=budget):
            for g in jn:
                if probe(T.add(gamma, g)) != 0:
                    return False
        return True
    if set_id == "Zn":
        jn = skeleton.jset(n, budget=budget)
        gamma_v = T.sub(v, T.reduce(v, n))
        for g in jn:
            val = skeleton.eval(T.add(gamma_v, g))
            if val is Undefined:
                raise DepthExceeded("probe undefined; increase depth")
            if val != 0:
                return False
        return True
    if set_id in ("Cn", "Cn0", "Cn1") or (isinstance(set_id, tuple)
                                          and set_id[0] == "Cng"):
        if T.reduce(v, n) != T.zero:
            return False
        # per-agreement over the visible saturation
        from .periods import per_set
        top = min(n + 1, T.depth)
        for symbol in (0, 1):
            for c in per_set(skeleton, n, symbol, budget):
                for gamma in T.section(n, top, budget=budget):
                    if probe(T.add(c, gamma)) != symbol:
                        return False
        if set_id == "Cn":
            return True
        jn = skeleton.jset(n, budget=budget)
        ones = [g for g in jn if probe(g) == 1]
        if set_id == "Cn0":
            return not ones
        if set_id == "Cn1":
            return len(ones) == 1
        return set_id[1] in ones
    raise NotInDomain(f"unknown set id {set_id!r}")


# -- measures of cell families --------------------------------------------


def mu_zero_set(skeleton, n, m, budget=None):
    """mu_m(Z_n): translates whose level-n tag is Zero."""
    T = skeleton.tower
    budgets.check_enum(T.size(m) * max(len(skeleton.jset(n, budget=budget)), 1),
                       f"mu_{m}(Z_{n})", budget)
    if T.kind == KIND_LINE:
        lo = T.lo(m)
        d = np.arange(lo, lo + T.size(m), dtype=np.int64)
    else:
        d = list(T.domain(m, budget=budget))
    tags = classify_points(skeleton, m, n, d, budget)
    return Fraction(int((tags < 0).sum()), T.size(m))


def mu_w_set(skeleton, n, m, budget=None):
    """mu_m(W_n): gamma nonzero, a One tag whose gamma~ differs from gamma."""
    T = skeleton.tower
    jn = skeleton.jset(n, budget=budget)
    budgets.check_enum(T.size(m) * max(len(jn), 1), f"mu_{m}(W_{n})", budget)
    if T.kind == KIND_LINE:
        lo = T.lo(m)
        d_arr = np.arange(lo, lo + T.size(m), dtype=np.int64)
        tags = classify_points(skeleton, m, n, d_arr, budget)
        vn = _red_vec(T, d_arr, n)
        vprev = _red_vec(T, d_arr, n - 1)
        gamma = vn - vprev
        j = np.asarray(jn.elements, dtype=np.int64)
        j_red = _red_vec(T, j, n - 1)
        j_gam = j - j_red
        has = tags >= 0
        safe = np.where(has, tags, 0)
        member = has & (gamma != 0) & (j_gam[safe] != gamma)
        return Fraction(int(member.sum()), T.size(m))
    count = 0
    dom = list(T.domain(m, budget=budget))
    tags = classify_points(skeleton, m, n, dom, budget)
    for pos, d in enumerate(dom):
        if tags[pos] < 0:
            continue
        vn = T.reduce(d, n)
        gamma = T.sub(vn, T.reduce(d, n - 1))
        if gamma == T.zero:
            continue
        gamma_t, _ = decompose_one_position(skeleton, jn.elements[tags[pos]], n)
        if gamma_t != gamma:
            count += 1
    return Fraction(count, T.size(m))
