"""Named verification checks over a built array, runnable singly or as a suite.

Every check reports its exhaustive range in `scope`; a quantifier over all n
always becomes "all n in the computed range" and is never extrapolated.  A
Fail carries a concrete counterexample.  Checks whose hypotheses are not met
by the constructed tower report Vacated (prerequisite failed) or Inconclusive
(nothing checkable / bounds too weak), never a bare Pass.
"""

import time
from fractions import Fraction

import numpy as np

from . import budgets
from .cells import (_red_vec, corollary_chain, mu_zero_set, verify_refinement,
                    zero_set_identity)
from .density import ratio_term
from .errors import BudgetExceeded, UnknownCheck
from .measures import a_counts, an_det_check
from .periods import partitions_c_check, per_eq_check, per_member
from .result import (SuiteReport, failed, inconclusive, passed, vacated)
from .skeleton import j_set, j_set_recursive, j_size
from .tower import KIND_LINE, STYLE_CENTERED, TAIL_GEOMETRIC, validate_tower
from .window import window_values


# -- small helpers ---------------------------------------------------------


def _m_levels(skeleton):
    """Block boundary levels n_k = m_k - 1, including a boundary whose block
    extends past the built depth (the value itself is known)."""
    return [m - 1 for m in skeleton.m_k]


def _m_pairs(skeleton):
    """(n, m) with both in the boundary sequence, m >= n + 2, m <= depth-1."""
    ms = _m_levels(skeleton)
    out = []
    for i, n in enumerate(ms):
        for m in ms[i + 1:]:
            if n + 2 <= m <= skeleton.depth - 1:
                out.append((n, m))
    return out


def _in_dom_vec(T, arr, l):
    if T.style == STYLE_CENTERED:
        return np.abs(arr) <= T.half[l]
    return (arr >= 0) & (arr < T.size(l))


def good_set(skeleton, n, m, budget=None):
    """Gamma_{n+1} cap D_m minus the union of D_l Gamma_{l+1}, l = n+1..m-1."""
    T = skeleton.tower
    if T.kind == KIND_LINE:
        budgets.check_window(T.size(m), f"good set ({n},{m})", budget)
        lo = T.lo(m)
        g = np.arange(lo, lo + T.size(m), dtype=np.int64)
        mask = _red_vec(T, g, n + 1) == 0
        for l in range(n + 1, m):
            mask &= ~_in_dom_vec(T, _red_vec(T, g, l + 1), l)
        return g[mask]
    budgets.check_enum(T.size(m), f"good set ({n},{m})", budget)
    out = []
    for g in T.domain(m, budget=budget):
        if T.reduce(g, n + 1) != T.zero:
            continue
        if any(T.in_domain(T.reduce(g, l + 1), l) for l in range(n + 1, m)):
            continue
        out.append(g)
    return out


def good_bound(tower, n, m):
    b = Fraction(tower.size(m), tower.size(n + 1))
    for l in range(1, m - n):
        b *= 1 - Fraction(tower.size(n + l), tower.size(n + l + 1))
    return b


def _eta_level_targets(skeleton, n, budget=None):
    """eta_n over D_{n+1} as an array (line towers)."""
    T = skeleton.tower
    vals_n = window_values(skeleton, n, budget)
    s = np.arange(T.lo(n + 1), T.lo(n + 1) + T.size(n + 1), dtype=np.int64)
    return vals_n[_red_vec(T, s, n) - T.lo(n)]


def _u_mask_line(skeleton, base, n, m_window, budget=None):
    """Which base points v have the sigma^{v^{-1}} eta window on D_{n+1}
    equal to eta_n.  All probes must stay inside D_{m_window}."""
    T = skeleton.tower
    vals = window_values(skeleton, m_window, budget)
    target = _eta_level_targets(skeleton, n, budget)
    lo_w = T.lo(m_window)
    lo_s = T.lo(n + 1)
    ok = np.ones(len(base), dtype=bool)
    for i in range(T.size(n + 1)):
        ok &= vals[base + (lo_s + i) - lo_w] == target[i]
    return ok


def _y_mask_line(skeleton, base, n, m_window, budget=None):
    """Which base points pass the all-zero probe over section x J(n)."""
    T = skeleton.tower
    vals = window_values(skeleton, m_window, budget)
    lo_w = T.lo(m_window)
    ok = _red_vec(T, base, n) == 0
    for gamma in T.section(n, n + 1, budget=budget):
        for g in skeleton.jset(n, budget=budget).elements:
            ok &= vals[base + (gamma + g) - lo_w] == 0
    return ok


def _finish(res, t0):
    res.millis = (time.perf_counter() - t0) * 1e3
    return res


# -- the checks ------------------------------------------------------------


def check_decom(skeleton, budget=None, max_level=None):
    return validate_tower(skeleton.tower, max_level, budget)


def check_j_recursion(skeleton, budget=None, levels=None):
    t0 = time.perf_counter()
    T = skeleton.tower
    cap = budgets.enum_budget(budget)
    done = []
    skipped = []
    top = levels if levels is not None else T.depth
    for n in range(1, top + 1):
        if j_size(T, n) > cap or T.size(n) > budgets.window_budget(budget):
            skipped.append(n)
            continue
        a = j_set(T, n, budget)
        b = j_set_recursive(T, n, budget)
        if a != b:
            only_a = sorted(set(a.elements) - set(b.elements))[:3]
            only_b = sorted(set(b.elements) - set(a.elements))[:3]
            return _finish(failed(
                "j-recursion", f"n={n}",
                {"n": n, "direct_only": only_a, "recursive_only": only_b}), t0)
        done.append(n)
    scope = f"n in {done}" + (f", over budget: {skipped}" if skipped else "")
    if not done:
        return _finish(inconclusive("j-recursion", scope), t0)
    return _finish(passed("j-recursion", scope,
                          [{"sizes": {n: j_size(T, n) for n in done}}]), t0)


def check_per_eq(skeleton, budget=None, levels=None, cap=100000):
    t0 = time.perf_counter()
    T = skeleton.tower
    done = []
    skipped = []
    top = levels if levels is not None else skeleton.depth - 1
    for n in range(1, top + 1):
        if T.size(n) > cap:
            skipped.append(n)
            continue
        sub = per_eq_check(skeleton, n, budget=budget)
        if sub.status == "Fail":
            return _finish(sub, t0)
        # the membership facet: J(n) gains the period only one level up
        for g in skeleton.jset(n, budget=budget):
            if per_member(skeleton, n + 1, g) is None \
                    or per_member(skeleton, n, g) is not None:
                return _finish(failed(
                    "per-eq", f"n={n} membership",
                    {"n": n, "g": T.format_element(g)}), t0)
        done.append(n)
    scope = (f"n in {done}, window saturation + step-log rebuild + "
             f"J-membership" + (f"; over cap: {skipped}" if skipped else ""))
    if not done:
        return _finish(inconclusive("per-eq", scope), t0)
    return _finish(passed("per-eq", scope), t0)


def check_good_relation(skeleton, budget=None, pairs=None):
    t0 = time.perf_counter()
    T = skeleton.tower
    dep = T.depth
    wb = budgets.window_budget(budget)
    if pairs is None:
        pairs = [(n, m) for n in range(1, dep - 1)
                 for m in range(n + 2, dep + 1)]
    done = []
    skipped = []
    for n, m in pairs:
        if T.size(m) > wb or T.size(m) * T.size(n + 1) > (1 << 31):
            skipped.append((n, m))
            continue
        S = good_set(skeleton, n, m, budget)
        count = len(S)
        bound = good_bound(T, n, m)
        if count < 1 or Fraction(count) < bound:
            return _finish(failed(
                "good-relation", f"(n,m)=({n},{m})",
                {"n": n, "m": m, "count": count, "bound": bound}), t0)
        if T.kind == KIND_LINE:
            v = np.arange(T.lo(n + 1), T.lo(n + 1) + T.size(n + 1),
                          dtype=np.int64)
            w = np.asarray(S, dtype=np.int64)[:, None] + v[None, :]
            bad = ~_in_dom_vec(T, w, m)
            for l in range(n + 1, m):
                bad |= _in_dom_vec(T, _red_vec(T, w, l + 1), l)
            if bad.any():
                i, j = np.unravel_index(int(bad.argmax()), bad.shape)
                return _finish(failed(
                    "good-relation", f"(n,m)=({n},{m}) translate containment",
                    {"gamma": int(S[i]), "v": int(v[j])}), t0)
        else:
            for gamma in S:
                for v in T.domain(n + 1, budget=budget):
                    gv = T.add(gamma, v)
                    ok = T.in_domain(gv, m) and not any(
                        T.in_domain(T.reduce(gv, l + 1), l)
                        for l in range(n + 1, m))
                    if not ok:
                        return _finish(failed(
                            "good-relation",
                            f"(n,m)=({n},{m}) translate containment",
                            {"gamma": T.format_element(gamma),
                             "v": T.format_element(v)}), t0)
        done.append({"n": n, "m": m, "count": count, "bound": bound})
    scope = (f"{len(done)} pairs, n+2 <= m <= {dep}"
             + (f"; over budget: {skipped}" if skipped else ""))
    if not done:
        return _finish(inconclusive("good-relation", scope), t0)
    return _finish(passed("good-relation", scope, done), t0)


def _patch_offsets(skeleton, n, include_identity, budget=None):
    offs = []
    T = skeleton.tower
    for gamma in T.section(n, n + 1, budget=budget):
        if gamma == T.zero and not include_identity:
            continue
        for u in skeleton.jset(n, budget=budget).elements:
            offs.append((gamma, u, T.add(gamma, u)))
    return offs


def check_good_patches(skeleton, budget=None):
    t0 = time.perf_counter()
    T = skeleton.tower
    pairs = _m_pairs(skeleton)
    if not pairs:
        return _finish(passed(
            "good-patches",
            f"no boundary pairs with m <= depth-1 = {skeleton.depth - 1}; "
            "vacuous"), t0)
    wits = []
    for n, m in pairs:
        S = good_set(skeleton, n, m, budget)
        vals = window_values(skeleton, m, budget)
        offs = _patch_offsets(skeleton, n, include_identity=True,
                              budget=budget)
        qualifying = []
        for gamma0 in ([int(x) for x in S] if T.kind == KIND_LINE else S):
            patch_ok = all(
                vals[T.index_of(T.reduce(T.add(gamma0, off), m), m)]
                == vals[T.index_of(T.reduce(u, m), m)]
                for _, u, off in offs)
            if patch_ok:
                qualifying.append(gamma0)
        if T.kind == KIND_LINE:
            base = np.asarray(qualifying, dtype=np.int64)
            in_u = _u_mask_line(skeleton, base, n, m, budget)
            if not in_u.all():
                i = int(np.flatnonzero(~in_u)[0])
                return _finish(failed(
                    "good-patches", f"(n,m)=({n},{m})",
                    {"gamma0": int(base[i]),
                     "reason": "qualifying translate missed the level window"}
                ), t0)
        else:
            from .cells import orbit_member
            for gamma0 in qualifying:
                if not orbit_member(skeleton, gamma0, "Un", n, budget):
                    return _finish(failed(
                        "good-patches", f"(n,m)=({n},{m})",
                        {"gamma0": T.format_element(gamma0)}), t0)
        wits.append({"n": n, "m": m, "good": len(S),
                     "qualifying": len(qualifying)})
    return _finish(passed("good-patches",
                          f"boundary pairs {[(w['n'], w['m']) for w in wits]}",
                          wits), t0)


def check_t1t2(skeleton, budget=None):
    t0 = time.perf_counter()
    T = skeleton.tower
    pairs = _m_pairs(skeleton)
    if not pairs:
        return _finish(passed(
            "t1t2", f"no boundary pairs with m <= depth-1 = "
            f"{skeleton.depth - 1}; vacuous"), t0)
    wits = []
    for n, m in pairs:
        S = good_set(skeleton, n, m, budget)
        vals = window_values(skeleton, m, budget)
        offs = _patch_offsets(skeleton, n, include_identity=True,
                              budget=budget)
        if T.kind == KIND_LINE:
            lo = T.lo(m)
            S_arr = np.asarray(S, dtype=np.int64)
            for gamma, u, off in offs:
                want = vals[u - lo]
                got = vals[S_arr + off - lo]
                if not (got == want).all():
                    i = int(np.flatnonzero(got != want)[0])
                    return _finish(failed(
                        "t1t2", f"(n,m)=({n},{m})",
                        {"gamma0": int(S_arr[i]), "gamma": gamma, "u": u}), t0)
        else:
            for gamma0 in S:
                for gamma, u, off in offs:
                    a = vals[T.index_of(T.reduce(T.add(gamma0, off), m), m)]
                    b = vals[T.index_of(T.reduce(u, m), m)]
                    if a != b:
                        return _finish(failed(
                            "t1t2", f"(n,m)=({n},{m})",
                            {"gamma0": T.format_element(gamma0),
                             "gamma": T.format_element(gamma),
                             "u": T.format_element(u)}), t0)
        wits.append({"n": n, "m": m, "good": len(S), "offsets": len(offs)})
    return _finish(passed("t1t2",
                          f"boundary pairs {[(w['n'], w['m']) for w in wits]}",
                          wits), t0)


def check_partitions_c(skeleton, budget=None, k_values=None, samples=10000,
                       seed=0):
    t0 = time.perf_counter()
    ks = list(k_values) if k_values is not None \
        else list(range(1, max(2, skeleton.depth - 1)))
    subs = []
    for k in ks:
        try:
            sub = partitions_c_check(skeleton, k, samples=samples, seed=seed,
                                     budget=budget)
        except BudgetExceeded:
            subs.append({"k": k, "status": "skipped over budget"})
            continue
        if sub.status == "Fail":
            return _finish(sub, t0)
        subs.append({"k": k, "status": sub.status, "scope": sub.scope})
    statuses = {s.get("status") for s in subs}
    if statuses <= {"Inconclusive", "skipped over budget"}:
        return _finish(inconclusive("partitions-c", f"k in {ks}", subs), t0)
    return _finish(passed("partitions-c", f"k in {ks}", subs), t0)


def check_linking(skeleton, budget=None):
    t0 = time.perf_counter()
    ok_map = dict(skeleton.linking_ok)
    wits = [{"block": k, "holds": bool(v)} for k, v in sorted(ok_map.items())]
    scope = f"completed blocks {sorted(ok_map)}"
    if not ok_map:
        return _finish(inconclusive("linking", "no completed blocks"), t0)
    if all(ok_map.values()):
        return _finish(passed("linking", scope, wits), t0)
    return _finish(inconclusive(
        "linking", scope + "; condition fails on some blocks, so "
        "linking-dependent statements are not testable here", wits), t0)


def check_good_ds(skeleton, budget=None):
    t0 = time.perf_counter()
    T = skeleton.tower
    from .window import line_levels, line_values
    levels = [nk for nk in _m_levels(skeleton)
              if nk >= 2 and nk + 1 <= skeleton.depth]
    if not levels:
        return _finish(passed(
            "good-ds", "no boundary level n_k >= 2 within depth; vacuous"),
            t0)
    wits = []
    for nk in levels:
        if T.kind != KIND_LINE:
            budgets.check_enum(T.size(nk + 1), f"good-ds at {nk}", budget)
        if T.kind == KIND_LINE:
            lv_up = line_levels(skeleton, nk + 1, budget)
            va_up = line_values(skeleton, nk + 1, budget)
            per1_up = (lv_up >= 0) & (lv_up < nk + 1) & (va_up == 1)
            lv_lo = line_levels(skeleton, nk - 1, budget)
            va_lo = line_values(skeleton, nk - 1, budget)
            per1_lo = (lv_lo >= 0) & (lv_lo < nk - 1) & (va_lo == 1)
            lo_up = T.lo(nk + 1)
            lo_lo = T.lo(nk - 1)
            e_all = np.arange(lo_up, lo_up + T.size(nk + 1), dtype=np.int64)
            found = []
            for w in range(T.lo(nk - 1), T.lo(nk - 1) + T.size(nk - 1)):
                if w == 0:
                    continue
                hit = None
                for s in range(0, len(e_all), 4096):
                    e = e_all[s:s + 4096]
                    g = e - w
                    cand = per1_lo[_red_vec(T, g, nk - 1) - lo_lo] \
                        & ~per1_up[e - lo_up]
                    if cand.any():
                        hit = int(g[int(cand.argmax())])
                        break
                if hit is None:
                    return _finish(failed(
                        "good-ds", f"n_k={nk}",
                        {"n_k": nk, "w": w,
                         "reason": "no witness in D_{n_k+1}"}), t0)
                found.append((w, hit))
            wits.append({"n_k": nk, "witnesses": len(found),
                         "sample": found[:3]})
        else:
            from .periods import per_set
            p1_lo = per_set(skeleton, nk - 1, 1, budget)
            for w in T.domain(nk - 1, budget=budget):
                if w == T.zero:
                    continue
                hit = None
                for e in T.domain(nk + 1, budget=budget):
                    g = T.sub(e, w)
                    if T.reduce(g, nk - 1) not in p1_lo:
                        continue
                    lv = skeleton.level_of(e)
                    up = lv is not None and lv < nk + 1 \
                        and skeleton.eval(e) == 1
                    if not up:
                        hit = g
                        break
                if hit is None:
                    return _finish(failed(
                        "good-ds", f"n_k={nk}",
                        {"n_k": nk, "w": T.format_element(w)}), t0)
            wits.append({"n_k": nk, "witnesses": T.size(nk - 1) - 1})
    return _finish(passed("good-ds", f"n_k in {levels}, every w in "
                          "D_{n_k-1} minus identity", wits), t0)


def check_u_in_y(skeleton, budget=None):
    t0 = time.perf_counter()
    T = skeleton.tower
    ms = _m_levels(skeleton)
    usable = [(k, nk) for k, nk in enumerate(ms)
              if skeleton.depth >= nk + 4]
    if not usable:
        return _finish(inconclusive(
            "u-in-y", f"depth {skeleton.depth} below n_k+4 for all blocks"),
            t0)
    wits = []
    any_vacated = False
    for k, nk in usable:
        linking = bool(skeleton.linking_ok.get(k, False))
        if T.kind == KIND_LINE:
            budgets.check_window(T.size(nk + 3), f"u-in-y at {nk}", budget)
            base = np.arange(T.lo(nk + 2), T.lo(nk + 2) + T.size(nk + 2),
                             dtype=np.int64)
            u_mask = _u_mask_line(skeleton, base, nk, nk + 3, budget)
            y_mask = _y_mask_line(skeleton, base, nk, nk + 3, budget)
            holds = bool((~u_mask | y_mask).all())
            members = int(u_mask.sum())
            bad = None if holds else int(base[int((u_mask & ~y_mask).argmax())])
        else:
            from .cells import orbit_member
            budgets.check_enum(
                T.size(nk + 2) * T.size(nk + 1), f"u-in-y at {nk}", budget)
            members = 0
            holds = True
            bad = None
            for v in T.domain(nk + 2, budget=budget):
                if orbit_member(skeleton, v, "Un", nk, budget):
                    members += 1
                    if not orbit_member(skeleton, v, "Yn", nk, budget):
                        holds = False
                        bad = T.format_element(v)
                        break
        if linking and not holds:
            return _finish(failed(
                "u-in-y", f"n_k={nk}, reps D_{nk + 2}",
                {"n_k": nk, "v": bad}), t0)
        if not linking:
            any_vacated = True
        wits.append({"n_k": nk, "linking": linking, "u_members": members,
                     "contained": holds})
    scope = f"n_k in {[nk for _, nk in usable]}, reps over D_(n_k+2)"
    if any_vacated:
        return _finish(vacated(
            "u-in-y", scope + "; linking fails on some blocks "
            "(observed outcomes in witnesses)", wits), t0)
    return _finish(passed("u-in-y", scope, wits), t0)


def check_containings(skeleton, budget=None, samples=5000, seed=0):
    t0 = time.perf_counter()
    T = skeleton.tower
    dep = skeleton.depth
    wb = budgets.window_budget(budget)
    wits = []
    skipped = []
    for n in range(1, dep - 1):
        m = min(n + 2, dep - 1)
        if m < n + 1:
            continue
        probe_cost = j_size(T, n + 1)
        if T.size(m) * probe_cost <= wb:
            cx, counts, pts = verify_refinement(skeleton, n, m,
                                                budget=budget or wb)
            mode = "exhaustive"
        elif samples * probe_cost <= wb:
            cx, counts, pts = verify_refinement(skeleton, n, m,
                                                sample=samples, seed=seed,
                                                budget=budget or wb)
            mode = f"sampled {samples}"
        else:
            skipped.append(n)
            continue
        if cx is not None:
            return _finish(failed("containings", f"n={n} m={m} {mode}", cx),
                           t0)
        wits.append({"n": n, "m": m, "mode": mode, "points": pts,
                     "cases": counts,
                     "partial": "parent column only" if m == n + 1 else None})
    scope = ("pointwise parent rule, n up to "
             f"{dep - 2}" + (f"; probe cost over budget: {skipped}"
                             if skipped else ""))
    if not wits:
        return _finish(inconclusive("containings", scope), t0)
    return _finish(passed("containings", scope, wits), t0)


def check_z_identity(skeleton, budget=None, chain_samples=200000, seed=0):
    t0 = time.perf_counter()
    m_set = set(_m_levels(skeleton))
    wits = []
    for n in range(1, skeleton.depth):
        eq, cont, table = zero_set_identity(skeleton, n, budget)
        if n in m_set and not eq:
            bad = [r for r in table if r["parent_zero"] != r["rhs"]][:3]
            return _finish(failed("z-identity", f"n={n} boundary equality",
                                  {"n": n, "classes": bad}), t0)
        if not cont:
            bad = [r for r in table if r["parent_zero"] and not r["rhs"]][:3]
            return _finish(failed("z-identity", f"n={n} containment",
                                  {"n": n, "classes": bad}), t0)
        wits.append({"n": n, "boundary": n in m_set, "equality": eq,
                     "containment": cont})
    chain_wits = []
    ms = sorted(m_set)
    for i, nj in enumerate(ms):
        for ns in ms[i + 1:]:
            if ns > skeleton.depth:
                continue
            cx, branches, checked = corollary_chain(
                skeleton, nj, ns, sample=None, seed=seed,
                exhaustive_cap=min(chain_samples, 200000), budget=budget)
            if cx is not None:
                return _finish(failed("z-identity",
                                      f"chain ({nj},{ns})", cx), t0)
            chain_wits.append({"span": (nj, ns), "atoms": checked,
                               "branches": branches})
    return _finish(passed(
        "z-identity",
        f"class algebra n=1..{skeleton.depth - 1}; "
        f"chains {[w['span'] for w in chain_wits]}",
        wits + chain_wits), t0)


def check_an_det(skeleton, budget=None, levels=None):
    t0 = time.perf_counter()
    top = levels if levels is not None else skeleton.depth
    for n in range(1, top + 1):
        sub = an_det_check(skeleton, n, budget=budget)
        if sub.status != "Pass":
            return _finish(sub, t0)
    return _finish(passed("an-det", f"n = 1..{top}, det equals |D_n|"), t0)


def check_uns_bound(skeleton, budget=None):
    t0 = time.perf_counter()
    T = skeleton.tower
    dep = skeleton.depth
    wb = budgets.window_budget(budget)
    wits = []
    skipped = []
    for n in _m_levels(skeleton):
        for m in range(n + 2, dep):
            if T.size(m) > wb or T.size(m) * T.size(n + 1) > (1 << 31):
                skipped.append((n, m))
                continue
            if T.kind == KIND_LINE:
                vals = window_values(skeleton, m, budget)
                target = _eta_level_targets(skeleton, n, budget)
                acc = np.ones(T.size(m), dtype=bool)
                lo_s = T.lo(n + 1)
                for i in range(T.size(n + 1)):
                    acc &= np.roll(vals, -(lo_s + i)) == target[i]
                mu = Fraction(int(acc.sum()), T.size(m))
            else:
                from .cells import orbit_member
                budgets.check_enum(T.size(m) * T.size(n + 1),
                                   f"uns-bound ({n},{m})", budget)
                hits = 0
                for d in T.domain(m, budget=budget):
                    ok = all(
                        skeleton.eval_periodized(m, T.add(d, s))
                        == skeleton.eval(T.reduce(s, n))
                        for s in T.domain(n + 1, budget=budget))
                    hits += ok
                mu = Fraction(hits, T.size(m))
            bound = Fraction(1, T.size(n + 1))
            for l in range(1, m - n):
                bound *= 1 - Fraction(T.size(n + l), T.size(n + l + 1))
            if mu < bound:
                return _finish(failed(
                    "uns-bound", f"(n,m)=({n},{m})",
                    {"n": n, "m": m, "mu": mu, "bound": bound}), t0)
            wits.append({"n": n, "m": m, "mu": mu, "bound": bound,
                         "strict": mu > bound})
    scope = (f"{len(wits)} pairs, n in boundary levels, n+2 <= m <= {dep - 1}"
             + (f"; over budget: {skipped}" if skipped else ""))
    if not wits:
        return _finish(inconclusive("uns-bound", scope), t0)
    return _finish(passed("uns-bound", scope, wits), t0)


def _plant_tail_sum(skeleton, n):
    """Exact sum of 1/|D_t| over planted steps t in (n, depth]."""
    s = Fraction(0)
    for t in range(n + 1, skeleton.depth + 1):
        if skeleton.steps[t - 1][0] == "plant":
            s += Fraction(1, skeleton.tower.size(t))
    return s


def _future_factor_bound(tower, at):
    """Certified upper bound on every ratio |D_j|/|D_{j+1}| for j >= at.

    Indices are at least 2, so 1/2 always works; a declared geometric tail
    sharpens it past the built depth."""
    b = Fraction(1, 2)
    tail = tower.tail
    if tail is not None and tail.kind == TAIL_GEOMETRIC and at >= tower.depth:
        decl = ratio_term(tower, tower.depth - 1)
        decl = decl * tail.ratio ** (at - tower.depth + 1)
        b = min(b, decl)
    return b


def zero_mass_closed_form(skeleton, n, m):
    """mu_m(Z_n) from the step log alone.

    Planted steps t in (n, m] each put |D_m|/|D_t| ones inside D_m, all in
    distinct level-n translate classes.  A planted step m+1 adds one more
    class: its representative sits in J(m), hence inside D_m.  Later steps
    plant outside D_m entirely.
    """
    s = Fraction(0)
    for t in range(n + 1, m + 1):
        if skeleton.steps[t - 1][0] == "plant":
            s += Fraction(1, skeleton.tower.size(t))
    if m + 1 <= skeleton.depth and skeleton.steps[m][0] == "plant":
        s += Fraction(1, skeleton.tower.size(m))
    return 1 - skeleton.tower.size(n) * s


def zero_mass_lower_bound(skeleton, n):
    """Certified lower bound on mu_m(Z_n) valid for every m > n, including
    levels past the built depth via the declared tail."""
    T = skeleton.tower
    dep = skeleton.depth
    if n <= dep:
        b = _future_factor_bound(T, dep)
        tail = Fraction(1, T.size(dep)) * b / (1 - b) if b < 1 else None
        if tail is None:
            return None
        return 1 - T.size(n) * (_plant_tail_sum(skeleton, n) + tail)
    b = _future_factor_bound(T, n)
    if b >= 1:
        return None
    return 1 - b / (1 - b)


def check_measure_one_trend(skeleton, budget=None):
    t0 = time.perf_counter()
    T = skeleton.tower
    dep = skeleton.depth
    levels = _m_levels(skeleton)
    # closed form vs direct classification at one affordable pair
    wb = budgets.window_budget(budget)
    probe = next(((n, min(n + 2, dep - 1)) for n in levels
                  if n + 1 <= dep - 1
                  and T.size(min(n + 2, dep - 1)) * j_size(T, n) <= wb
                  and T.kind == KIND_LINE), None)
    cross = None
    if probe is not None:
        n, m = probe
        direct = mu_zero_set(skeleton, n, m, budget or wb)
        closed = zero_mass_closed_form(skeleton, n, m)
        if direct != closed:
            return _finish(failed(
                "measure-1-trend", f"closed form at ({n},{m})",
                {"direct": direct, "closed": closed}), t0)
        cross = {"pair": (n, m), "mu": closed}
    exact = [{"n": n, "m": dep - 1,
              "mu": zero_mass_closed_form(skeleton, n, dep - 1)}
             for n in levels if n <= dep - 2]
    bounds = []
    for n in levels:
        lb = zero_mass_lower_bound(skeleton, n)
        if lb is not None:
            bounds.append({"n": n, "lower_bound": lb})
    wits = ([cross] if cross else []) + exact + bounds
    if len(bounds) < 2:
        return _finish(inconclusive(
            "measure-1-trend",
            f"fewer than two boundary levels with certified bounds "
            f"(levels {levels})", wits), t0)
    seq = [b["lower_bound"] for b in bounds]
    if all(seq[i] <= seq[i + 1] for i in range(len(seq) - 1)):
        return _finish(passed(
            "measure-1-trend",
            f"certified lower bounds at boundary levels "
            f"{[b['n'] for b in bounds]} are nondecreasing", wits), t0)
    return _finish(inconclusive(
        "measure-1-trend",
        "certified bounds are not monotone at this depth; the statement "
        "needs deeper construction to witness", wits), t0)


# -- registry --------------------------------------------------------------


REGISTRY_NAMES = (
    "decom", "j-recursion", "per-eq", "good-relation", "good-patches",
    "t1t2", "partitions-c", "linking", "good-ds", "u-in-y", "containings",
    "z-identity", "an-det", "uns-bound", "measure-1-trend",
)

ALIASES = {"j-sub": "per-eq"}

_REGISTRY = {
    "decom": check_decom,
    "j-recursion": check_j_recursion,
    "per-eq": check_per_eq,
    "good-relation": check_good_relation,
    "good-patches": check_good_patches,
    "t1t2": check_t1t2,
    "partitions-c": check_partitions_c,
    "linking": check_linking,
    "good-ds": check_good_ds,
    "u-in-y": check_u_in_y,
    "containings": check_containings,
    "z-identity": check_z_identity,
    "an-det": check_an_det,
    "uns-bound": check_uns_bound,
    "measure-1-trend": check_measure_one_trend,
}


def registry_self_test():
    """The runnable registry and the published name list must coincide."""
    missing = [n for n in REGISTRY_NAMES if n not in _REGISTRY]
    extra = [n for n in _REGISTRY if n not in REGISTRY_NAMES]
    bad_alias = [a for a, t in ALIASES.items() if t not in _REGISTRY]
    if missing or extra or bad_alias:
        return failed("registry", "name list vs registered callables",
                      {"missing": missing, "extra": extra,
                       "bad_alias": bad_alias})
    return passed("registry",
                  f"{len(REGISTRY_NAMES)} checks + aliases {sorted(ALIASES)}")


def run_check(skeleton, name, params=None):
    canonical = ALIASES.get(name, name)
    fn = _REGISTRY.get(canonical)
    if fn is None:
        raise UnknownCheck(
            f"{name!r}; known: {', '.join(REGISTRY_NAMES)} "
            f"and aliases {sorted(ALIASES)}")
    res = fn(skeleton, **(params or {}))
    res.name = name
    return res


def run_all(skeleton, budget=None, params=None):
    results = [registry_self_test()]
    overrides = params or {}
    for name in REGISTRY_NAMES:
        kw = dict(overrides.get(name, {}))
        if budget is not None:
            kw.setdefault("budget", budget)
        results.append(run_check(skeleton, name, kw))
    return SuiteReport(results)
