"""Definition-level reference used to freeze expected values.

Everything in this file is written straight from the defining formulas with
plain loops, dicts and set arithmetic.  No bit packing, no recursions beyond
the ones being checked, no shared code with the library: the point is that
this module is obviously correct and slow, and src/toeplitzlab must agree
with it wherever both can compute.

Run as a script to print the reference tables:

    python tests/bruteforce.py
"""

from fractions import Fraction


class NaiveLine:
    """Z with subgroups N_n * Z, N_n = product of the first n indices."""

    def __init__(self, indices, style):
        if style not in ("nonneg", "centered"):
            raise ValueError(style)
        self.idx = list(indices)
        self.style = style
        self.N = [1]
        for q in indices:
            if q < 2:
                raise ValueError("index < 2")
            self.N.append(self.N[-1] * q)
        if style == "centered" and any(m % 2 == 0 for m in self.N):
            raise ValueError("centered needs odd moduli")

    @property
    def depth(self):
        return len(self.idx)

    zero = 0

    def red(self, g, n):
        m = self.N[n]
        if self.style == "nonneg":
            return g % m
        half = (m - 1) // 2
        return (g + half) % m - half

    def domain(self, n):
        m = self.N[n]
        if self.style == "nonneg":
            return list(range(m))
        half = (m - 1) // 2
        return list(range(-half, half + 1))

    def in_domain(self, g, n):
        m = self.N[n]
        if self.style == "nonneg":
            return 0 <= g < m
        half = (m - 1) // 2
        return -half <= g <= half

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b


class NaiveLattice:
    """Z^d with per-axis moduli; elements are tuples."""

    def __init__(self, per_axis_indices, style):
        self.axes = [NaiveLine(ix, style) for ix in per_axis_indices]
        self.style = style
        depths = {ax.depth for ax in self.axes}
        if len(depths) != 1:
            raise ValueError("ragged axis depths")
        self.zero = tuple(0 for _ in self.axes)

    @property
    def depth(self):
        return self.axes[0].depth

    def red(self, g, n):
        return tuple(ax.red(c, n) for ax, c in zip(self.axes, g))

    def domain(self, n):
        out = [()]
        for ax in self.axes:
            out = [p + (c,) for p in out for c in ax.domain(n)]
        return out

    def in_domain(self, g, n):
        return all(ax.in_domain(c, n) for ax, c in zip(self.axes, g))

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))


def j_sets(T, top):
    """J(0..top) from the definition: J(n) = D_n minus all J(i)Gamma_{i+1}."""
    J = [{T.zero}]
    for n in range(1, top + 1):
        keep = set()
        for d in T.domain(n):
            if all(T.red(d, i + 1) not in J[i] for i in range(n)):
                keep.add(d)
        J.append(keep)
    return J


def j_sets_subtraction(T, top):
    """Same sets, membership decided by scanning differences (line only)."""
    J = [{0}]
    for n in range(1, top + 1):
        keep = set()
        for d in T.domain(n):
            covered = any(
                (d - j) % T.N[i + 1] == 0 for i in range(n) for j in J[i]
            )
            if not covered:
                keep.add(d)
        J.append(keep)
    return J


def j_recursion_level(T, J, n):
    """Union of gamma*J(n) over gamma in (Gamma_n cap D_{n+1}) minus identity."""
    gammas = [v for v in T.domain(n + 1) if T.red(v, n) == T.zero and v != T.zero]
    return {T.add(g, j) for g in gammas for j in J[n]}


class NaiveBuild:
    """The step machine, run literally.

    Steps 1..depth.  Block boundaries mbar[k+1] = m_k = 1 + k + sum m(i);
    mbar[0] = 0 stands for m_{-1}.  A step t strictly inside a block plants
    a single 1-coset chosen from J(t-1); the step t = m_k writes zeros on
    all of J(t-1)Gamma_t.
    """

    def __init__(self, T, depth):
        if depth > T.depth:
            raise ValueError("depth beyond tower")
        self.T = T
        self.depth = depth
        # level() never reports past depth-1, and step t plants from
        # J(t-1), so J(depth) itself is never needed (it can be huge).
        self.J = j_sets(T, depth - 1)
        self.msz = [len(s) for s in self.J]
        self.mbar = [0]
        k = 0
        while self.mbar[-1] < depth:
            if k >= len(self.msz):
                raise ValueError("tower too shallow for block table")
            self.mbar.append(1 + k + sum(self.msz[: k + 1]))
            k += 1
        self.kind = {}
        self.records = []
        for t in range(1, depth + 1):
            k = next(i for i in range(len(self.mbar) - 1)
                     if self.mbar[i] < t <= self.mbar[i + 1])
            if t == self.mbar[k + 1]:
                self.kind[t] = ("zero", None)
                continue
            slot = t - self.mbar[k]
            g_slot = sorted(self.J[k])[slot - 1]
            target = T.red(g_slot, k)
            cands = [j for j in sorted(self.J[t - 1]) if T.red(j, k) == target]
            if not cands:
                raise ValueError("empty slot at step %d" % t)
            h = cands[0]
            self.kind[t] = ("plant", h)
            if k >= 1:
                self.records.append((t, k, slot, g_slot, h))

    def level(self, g):
        for i in range(self.depth):
            if self.T.red(g, i + 1) in self.J[i]:
                return i
        return None

    def eval(self, g):
        i = self.level(g)
        if i is None:
            return None
        what, h = self.kind[i + 1]
        if what == "zero":
            return 0
        return 1 if self.T.red(g, i + 1) == h else 0

    def window(self, n):
        return [self.eval(d) for d in self.T.domain(n)]

    def eta_n(self, n, g):
        return self.eval(self.T.red(g, n))

    # ---- derived quantities, each from its defining formula ----

    def per_level(self, n, a):
        out = []
        for v in self.T.domain(n):
            i = self.level(v)
            if i is not None and i < n and self.eval(v) == a:
                out.append(v)
        return out

    def a_counts(self, n):
        return (len(self.per_level(n, 0)), len(self.per_level(n, 1)))

    def d_exact(self, n):
        a0, a1 = self.a_counts(n)
        return Fraction(a0 + a1, self.T.N[n])

    def good_set(self, n, m):
        """S_{m,n}: Gamma_{n+1} cap D_m minus D_{n+1}G_{n+2}..D_{m-1}G_m."""
        out = []
        for g in self.T.domain(m):
            if self.T.red(g, n + 1) != self.T.zero:
                continue
            if any(self.T.in_domain(self.T.red(g, l + 1), l)
                   for l in range(n + 1, m)):
                continue
            out.append(g)
        return out

    def good_bound(self, n, m):
        b = Fraction(self.T.N[m], self.T.N[n + 1])
        for l in range(1, m - n):
            b *= 1 - Fraction(self.T.N[n + l], self.T.N[n + l + 1])
        return b

    def in_un(self, v, n):
        """sigma^{v^-1} eta in U_n, by probing eta at v + D_{n+1}."""
        for s in self.T.domain(n + 1):
            got = self.eval(self.T.add(v, s))
            want = self.eta_n(n, s)
            if got is None or want is None:
                return None
            if got != want:
                return False
        return True

    def in_cn0(self, v, n):
        if self.T.red(v, n) != self.T.zero:
            return False
        for g in self.J[n]:
            got = self.eval(self.T.add(v, g))
            if got is None:
                return None
            if got != 0:
                return False
        return True

    def in_yn(self, v, n):
        gammas = [w for w in self.T.domain(n + 1) if self.T.red(w, n) == self.T.zero]
        for gamma in gammas:
            r = self.in_cn0(self.T.add(v, gamma), n)
            if r is not True:
                return r
        return True

    def mu_un(self, n, m):
        """mu_m(U_n) by counting shifted windows of the periodization."""
        win = {d: self.eval(d) for d in self.T.domain(m)}
        target = [self.eta_n(n, s) for s in self.T.domain(n + 1)]
        assert all(t is not None for t in target)
        hits = 0
        for d in self.T.domain(m):
            ok = True
            for s, want in zip(self.T.domain(n + 1), target):
                got = win[self.T.red(self.T.add(d, s), m)]
                assert got is not None
                if got != want:
                    ok = False
                    break
            hits += ok
        return Fraction(hits, self.T.N[m])

    def atom_tag(self, d, n, m):
        """Level-n cell of sigma^{d^-1} eta_m: (rep in D_n, None or the 1-slot)."""
        v = self.T.red(d, n)
        gamma = self.T.sub(d, v)
        ones = []
        for g in sorted(self.J[n]):
            val = self.eval(self.T.red(self.T.add(gamma, g), m))
            assert val is not None
            if val == 1:
                ones.append(g)
        assert len(ones) <= 1, "partitions-c violated"
        return (v, ones[0] if ones else None)

    def mu_zn(self, n, m):
        hits = sum(1 for d in self.T.domain(m)
                   if self.atom_tag(d, n, m)[1] is None)
        return Fraction(hits, self.T.N[m])

    def linking_ok(self, k):
        mk = self.mbar[k + 1]
        if mk - 1 > self.depth or mk > self.T.depth:
            return None
        h = self.kind[mk - 1][1]
        assert self.kind[mk - 1][0] == "plant"
        vs = [v for v in self.T.domain(mk - 1)
              if self.T.red(v, mk - 2) == self.T.zero and v != self.T.zero]
        return all(self.T.in_domain(self.T.sub(h, v), mk) for v in vs)

    def good_ds_witnesses(self, nk):
        """For each w in D_{nk-1} minus identity: first g_w per Lemma terms."""
        per1 = set(self.per_level(nk - 1, 1))
        out = {}
        for w in self.T.domain(nk - 1):
            if w == self.T.zero:
                continue
            found = None
            for e in self.T.domain(nk + 1):
                g = self.T.sub(e, w)
                if self.T.red(g, nk - 1) not in per1:
                    continue
                lv = self.level(e)
                in_per1_up = lv is not None and lv < nk + 1 and self.eval(e) == 1
                if not in_per1_up:
                    found = g
                    break
            out[w] = found
        return out


def frac(x):
    return "%s (~%.6f)" % (x, float(x))


def dump_threeadic():
    T = NaiveLine([3] * 10, "nonneg")
    print("== threeadic nonneg ==")
    print("red(10,1) =", T.red(10, 1), " red(-1,2) =", T.red(-1, 2))
    J = j_sets(T, 6)
    J2 = j_sets_subtraction(T, 6)
    assert [sorted(a) for a in J] == [sorted(a) for a in J2]
    for n in range(5):
        print("J(%d) =" % n, sorted(J[n]))
    for n in range(1, 6):
        assert j_recursion_level(T, J, n) == J[n + 1]
    print("j sizes:", [len(s) for s in J])

    B = NaiveBuild(T, 10)
    print("mbar (m_{-1}, m_0, m_1, ...):", B.mbar)
    print("records (step, k, slot, g_slot, h):", B.records[:6])
    print("window D_2:", B.window(2))
    print("window D_3:", B.window(3))
    print("eval 0,4,5,7,13,14:", [B.eval(g) for g in (0, 4, 5, 7, 13, 14)])
    print("level 6,19,14:", [B.level(g) for g in (6, 19, 14)])
    for n in (1, 2, 3):
        print("per(%d,1) = %s ; per(%d,0) = %s"
              % (n, B.per_level(n, 1), n, B.per_level(n, 0)))
    print("a_counts 1..5:", [B.a_counts(n) for n in range(1, 6)])
    print("d 1..5:", [str(B.d_exact(n)) for n in range(1, 6)])
    for (n, m) in ((1, 3), (1, 4), (1, 9), (4, 9)):
        S = B.good_set(n, m)
        print("S_{%d,%d} size %d bound %s first %s"
              % (m, n, len(S), B.good_bound(n, m), S[:4]))
    print("linking blocks 0..2:", [B.linking_ok(k) for k in (0, 1, 2)])
    u1 = [v for v in T.domain(3) if B.in_un(v, 1)]
    print("U_1 reps in D_3:", u1, "all in Y_1:", all(B.in_yn(v, 1) for v in u1))
    u1d4 = [v for v in T.domain(4) if B.in_un(v, 1)]
    print("U_1 reps in D_4:", u1d4)
    print("good patches (1,4):", [(g, B.in_un(g, 1)) for g in B.good_set(1, 4)])
    print("mu_4(U_1) =", frac(B.mu_un(1, 4)), " bound",
          frac(B.good_bound(1, 4) / T.N[4]))
    print("mu_9(U_1) =", frac(B.mu_un(1, 9)))
    print("mu_9(U_4) =", frac(B.mu_un(4, 9)))
    print("mu_4(Z_1) =", frac(B.mu_zn(1, 4)))
    print("mu_9(Z_1) =", frac(B.mu_zn(1, 9)))
    print("mu_9(Z_4) =", frac(B.mu_zn(4, 9)))
    wit = B.good_ds_witnesses(4)
    misses = [w for w, g in wit.items() if g is None]
    print("good-ds at n_k=4: %d w's, missing witnesses: %s, sample %s"
          % (len(wit), misses, sorted(wit.items())[:3]))


def dump_threeadic_centered():
    T = NaiveLine([3] * 6, "centered")
    print("== threeadic centered ==")
    print("red(5,1) =", T.red(5, 1))
    J = j_sets(T, 4)
    for n in range(4):
        print("J(%d) =" % n, sorted(J[n]))
    B = NaiveBuild(T, 5)
    print("records:", B.records)
    print("linking blocks 0,1:", [B.linking_ok(k) for k in (0, 1)])
    print("window D_2:", B.window(2))


def dump_irregular():
    T = NaiveLine([15, 31, 63, 127, 255], "centered")
    print("== irregular-demo centered ==")
    print("N:", T.N)
    J = j_sets(T, 3)
    print("j sizes 0..3:", [len(s) for s in J])
    print("J(1) =", sorted(J[1]))
    B = NaiveBuild(T, 5)
    print("mbar:", B.mbar)
    print("records:", B.records)
    print("msz:", B.msz[:4])
    print("eval 0, -232, h12:", B.eval(0), B.eval(-232),
          B.eval(B.records[1][4]))
    print("a_counts 1..3:", [B.a_counts(n) for n in range(1, 4)])
    print("d 1..3:", [str(B.d_exact(n)) for n in range(1, 4)])
    print("linking block 0:", B.linking_ok(0))
    S = B.good_set(1, 3)
    print("S_{3,1} size %d bound %s" % (len(S), B.good_bound(1, 3)))


def dump_lattice():
    T = NaiveLattice([[3, 3, 3], [3, 3, 3]], "nonneg")
    print("== lattice 2d ==")
    J = j_sets(T, 2)
    print("j sizes:", [len(s) for s in J])
    print("J(1) =", sorted(J[1]))
    B = NaiveBuild(T, 3)
    print("mbar:", B.mbar)
    print("records:", B.records)
    print("eval (0,0) (1,1):", B.eval((0, 0)), B.eval((1, 1)))
    print("per(1,1):", B.per_level(1, 1))
    print("a_counts 1,2:", [B.a_counts(n) for n in (1, 2)])


if __name__ == "__main__":
    dump_threeadic()
    print()
    dump_threeadic_centered()
    print()
    dump_irregular()
    print()
    dump_lattice()
