"""Exact Godement cohomology for monomial data via lattice slicing.

When every stalk algebra is a relation-free monomial localization, every
module stalk is free with monomial restriction entries, and the grading is by
variable weights, the whole complex of sections splits over a common
character lattice (the colimit of the stalk exponent lattices).  A fixed
internal degree selects a one-parameter family of lattice points; along that
line each factor of the complex is on or off according to rational-linear and
congruence conditions, so the line decomposes into finitely many regions and
residue classes on which the pattern - hence the slice cohomology - is
constant.  Slice dimensions are summed with exact counts; an unbounded
region whose pattern carries cohomology raises InfiniteDimension.

Nothing here is approximate: this is the finite decomposition that makes the
classical projective-space numbers come out of the finite space on the nose.
"""

from fractions import Fraction
from math import gcd, lcm

from .errors import InfiniteDimension
from .linalg import (field_rank, smith_normal_form, solve_integer,
                     integer_kernel_basis, solve_rational)


class ToricIneligible(Exception):
    """Input is outside the monomial fragment; caller should fall back."""


class _Factor:
    __slots__ = ("chain", "gen", "point", "v", "s", "cls")

    def __init__(self, chain, gen, point, v, s):
        self.chain = chain
        self.gen = gen
        self.point = point
        self.v = v
        self.s = s


def _monomial_entry(elem):
    """(coeff, exponent Z-vector) of a stalk element, or None if zero,
    raising ToricIneligible on non-monomials."""
    if elem.is_zero():
        return None
    mc = elem.monomial_content()
    if mc is None:
        raise ToricIneligible(f"non-monomial entry {elem}")
    return mc


def _check_algebra(A):
    if A.relations:
        raise ToricIneligible("stalk algebra has relations")
    if A.weights is None:
        raise ToricIneligible("stalk algebra is ungraded")
    for s in A.inverted:
        if len(s.terms) != 1:
            raise ToricIneligible(f"non-monomial inverted element {s}")


def _unconstrained(A):
    """Variable indices whose sign is freed by the inverted set."""
    out = set()
    for s in A.inverted:
        (e, _c), = s.terms.items()
        for i, k in enumerate(e):
            if k:
                out.add(i)
    return out


class ToricEngine:
    """Cohomology tables of one connected open piece of a sheaf."""

    def __init__(self, space, sheaf, pts):
        self.space = space
        self.sheaf = sheaf
        self.pts = [p for p in space.points if p in set(pts)]
        for p in self.pts:
            _check_algebra(space.stalks[p])
            M = sheaf.stalks[p]
            if M.relations:
                raise ToricIneligible("module stalk has relations")
            if M.shifts is None:
                raise ToricIneligible("module stalk is unshifted")
        self._build_lattice()
        self._build_positions()
        self._build_chains()

    # -- lattice ---------------------------------------------------------

    def _build_lattice(self):
        pts = self.pts
        offs, N = {}, 0
        for p in pts:
            offs[p] = N
            N += self.space.stalks[p].nvars
        rows = []
        edges = [(e, h) for e, h in self.space.edges.items()
                 if e[0] in set(pts) and e[1] in set(pts)]
        one = self.space.stalks[pts[0]].field.one() if pts else None
        for (x, y), h in edges:
            for i, im in enumerate(h.images):
                mc = _monomial_entry(im)
                if mc is None:
                    raise ToricIneligible("restriction kills a variable")
                c, vec = mc
                if c != one:
                    # a coefficient on a ring image would make slice entries
                    # depend on the lattice point; stay in the pure fragment
                    raise ToricIneligible("non-monic monomial ring image")
                row = [0] * N
                row[offs[x] + i] += 1
                for j, k in enumerate(vec):
                    row[offs[y] + j] -= k
                rows.append(row)
        if rows:
            D, S, T = smith_normal_form(rows)
            free = []
            for j in range(N):
                d = D[j][j] if j < min(len(rows), N) else 0
                if d == 0:
                    free.append(j)
                elif d > 1:
                    raise ToricIneligible("torsion in the character lattice")
            self.rank = len(free)
            # q(e_i) = selected coordinates of row i of T
            self.lam = {}
            for p in pts:
                n = self.space.stalks[p].nvars
                cols = []
                for i in range(n):
                    trow = T[offs[p] + i]
                    cols.append([trow[j] for j in free])
                # lam[p]: rank x n matrix, columns are images of variables
                self.lam[p] = [[cols[i][r] for i in range(n)]
                               for r in range(self.rank)]
        else:
            self.rank = sum(self.space.stalks[p].nvars for p in pts)
            self.lam = {}
            at = 0
            for p in pts:
                n = self.space.stalks[p].nvars
                self.lam[p] = [[1 if r == at + c else 0 for c in range(n)]
                               for r in range(self.rank)]
                at += n
        # injectivity of every lattice map
        for p in pts:
            n = self.space.stalks[p].nvars
            if n and integer_kernel_basis(self.lam[p], n):
                raise ToricIneligible(f"lattice map at {p} is not injective")
        # weight functional over Q on the common lattice
        eqs, rhs = [], []
        for p in pts:
            w = self.space.stalks[p].weights
            n = self.space.stalks[p].nvars
            for i in range(n):
                eqs.append([self.lam[p][r][i] for r in range(self.rank)])
                rhs.append(w[i])
        if eqs:
            wt = solve_rational(eqs, rhs)
            if wt is None:
                raise ToricIneligible("grading does not factor through the lattice")
            self.wt = wt
        else:
            self.wt = [Fraction(0)] * self.rank

    def _apply_lam(self, p, vec):
        return [sum(self.lam[p][r][i] * vec[i] for i in range(len(vec)))
                for r in range(self.rank)]

    # -- generator positions ----------------------------------------------

    def _build_positions(self):
        pos = {}
        edges = [(e, h) for e, h in self.space.edges.items()
                 if e[0] in set(self.pts) and e[1] in set(self.pts)]
        # adjacency on (point, gen) nodes; constraint pos[src] = lam(entry) + pos[dst]
        adj = {}
        for (x, y), _h in edges:
            mat = self.sheaf.matrices[(x, y)]
            for j, row in enumerate(mat):
                for k, entry in enumerate(row):
                    mc = _monomial_entry(entry)
                    if mc is None:
                        continue
                    delta = self._apply_lam(y, list(mc[1]))
                    adj.setdefault((x, j), []).append(((y, k), delta))
                    adj.setdefault((y, k), []).append(
                        ((x, j), [-d for d in delta]))
        nodes = [(p, j) for p in self.pts
                 for j in range(self.sheaf.stalks[p].ngens)]
        for node in nodes:
            if node in pos:
                continue
            pos[node] = [0] * self.rank
            stack = [node]
            while stack:
                cur = stack.pop()
                for nxt, delta in adj.get(cur, []):
                    want = [a - d for a, d in zip(pos[cur], delta)]
                    # pos[cur] = delta + pos[nxt]  =>  pos[nxt] = pos[cur]-delta
                    if nxt in pos:
                        if pos[nxt] != want:
                            raise ToricIneligible(
                                "incompatible generator positions")
                    else:
                        pos[nxt] = want
                        stack.append(nxt)
        self.pos = pos
        self.s_class = {}
        for (p, j), v in pos.items():
            shift = self.sheaf.stalks[p].shifts[j]
            wv = sum(w * c for w, c in zip(self.wt, v))
            self.s_class[(p, j)] = Fraction(shift) - wv

    # -- chains and faces -------------------------------------------------

    def _build_chains(self):
        inside = set(self.pts)
        all_chains = self.space.strict_chains()
        self.chains = {}
        for n, cs in all_chains.items():
            mine = [c for c in cs if all(q in inside for q in c)]
            if mine:
                self.chains[n] = mine
        self.factors = {}
        for n, cs in self.chains.items():
            fs = []
            for c in cs:
                last = c[-1]
                for j in range(self.sheaf.stalks[last].ngens):
                    fs.append(_Factor(c, j, last, self.pos[(last, j)],
                                      self.s_class[(last, j)]))
            self.factors[n] = fs

    # -- membership along a line ------------------------------------------

    def _line_condition(self, factor, gamma0, direction):
        """Membership data of factor along gamma(t) = gamma0 + t*direction.

        Returns one of:
          ("empty",), ("point", t, ok) with integer t,
          ("line", e0, e1, constrained, period) with e(t) = e0 + t*e1.
        """
        A = self.space.stalks[factor.point]
        n = A.nvars
        M = self.lam[factor.point]
        c0 = [Fraction(g - v) for g, v in zip(gamma0, factor.v)]
        c1 = [Fraction(d) for d in direction]
        # left null space conditions: u.(c0 + t c1) = 0
        null = _left_null(M, self.rank, n)
        t_fixed = None
        for u in null:
            a = sum(x * y for x, y in zip(u, c1))
            b = sum(x * y for x, y in zip(u, c0))
            if a == 0:
                if b != 0:
                    return ("empty",)
            else:
                t = -b / a
                if t_fixed is None:
                    t_fixed = t
                elif t_fixed != t:
                    return ("empty",)
        constrained = [i for i in range(n) if i not in _unconstrained(A)]
        if t_fixed is not None:
            if t_fixed.denominator != 1:
                return ("empty",)
            t = int(t_fixed)
            cc = [c0[i] + t * c1[i] for i in range(self.rank)]
            e = solve_rational(M, cc) if n else ([] if all(v == 0 for v in cc) else None)
            ok = e is not None and all(v.denominator == 1 for v in e) and \
                all(e[i] >= 0 for i in constrained)
            return ("point", t, ok)
        if n == 0:
            # the null-space pass above already dispatched every nonzero case
            return ("line", [], [], [], 1)
        e0 = solve_rational(M, c0)
        e1 = solve_rational(M, c1)
        if e0 is None or e1 is None:
            return ("empty",)
        period = 1
        for v in e1:
            period = lcm(period, v.denominator)
        return ("line", e0, e1, constrained, period)

    def _slice_dims(self, factors_on):
        """Cohomology dims of the pattern complex restricted to ON factors."""
        field = self.space.stalks[self.pts[0]].field
        on = set(factors_on)
        index = {}
        live = {}
        for n, fs in self.factors.items():
            mine = [f for f in fs if id(f) in on]
            index[n] = {id(f): i for i, f in enumerate(mine)}
            live[n] = mine
        ranks = {}
        for n in sorted(self.chains):
            if n + 1 not in self.chains:
                break
            tgt = index[n + 1]
            tgt_count = len(live[n + 1])
            rows = []
            for f in live[n]:
                row = [field.zero()] * tgt_count
                for g in self.factors[n + 1]:
                    if id(g) not in tgt:
                        continue
                    c = g.chain
                    for i in range(len(c)):
                        if c[:i] + c[i + 1:] != f.chain:
                            continue
                        if i < len(c) - 1:
                            if g.gen == f.gen and g.point == f.point:
                                row[tgt[id(g)]] = field.add(
                                    row[tgt[id(g)]], field.of_int((-1) ** i))
                        else:
                            entry = self.sheaf.matrix(
                                f.point, g.point)[f.gen][g.gen]
                            mc = _monomial_entry(entry)
                            if mc is None:
                                continue
                            coeff = field.mul(field.of_int((-1) ** i), mc[0])
                            row[tgt[id(g)]] = field.add(row[tgt[id(g)]], coeff)
                rows.append(row)
            ranks[n] = field_rank(field, rows) if rows and tgt_count else 0
        out = {}
        for n in self.chains:
            out[n] = len(live[n]) - ranks.get(n, 0) - ranks.get(n - 1, 0)
        return out

    # -- public -----------------------------------------------------------

    def degree_dims(self, d, min_index=0):
        """{i: dim H^i in internal degree d} for i >= min_index.

        Rows below min_index are computed when finite and silently dropped
        when an unbounded lattice tail makes them infinite; a row at or above
        min_index that is infinite raises InfiniteDimension.
        """
        total = {n: 0 for n in self.chains}
        infinite = set()
        classes = sorted({f.s for fs in self.factors.values() for f in fs})
        for s in classes:
            tau = Fraction(d) - s
            self._accumulate_class(s, tau, total, infinite)
        if any(n >= min_index for n in infinite):
            bad = min(n for n in infinite if n >= min_index)
            raise InfiniteDimension(
                f"H^{bad} is infinite-dimensional in degree {d}")
        return {n: v for n, v in total.items()
                if n >= min_index and n not in infinite}

    def _accumulate_class(self, s, tau, total, infinite):
        W = self.wt
        scale = 1
        for w in W:
            scale = lcm(scale, w.denominator)
        Wz = [int(w * scale) for w in W]
        tz = tau * scale
        if tz.denominator != 1:
            return
        tz = int(tz)
        members = [f for fs in self.factors.values() for f in fs if f.s == s]
        if not members:
            return
        if self.rank == 0:
            if tz == 0:
                self._add_pattern(s, [], total)
            return
        if all(w == 0 for w in Wz):
            if tz != 0:
                return
            kern = [[1 if i == j else 0 for i in range(self.rank)]
                    for j in range(self.rank)]
            gamma0 = [0] * self.rank
        else:
            gamma0 = solve_integer([Wz], [tz])
            if gamma0 is None:
                return
            kern = integer_kernel_basis([Wz], self.rank)
        if len(kern) == 0:
            self._add_pattern(s, gamma0, total)
            return
        if len(kern) > 1:
            raise InfiniteDimension(
                "degree slice has rank > 1; not supported")
        self._line_scan(s, gamma0, kern[0], total, infinite)

    def _add_pattern(self, s, gamma, total):
        on = []
        for fs in self.factors.values():
            for f in fs:
                if f.s == s and self._member(f, gamma):
                    on.append(id(f))
        if not on:
            return
        for n, v in self._slice_dims(on).items():
            if v:
                total[n] += v

    def _member(self, f, gamma):
        A = self.space.stalks[f.point]
        n = A.nvars
        c = [Fraction(g - v) for g, v in zip(gamma, f.v)]
        if n == 0:
            return all(v == 0 for v in c)
        e = solve_rational(self.lam[f.point], c)
        if e is None or any(v.denominator != 1 for v in e):
            return False
        un = _unconstrained(A)
        return all(e[i] >= 0 for i in range(n) if i not in un)

    def _line_scan(self, s, gamma0, direction, total, infinite):
        members = [f for fs in self.factors.values() for f in fs if f.s == s]
        conds = {id(f): self._line_condition(f, gamma0, direction)
                 for f in members}
        period = 1
        breaks = set()
        for cond in conds.values():
            if cond[0] == "point":
                breaks.add(Fraction(cond[1]))
            elif cond[0] == "line":
                e0, e1, constrained, p = cond[1], cond[2], cond[3], cond[4]
                period = lcm(period, p)
                for i in constrained:
                    if e1[i] != 0:
                        breaks.add(-e0[i] / e1[i])
        bs = sorted(breaks)
        if bs:
            lo = int(bs[0].__floor__()) - 1
            hi = int(bs[-1].__ceil__()) + 1
        else:
            lo, hi = 0, 0
        # finite middle: enumerate every integer t
        for t in range(lo, hi + 1):
            on = [id(f) for f in members if _cond_member(conds[id(f)], t)]
            if on:
                for n, v in self._slice_dims(on).items():
                    if v:
                        total[n] += v
        # unbounded tails: one sample per residue class
        for side in (-1, 1):
            base = lo - 1 if side < 0 else hi + 1
            for r in range(period):
                t = base + side * (r + period)  # safely beyond every breakpoint
                on = [id(f) for f in members if _cond_member(conds[id(f)], t)]
                if not on:
                    continue
                for n, v in self._slice_dims(on).items():
                    if v:
                        infinite.add(n)


def _cond_member(cond, t):
    if cond[0] == "empty":
        return False
    if cond[0] == "point":
        return t == cond[1] and cond[2]
    e0, e1, constrained, _p = cond[1], cond[2], cond[3], cond[4]
    vals = [a + t * b for a, b in zip(e0, e1)]
    if any(v.denominator != 1 for v in vals):
        return False
    return all(vals[i] >= 0 for i in constrained)


def _left_null(M, nrows, ncols):
    """Basis of {u in Q^nrows : u^T M = 0}."""
    from .fields import Field
    Q = Field.rationals()
    cols = [[Fraction(M[r][c]) for r in range(nrows)] for c in range(ncols)]
    from .linalg import field_kernel_basis
    return field_kernel_basis(Q, cols, nrows)
