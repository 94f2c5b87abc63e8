"""Groebner bases for submodules of free modules P^g over a polynomial ring.

Vectors are dicts {(position, exponents): scalar}.  The module order is
term-over-position with an optional dominant block of positions, which makes
it an elimination order for that block: that is all the syzygy machinery
needs (tag-component trick).
"""

from .poly import (Poly, GREVLEX, monomial_mul, monomial_div, monomial_divides,
                   monomial_lcm)


class ModuleOrder:
    """Positions < split dominate; inside a block: ring order, then position."""

    def __init__(self, ring_order=GREVLEX, split=0):
        self.ring_order = ring_order
        self.split = split

    def key(self, mono):
        pos, e = mono
        return (1 if pos < self.split else 0, self.ring_order.key(e), -pos)

    def max_term(self, terms):
        return max(terms, key=self.key)


def vec_from_polys(polys):
    """Tuple of Polys -> module vector."""
    out = {}
    for pos, f in enumerate(polys):
        for e, c in f.terms.items():
            out[(pos, e)] = c
    return out


def vec_to_polys(vec, ring, ncomp):
    polys = [dict() for _ in range(ncomp)]
    for (pos, e), c in vec.items():
        polys[pos][e] = c
    return tuple(Poly(ring, t) for t in polys)


def vec_add(F, a, b):
    out = dict(a)
    for m, c in b.items():
        s = F.add(out.get(m, F.zero()), c)
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def vec_scale(F, a, c):
    if not c:
        return {}
    return {m: F.mul(c, v) for m, v in a.items()}

def vec_neg(F, a):
    return {m: F.neg(c) for m, c in a.items()}

def vec_mul_monomial(F, a, exps, coeff):
    return {(p, monomial_mul(e, exps)): F.mul(c, coeff) for (p, e), c in a.items()}


def vec_normal_form(F, vec, basis, order):
    """Full reduction of a module vector by a list of vectors."""
    basis = [g for g in basis if g]
    if not basis:
        return dict(vec)
    leads = [(order.max_term(g), g) for g in basis]
    work = dict(vec)
    remainder = {}
    while work:
        m = order.max_term(work)
        pos, e = m
        c = work.pop(m)
        for (lp, le), g in leads:
            if lp == pos and monomial_divides(le, e):
                q = monomial_div(e, le)
                factor = F.div(c, g[(lp, le)])
                for (gp, ge), gc in g.items():
                    if (gp, ge) == (lp, le):
                        continue
                    mm = (gp, monomial_mul(ge, q))
                    s = F.sub(work.get(mm, F.zero()), F.mul(factor, gc))
                    if s:
                        work[mm] = s
                    else:
                        work.pop(mm, None)
                break
        else:
            remainder[m] = c
    return remainder


def module_groebner(F, gens, order):
    """Groebner basis of the submodule generated by `gens` (list of vectors)."""
    G = []
    for g in sorted((g for g in gens if g), key=lambda v: order.key(order.max_term(v))):
        r = vec_normal_form(F, g, G, order)
        if r:
            G.append(_monic(F, r, order))
    pairs = {(i, j) for i in range(len(G)) for j in range(i)
             if order.max_term(G[i])[0] == order.max_term(G[j])[0]}
    while pairs:
        i, j = min(pairs, key=lambda p: (order.ring_order.key(monomial_lcm(
            order.max_term(G[p[0]])[1], order.max_term(G[p[1]])[1])), p))
        pairs.discard((i, j))
        (pi, ei), (pj, ej) = order.max_term(G[i]), order.max_term(G[j])
        l = monomial_lcm(ei, ej)
        a = vec_mul_monomial(F, G[i], monomial_div(l, ei), F.inv(G[i][(pi, ei)]))
        b = vec_mul_monomial(F, G[j], monomial_div(l, ej), F.inv(G[j][(pj, ej)]))
        s = vec_add(F, a, vec_neg(F, b))
        r = vec_normal_form(F, s, G, order)
        if not r:
            continue
        r = _monic(F, r, order)
        t = len(G)
        G.append(r)
        rp = order.max_term(r)[0]
        for k in range(t):
            if order.max_term(G[k])[0] == rp:
                pairs.add((t, k))
    return _interreduce_module(F, G, order)


def _monic(F, v, order):
    c = v[order.max_term(v)]
    return vec_scale(F, v, F.inv(c))


def _interreduce_module(F, G, order):
    G = sorted((g for g in G if g), key=lambda v: order.key(order.max_term(v)))
    minimal = []
    for g in G:
        p, e = order.max_term(g)
        if not any(order.max_term(h)[0] == p and
                   monomial_divides(order.max_term(h)[1], e) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        rest = minimal[:i] + minimal[i + 1:]
        r = vec_normal_form(F, g, rest, order)
        if r:
            out.append(_monic(F, r, order))
    out.sort(key=lambda v: order.key(order.max_term(v)))
    return out


def syzygy_basis(F, vectors, ncomp, nvars, ring_order=GREVLEX):
    """Generators of the syzygy module of `vectors` in P^ncomp.

    Returns vectors over P^len(vectors): coefficients (a_i) with
    sum a_i * vectors[i] = 0.  Tag-component construction: compute a
    Groebner basis of {(v_i ; e_i)} in P^(ncomp+k) with the first block
    dominant; basis elements with zero first block give the syzygies.
    """
    k = len(vectors)
    one = F.one()
    zero_exp = (0,) * nvars
    tagged = []
    for i, v in enumerate(vectors):
        w = dict(v)
        w[(ncomp + i, zero_exp)] = one
        tagged.append(w)
    order = ModuleOrder(ring_order, split=ncomp)
    G = module_groebner(F, tagged, order)
    syz = []
    for g in G:
        if all(pos >= ncomp for pos, _ in g):
            syz.append({(pos - ncomp, e): c for (pos, e), c in g.items()})
    return syz
