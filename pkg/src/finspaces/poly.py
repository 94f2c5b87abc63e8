"""Multivariate polynomials over an exact field, monomial orders, Buchberger.

Monomials are exponent tuples; a polynomial is a dict {exponents: scalar} with
no zero coefficients stored.  Everything here is deterministic: for a fixed
generator list and order, the reduced Groebner basis that comes out is unique
and the algorithms introduce no randomness.
"""

from .fields import Field


# ----------------------------------------------------------------------
# monomial orders
# ----------------------------------------------------------------------

class MonomialOrder:
    """Total order on exponent tuples, exposed as a sort key (bigger key =
    bigger monomial).  `tag` identifies the order for caching."""

    tag = ()

    def key(self, exps):
        raise NotImplementedError

    def max_term(self, terms):
        return max(terms, key=self.key)


class Grevlex(MonomialOrder):
    name = "grevlex"
    tag = ("grevlex",)

    def key(self, exps):
        return (sum(exps), tuple(-e for e in reversed(exps)))


class Lex(MonomialOrder):
    name = "lex"
    tag = ("lex",)

    def key(self, exps):
        return tuple(exps)


class Block(MonomialOrder):
    """Elimination order: the first `split` variables dominate.

    A Groebner basis w.r.t. this order intersected with the second block of
    variables is a basis of the elimination ideal.
    """

    name = "block"

    def __init__(self, split, first=None, second=None):
        self.split = split
        self.first = first or Grevlex()
        self.second = second or Grevlex()
        self.tag = ("block", split, self.first.tag, self.second.tag)

    def key(self, exps):
        a, b = exps[:self.split], exps[self.split:]
        return (self.first.key(a), self.second.key(b))


GREVLEX = Grevlex()
LEX = Lex()


def order_by_name(name, nvars=0):
    if name == "grevlex":
        return GREVLEX
    if name == "lex":
        return LEX
    raise ValueError(f"unknown monomial order {name!r}")


# ----------------------------------------------------------------------
# polynomial ring
# ----------------------------------------------------------------------

def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))

def monomial_divides(a, b):
    return all(x <= y for x, y in zip(a, b))

def monomial_div(a, b):
    return tuple(x - y for x, y in zip(a, b))

def monomial_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    __slots__ = ("field", "names", "nvars", "_index")

    def __init__(self, field, names):
        self.field = field
        self.names = tuple(names)
        self.nvars = len(self.names)
        if len(set(self.names)) != self.nvars:
            raise ValueError(f"duplicate variable names in {self.names}")
        self._index = {n: i for i, n in enumerate(self.names)}

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field == other.field
                and self.names == other.names)

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"{self.field}[{','.join(self.names)}]"

    def index(self, name):
        return self._index[name]

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(self.field.one())

    def const(self, c):
        if not c:
            return self.zero()
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name_or_index, power=1):
        i = name_or_index if isinstance(name_or_index, int) else self._index[name_or_index]
        e = [0] * self.nvars
        e[i] = power
        return Poly(self, {tuple(e): self.field.one()})

    def monomial(self, exps, coeff=None):
        c = self.field.one() if coeff is None else coeff
        if not c:
            return self.zero()
        return Poly(self, {tuple(exps): c})

    def from_terms(self, terms):
        clean = {tuple(e): c for e, c in terms.items() if c}
        return Poly(self, clean)


class Poly:
    __slots__ = ("ring", "terms", "_leads")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms  # dict, never mutated after construction
        self._leads = None  # per-order lead cache

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        zero = (0,) * self.ring.nvars
        return all(e == zero for e in self.terms)

    def constant_value(self):
        zero = (0,) * self.ring.nvars
        return self.terms.get(zero, self.ring.field.zero())

    def is_monomial(self):
        """Single term (scalar times a power product)."""
        return len(self.terms) == 1

    def variables_used(self):
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(i)
        return used

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def weighted_degree(self, weights):
        """Degree under integer variable weights; None if inhomogeneous."""
        degs = {sum(w * x for w, x in zip(weights, e)) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    # arithmetic ------------------------------------------------------

    def __add__(self, other):
        F = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(out.get(e, F.zero()), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.ring, out)

    def __neg__(self):
        F = self.ring.field
        return Poly(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.ring.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = monomial_mul(e1, e2)
                s = F.add(out.get(e, F.zero()), F.mul(c1, c2))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.ring, out)

    def scale(self, c):
        F = self.ring.field
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {e: F.mul(c, v) for e, v in self.terms.items()})

    def mul_monomial(self, exps, coeff):
        F = self.ring.field
        return Poly(self.ring, {monomial_mul(e, exps): F.mul(c, coeff)
                                for e, c in self.terms.items()})

    def __pow__(self, n):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # leading data ----------------------------------------------------

    def lead(self, order):
        if self._leads is None:
            self._leads = {}
        got = self._leads.get(order.tag)
        if got is None:
            e = order.max_term(self.terms)
            got = (e, self.terms[e])
            self._leads[order.tag] = got
        return got

    def monic(self, order):
        if not self.terms:
            return self
        _, c = self.lead(order)
        return self.scale(self.ring.field.inv(c))

    # display ---------------------------------------------------------

    def sorted_terms(self, order=GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __repr__(self):
        return poly_str(self)


def poly_str(f):
    if f.is_zero():
        return "0"
    F = f.ring.field
    parts = []
    for e, c in f.sorted_terms():
        factors = []
        for name, exp in zip(f.ring.names, e):
            if exp == 1:
                factors.append(name)
            elif exp:
                factors.append(f"{name}^{exp}")
        mono = "*".join(factors)
        cs = F.scalar_str(c)
        if mono:
            if cs == "1":
                term = mono
            elif cs == "-1":
                term = "-" + mono
            else:
                term = f"{cs}*{mono}"
        else:
            term = cs
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        out += " - " + term[1:] if term.startswith("-") else " + " + term
    return out


# ----------------------------------------------------------------------
# division and Buchberger
# ----------------------------------------------------------------------

def normal_form(f, basis, order):
    """Remainder of f on full division by `basis` (every term reduced)."""
    F = f.ring.field
    basis = [g for g in basis if not g.is_zero()]
    if not basis:
        return f
    leads = [(g.lead(order)[0], g.lead(order)[1], g) for g in basis]
    work = dict(f.terms)
    remainder = {}
    while work:
        e = order.max_term(work)
        c = work.pop(e)
        for le, lc, g in leads:
            if monomial_divides(le, e):
                q = monomial_div(e, le)
                factor = F.div(c, lc)
                for ge, gc in g.terms.items():
                    if ge == le:
                        continue  # cancels the popped term
                    ee = monomial_mul(ge, q)
                    s = F.sub(work.get(ee, F.zero()), F.mul(factor, gc))
                    if s:
                        work[ee] = s
                    else:
                        work.pop(ee, None)
                break
        else:
            remainder[e] = c
    return Poly(f.ring, remainder)


def s_poly(f, g, order):
    F = f.ring.field
    (ef, cf), (eg, cg) = f.lead(order), g.lead(order)
    l = monomial_lcm(ef, eg)
    a = f.mul_monomial(monomial_div(l, ef), F.inv(cf))
    b = g.mul_monomial(monomial_div(l, eg), F.inv(cg))
    return a - b


def groebner_basis(gens, order=GREVLEX):
    """Reduced Groebner basis of the ideal generated by `gens`.

    Deterministic: input list order only affects intermediate work, the
    reduced basis is the canonical one for (ideal, order).
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    G = []
    for g in sorted(gens, key=lambda h: order.key(h.lead(order)[0])):
        r = normal_form(g, G, order)
        if not r.is_zero():
            G.append(r.monic(order))
    if any(g.is_constant() and not g.is_zero() for g in G):
        return [ring.one()]

    leads = [g.lead(order)[0] for g in G]

    def pair_key(i, j):
        return (order.key(monomial_lcm(leads[i], leads[j])), i, j)

    pairs = {(i, j): pair_key(i, j) for i in range(len(G)) for j in range(i)}
    while pairs:
        # normal selection: smallest lcm first, deterministic tiebreak
        (i, j) = min(pairs, key=pairs.get)
        del pairs[(i, j)]
        ei, ej = leads[i], leads[j]
        l = monomial_lcm(ei, ej)
        if l == monomial_mul(ei, ej):  # coprime leads: S-poly reduces to 0
            continue
        # chain criterion: a third lead dividing the lcm whose pairs with
        # both i and j are already dispatched kills this pair
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            if monomial_divides(leads[k], l):
                a = (max(i, k), min(i, k))
                b = (max(j, k), min(j, k))
                if a not in pairs and b not in pairs:
                    skip = True
                    break
        if skip:
            continue
        r = normal_form(s_poly(G[i], G[j], order), G, order)
        if r.is_zero():
            continue
        r = r.monic(order)
        if r.is_constant():
            return [ring.one()]
        t = len(G)
        G.append(r)
        leads.append(r.lead(order)[0])
        for k in range(t):
            pairs[(t, k)] = pair_key(t, k)

    return _interreduce(G, order)


def _interreduce(G, order):
    # minimal leads first (a dividing lead sorts before its multiple)
    G = sorted((g.monic(order) for g in G if not g.is_zero()),
               key=lambda g: order.key(g.lead(order)[0]))
    minimal = []
    for g in G:
        e = g.lead(order)[0]
        if not any(monomial_divides(h.lead(order)[0], e) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        rest = minimal[:i] + minimal[i + 1:]
        r = normal_form(g, rest, order)
        if not r.is_zero():
            out.append(r.monic(order))
    out.sort(key=lambda g: order.key(g.lead(order)[0]))
    return out


def reduce_mod(f, G, order=GREVLEX):
    return normal_form(f, G, order)


def ideal_contains(f, G, order=GREVLEX):
    """Membership test against a Groebner basis G."""
    return normal_form(f, G, order).is_zero()


def is_unit_ideal(G):
    return len(G) == 1 and G[0].is_constant() and not G[0].is_zero()


# ----------------------------------------------------------------------
# ring maps between polynomial rings
# ----------------------------------------------------------------------

def map_poly(f, target_ring, images):
    """Substitute images[i] (Poly in target_ring) for variable i of f."""
    out = target_ring.zero()
    for e, c in f.terms.items():
        term = target_ring.const(c)
        for i, exp in enumerate(e):
            if exp:
                term = term * (images[i] ** exp)
        out = out + term
    return out


def embed_poly(f, target_ring, position):
    """Reinterpret f in a larger ring whose variables [position:position+n]
    are f's variables."""
    n = f.ring.nvars
    out = {}
    for e, c in f.terms.items():
        big = [0] * target_ring.nvars
        big[position:position + n] = e
        out[tuple(big)] = c
    return Poly(target_ring, out)


def divide_exact(f, g, order=GREVLEX):
    """Quotient f/g if g divides f exactly, else None."""
    if g.is_zero():
        return None if not f.is_zero() else f
    F = f.ring.field
    le, lc = g.lead(order)
    work = dict(f.terms)
    quot = {}
    while work:
        e = order.max_term(work)
        c = work.pop(e)
        if not monomial_divides(le, e):
            return None
        q = monomial_div(e, le)
        factor = F.div(c, lc)
        quot[q] = factor
        for ge, gc in g.terms.items():
            if ge == le:
                continue
            ee = monomial_mul(ge, q)
            s = F.sub(work.get(ee, F.zero()), F.mul(factor, gc))
            if s:
                work[ee] = s
            else:
                work.pop(ee, None)
    return Poly(f.ring, quot)
