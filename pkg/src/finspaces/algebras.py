"""Finitely presented localized algebras over Q or F_p, and their maps.

A LocAlgebra is k[x_1..x_n]/I with a finite set S of inverted polynomials.
All computation happens in the saturated presentation ring
k[x_1..x_n, @0..@m] modulo I + (s_i * @i - 1): localization reduces to
polynomial Groebner arithmetic.  Elements are kept as presentation-ring
polynomials; the fraction view p/s is reconstructed for printing.

Besides arithmetic this module carries the decidable flatness primitives:
radical_contains_one, cover_is_faithfully_flat, localization certification
and the combined faithfully-flat decision used by every space criterion.
"""

from .errors import NotLocalizationPresented
from .fields import Field
from .poly import (Poly, PolyRing, GREVLEX, Block, Grevlex, groebner_basis,
                   normal_form, is_unit_ideal, map_poly, embed_poly,
                   divide_exact)

_TPREFIX = "@"


def _tname(i):
    return f"{_TPREFIX}{i}"


class LocAlgebra:
    """k[names]/(relations) with `inverted` made invertible; optional grading
    by integer weights per variable."""

    def __init__(self, field, names, relations=(), inverted=(), weights=None):
        self.field = field
        self.names = tuple(names)
        for n in self.names:
            if _TPREFIX in n:
                raise ValueError(f"variable name {n!r} may not contain {_TPREFIX!r}")
        self.base_ring = PolyRing(field, self.names)
        self.relations = tuple(self._coerce_base(r) for r in relations)
        self.inverted = tuple(self._coerce_base(s) for s in inverted)
        if any(s.is_zero() for s in self.inverted):
            raise ValueError("cannot invert zero")
        self.weights = tuple(weights) if weights is not None else None
        tnames = tuple(_tname(i) for i in range(len(self.inverted)))
        self.pres_ring = PolyRing(field, self.names + tnames)
        self._pres_weights = None
        if self.weights is not None:
            wt = list(self.weights)
            for s in self.inverted:
                d = s.weighted_degree(self.weights)
                if d is None:
                    raise ValueError(f"inverted element {s} is not homogeneous")
                wt.append(-d)
            for r in self.relations:
                if not r.is_zero() and r.weighted_degree(self.weights) is None:
                    raise ValueError(f"relation {r} is not homogeneous")
            self._pres_weights = tuple(wt)
        self._gb = None
        self._unit_cache = {}

    # -- construction helpers -----------------------------------------

    def _coerce_base(self, f):
        if isinstance(f, Poly):
            if f.ring == self.base_ring:
                return f
            if f.ring.names == self.names and f.ring.field == self.field:
                return Poly(self.base_ring, dict(f.terms))
            raise ValueError(f"{f} is not in {self.base_ring}")
        raise TypeError(f"expected Poly, got {type(f)}")

    @property
    def nvars(self):
        return len(self.names)

    @property
    def ninv(self):
        return len(self.inverted)

    def ideal_gens(self):
        """Generators of the presentation ideal in pres_ring."""
        gens = [embed_poly(r, self.pres_ring, 0) for r in self.relations]
        one = self.pres_ring.one()
        for i, s in enumerate(self.inverted):
            t = self.pres_ring.var(self.nvars + i)
            gens.append(embed_poly(s, self.pres_ring, 0) * t - one)
        return gens

    def gb(self):
        if self._gb is None:
            self._gb = groebner_basis(self.ideal_gens(), GREVLEX)
        return self._gb

    def is_zero_ring(self):
        return is_unit_ideal(self.gb())

    def nf(self, pres_poly):
        return normal_form(pres_poly, self.gb(), GREVLEX)

    def pres_weights(self):
        return self._pres_weights

    # -- elements -------------------------------------------------------

    def zero(self):
        return AlgElem(self, self.pres_ring.zero())

    def one(self):
        return AlgElem(self, self.pres_ring.one())

    def const(self, c):
        return AlgElem(self, self.pres_ring.const(self.field.of_int(c) if isinstance(c, int) else c))

    def var(self, name):
        return AlgElem(self, self.pres_ring.var(name))

    def inv_gen(self, i):
        """The inverse of inverted[i]."""
        return AlgElem(self, self.pres_ring.var(self.nvars + i))

    def element(self, pres_poly):
        if pres_poly.ring != self.pres_ring:
            if pres_poly.ring == self.base_ring or (
                    pres_poly.ring.field == self.field
                    and pres_poly.ring.names == self.names):
                pres_poly = embed_poly(pres_poly, self.pres_ring, 0)
            else:
                raise ValueError(f"{pres_poly} not in {self.pres_ring}")
        return AlgElem(self, pres_poly)

    def fraction(self, num, den=None):
        """Element num/den; den must factor over the inverted set."""
        e = self.element(num)
        if den is not None and not den.is_constant():
            exps, c = self._match_denominator(self._coerce_base(den))
            t = self.pres_ring.const(self.field.inv(c))
            for i, k in enumerate(exps):
                if k:
                    t = t * (self.pres_ring.var(self.nvars + i) ** k)
            e = AlgElem(self, e.poly * t)
        elif den is not None:
            c = den.constant_value()
            e = AlgElem(self, e.poly.scale(self.field.inv(c)))
        return e

    def _match_denominator(self, den):
        """Write den = c * prod inverted[i]^e_i, or fail."""
        exps = [0] * self.ninv
        rem = den
        changed = True
        while changed and not rem.is_constant():
            changed = False
            for i, s in enumerate(self.inverted):
                if s.is_constant():
                    continue
                q = divide_exact(rem, s)
                if q is not None:
                    exps[i] += 1
                    rem = q
                    changed = True
                    break
        if not rem.is_constant() or rem.is_zero():
            raise ValueError(f"denominator {den} is not a product of inverted elements")
        return exps, rem.constant_value()

    # -- units ----------------------------------------------------------

    def unit_inverse(self, elem):
        """Inverse of elem if it is a unit, else None.

        The saturation ideal with u*w - 1 collapsing to (1) only certifies
        that the localization at u dies; u is a unit precisely when a
        w-leading basis element survives (or the whole ring is zero)."""
        if self.is_zero_ring():
            return AlgElem(self, self.pres_ring.zero())
        key = frozenset(self.nf(elem.poly).terms.items())
        if key in self._unit_cache:
            inv = self._unit_cache[key]
            return None if inv is None else AlgElem(self, inv)
        big = PolyRing(self.field, ("@w",) + self.pres_ring.names)
        gens = [embed_poly(g, big, 1) for g in self.ideal_gens()]
        gens.append(embed_poly(elem.poly, big, 1) * big.var(0) - big.one())
        G = groebner_basis(gens, Block(1))
        inv_poly = None
        if not is_unit_ideal(G):
            for g in G:
                le = g.lead(Block(1))[0]
                if le[0] == 1 and sum(le) == 1:
                    tail = Poly(big, {e: c for e, c in g.terms.items() if e != le})
                    if any(e[0] for e in tail.terms):
                        continue
                    inv_poly = Poly(self.pres_ring,
                                    {e[1:]: self.field.neg(c) for e, c in tail.terms.items()})
                    break
        self._unit_cache[key] = None if inv_poly is None else inv_poly
        return None if inv_poly is None else AlgElem(self, inv_poly)

    def is_unit(self, elem):
        return self.unit_inverse(elem) is not None

    # -- derived algebras ------------------------------------------------

    def localize(self, extra):
        """Same presentation with `extra` (base-ring polys) also inverted."""
        extra = [self._coerce_base(s) for s in extra]
        return LocAlgebra(self.field, self.names, self.relations,
                          self.inverted + tuple(extra), self.weights)

    def forget_grading(self):
        if self.weights is None:
            return self
        return LocAlgebra(self.field, self.names, self.relations, self.inverted, None)

    # -- misc -------------------------------------------------------------

    def __repr__(self):
        parts = [f"{self.field}[{','.join(self.names) or ''}]"]
        if self.relations:
            parts.append("/(" + ", ".join(map(str, self.relations)) + ")")
        if self.inverted:
            parts.append("[1/(" + ", ".join(map(str, self.inverted)) + ")]")
        return "".join(parts)

    def same_presentation(self, other):
        return (self.field == other.field and self.names == other.names
                and self.relations == other.relations
                and self.inverted == other.inverted)


class AlgElem:
    """Element of a LocAlgebra, stored as a presentation-ring polynomial."""

    __slots__ = ("algebra", "poly", "_nf")

    def __init__(self, algebra, poly):
        self.algebra = algebra
        self.poly = poly
        self._nf = None

    def nf(self):
        if self._nf is None:
            self._nf = self.algebra.nf(self.poly)
        return self._nf

    def is_zero(self):
        return self.nf().is_zero()

    def __add__(self, other):
        return AlgElem(self.algebra, self.poly + other.poly)

    def __sub__(self, other):
        return AlgElem(self.algebra, self.poly - other.poly)

    def __neg__(self):
        return AlgElem(self.algebra, -self.poly)

    def __mul__(self, other):
        return AlgElem(self.algebra, self.poly * other.poly)

    def __pow__(self, n):
        return AlgElem(self.algebra, self.poly ** n)

    def scale(self, c):
        return AlgElem(self.algebra, self.poly.scale(c))

    def __eq__(self, other):
        if not isinstance(other, AlgElem):
            return NotImplemented
        if self.algebra is not other.algebra and \
                not self.algebra.same_presentation(other.algebra):
            return False
        return self.algebra.nf(self.poly - other.poly).is_zero()

    def __hash__(self):  # hash by normal form
        return hash(frozenset(self.nf().terms.items()))

    def divide_by_unit(self, other):
        inv = self.algebra.unit_inverse(other)
        if inv is None:
            raise ZeroDivisionError(f"{other} is not a unit")
        return self * inv

    def fraction_view(self):
        """(numerator, denominator) as base-ring polynomials."""
        A = self.algebra
        f = self.nf()
        n = A.nvars
        dmax = [0] * A.ninv
        for e in f.terms:
            for i in range(A.ninv):
                dmax[i] = max(dmax[i], e[n + i])
        num = A.base_ring.zero()
        for e, c in f.terms.items():
            mono = A.base_ring.monomial(e[:n], c)
            for i in range(A.ninv):
                k = dmax[i] - e[n + i]
                if k:
                    mono = mono * (A.inverted[i] ** k)
            num = num + mono
        den = A.base_ring.one()
        for i, d in enumerate(dmax):
            if d:
                den = den * (A.inverted[i] ** d)
        return num, den

    def weighted_degree(self):
        w = self.algebra.pres_weights()
        if w is None:
            return None
        return self.nf().weighted_degree(w)

    def monomial_content(self):
        """(coeff, exponent vector over base vars as Z-vector) when the normal
        form is a single term; lattice content subtracts inverted exponents."""
        f = self.nf()
        if len(f.terms) != 1:
            return None
        A = self.algebra
        (e, c), = f.terms.items()
        vec = list(e[:A.nvars])
        for i in range(A.ninv):
            k = e[A.nvars + i]
            if k:
                s = A.inverted[i]
                if len(s.terms) != 1:
                    return None
                (se, sc), = s.terms.items()
                for j in range(A.nvars):
                    vec[j] -= k * se[j]
                inv_sc = A.field.inv(sc)
                for _ in range(k):
                    c = A.field.mul(c, inv_sc)
        return c, tuple(vec)

    def __repr__(self):
        num, den = self.fraction_view()
        if den.is_constant() and den.constant_value() == self.algebra.field.one():
            return str(num)
        return f"({num})/({den})"


# ----------------------------------------------------------------------
# algebra homomorphisms
# ----------------------------------------------------------------------

class AlgHom:
    """Ring map between localized algebras, given on source variables.

    kind is "localization" (target is source with `extra` inverted, validated
    on demand) or "general".
    """

    def __init__(self, source, target, images, kind="general", extra=()):
        self.source = source
        self.target = target
        self.images = tuple(images)
        if len(self.images) != source.nvars:
            raise ValueError("one image per source variable required")
        for im in self.images:
            if im.algebra is not target:
                raise ValueError("images must live in the target algebra")
        self.kind = kind
        self.extra = tuple(source._coerce_base(e) for e in extra)
        self._pres_images = None
        self._joint = None

    @classmethod
    def identity(cls, algebra):
        return cls(algebra, algebra, [algebra.var(n) for n in algebra.names],
                   kind="localization", extra=())

    @classmethod
    def localization_map(cls, source, target, extra=()):
        """source -> target where target has the same base variables."""
        return cls(source, target, [target.var(n) for n in source.names],
                   kind="localization", extra=extra)

    def pres_images(self):
        """Images of all presentation variables (base vars, then inverses)."""
        if self._pres_images is None:
            ims = list(self.images)
            for i, s in enumerate(self.source.inverted):
                im_s = self.apply_base(s)
                inv = self.target.unit_inverse(im_s)
                if inv is None:
                    raise ValueError(
                        f"image of inverted element {s} is not a unit in the target")
                ims.append(inv)
            self._pres_images = tuple(ims)
        return self._pres_images

    def apply_base(self, base_poly):
        return AlgElem(self.target,
                       map_poly(base_poly, self.target.pres_ring,
                                [im.poly for im in self.images]))

    def apply(self, elem):
        if elem.algebra is not self.source:
            raise ValueError("element not in the source algebra")
        reps = [im.poly for im in self.pres_images()]
        return AlgElem(self.target, map_poly(elem.poly, self.target.pres_ring, reps))

    def compose(self, other):
        """self o other (other first)."""
        if other.target is not self.source:
            if not other.target.same_presentation(self.source):
                raise ValueError("composition mismatch")
        images = [self.apply(AlgElem(self.source, im.poly)) for im in other.images]
        kind, extra = "general", ()
        if self.kind == "localization" and other.kind == "localization" \
                and other.source.names == self.source.names:
            # localization homs here are name-preserving, so the invert sets
            # concatenate once reinterpreted over the outer source
            ring = other.source.base_ring
            extra = tuple(other.extra) + tuple(
                Poly(ring, dict(e.terms)) for e in self.extra)
            kind = "localization"
        return AlgHom(other.source, self.target, images, kind, extra)

    # -- decision procedures -------------------------------------------

    def _joint_gb(self):
        """Joint ring k[target pres vars | source pres vars] with the target
        block dominant, plus a Groebner basis of the graph ideal.  Cached."""
        if self._joint is None:
            tnames = tuple("Y" + n for n in self.target.pres_ring.names)
            snames = tuple("X" + n for n in self.source.pres_ring.names)
            big = PolyRing(self.source.field, tnames + snames)
            nt = len(tnames)
            gens = [embed_poly(g, big, 0) for g in self.target.ideal_gens()]
            for i, im in enumerate(self.pres_images()):
                gens.append(big.var(nt + i) - embed_poly(im.poly, big, 0))
            gens.extend(embed_poly(g, big, nt) for g in self.source.ideal_gens())
            G = groebner_basis(gens, Block(nt))
            self._joint = (big, nt, G)
        return self._joint

    def kernel_gens(self):
        """Generators of ker(self) as source elements (may include redundant
        ones); empty list means the zero ideal."""
        big, nt, G = self._joint_gb()
        out = []
        for g in G:
            if all(all(e[i] == 0 for i in range(nt)) for e in g.terms):
                f = Poly(self.source.pres_ring,
                         {e[nt:]: c for e, c in g.terms.items()})
                elem = AlgElem(self.source, f)
                if not elem.is_zero():
                    out.append(elem)
        return out

    def is_injective(self):
        if self.source.is_zero_ring():
            return True
        if self.target.is_zero_ring():
            return False  # something (namely 1) dies
        return not self.kernel_gens()

    def is_surjective(self):
        if self.target.is_zero_ring():
            return True
        if self.source.is_zero_ring():
            return False
        big, nt, G = self._joint_gb()
        for j in range(nt):
            r = normal_form(big.var(j), G, Block(nt))
            if any(any(e[i] for i in range(nt)) for e in r.terms):
                return False
        return True

    def is_isomorphism(self):
        return self.is_surjective() and self.is_injective()

    def preimage(self, elem):
        """A source element mapping to elem, or None."""
        big, nt, G = self._joint_gb()
        r = normal_form(embed_poly(elem.poly, big, 0), G, Block(nt))
        if any(any(e[i] for i in range(nt)) for e in r.terms):
            return None
        return AlgElem(self.source,
                       Poly(self.source.pres_ring, {e[nt:]: c for e, c in r.terms.items()}))

    def validate(self):
        """List of defects (empty = valid hom of the declared kind)."""
        problems = []
        for r in self.source.relations:
            if not self.apply_base(r).is_zero():
                problems.append(f"relation {r} does not map to zero")
        for s in self.source.inverted:
            if self.target.unit_inverse(self.apply_base(s)) is None:
                problems.append(f"inverted element {s} does not map to a unit")
        if self.kind == "localization" and not problems:
            B2 = self.source.localize(self.extra)
            try:
                h = AlgHom(B2, self.target,
                           [AlgElem(self.target, im.poly) for im in self.images])
                if not h.is_isomorphism():
                    problems.append(
                        "declared localization but target is not source[1/extra]")
            except ValueError as exc:
                problems.append(str(exc))
        return problems

    def __repr__(self):
        ims = ", ".join(f"{n}->{im}" for n, im in zip(self.source.names, self.images))
        return f"AlgHom({self.source} -> {self.target}; {ims})"


# ----------------------------------------------------------------------
# tensor product of algebras
# ----------------------------------------------------------------------

def _rename(names, used):
    out = []
    for n in names:
        cand, k = n, 1
        while cand in used:
            k += 1
            cand = f"{n}_{k}"
        used.add(cand)
        out.append(cand)
    return out


def tensor_algebras(A, B, over=None, fA=None, fB=None):
    """A (x)_over B with its two canonical maps.

    over=None means tensor over the base field.  Returns (T, iA, iB).
    """
    if A.field != B.field:
        raise ValueError("incompatible base fields")
    field = A.field
    used = set(A.names)
    bnames = _rename(B.names, used)
    names = A.names + tuple(bnames)
    weights = None
    if A.weights is not None and B.weights is not None:
        weights = A.weights + B.weights
    base = PolyRing(field, names)
    na = A.nvars

    def left(p):
        return embed_poly(p, base, 0)

    def right(p):
        return embed_poly(p, base, na)

    relations = [left(r) for r in A.relations] + [right(r) for r in B.relations]
    inverted = [left(s) for s in A.inverted] + [right(s) for s in B.inverted]
    T = LocAlgebra(field, names, relations, inverted, weights)

    def left_elem(elem):
        # base vars shift into T; inverse generators map to T's inverse gens
        reps = [T.pres_ring.var(i) for i in range(na)]
        reps += [T.pres_ring.var(len(names) + i) for i in range(A.ninv)]
        return AlgElem(T, map_poly(elem.poly, T.pres_ring, reps))

    def right_elem(elem):
        reps = [T.pres_ring.var(na + i) for i in range(B.nvars)]
        reps += [T.pres_ring.var(len(names) + A.ninv + i) for i in range(B.ninv)]
        return AlgElem(T, map_poly(elem.poly, T.pres_ring, reps))

    ident_rels = []
    if over is not None:
        if fA is None or fB is None:
            raise ValueError("structure maps required when tensoring over a ring")
        for v in range(over.nvars):
            va = fA.images[v]
            vb = fB.images[v]
            na_, da_ = va.fraction_view()
            nb_, db_ = vb.fraction_view()
            rel = left(na_) * right(db_) - right(nb_) * left(da_)
            if not rel.is_zero():
                ident_rels.append(rel)
    if ident_rels:
        if weights is not None and any(r.weighted_degree(weights) is None
                                       for r in ident_rels):
            # structure maps do not preserve the grading; the tensor ring
            # still exists, just ungraded
            weights = None
        T = LocAlgebra(field, names, tuple(relations) + tuple(ident_rels),
                       inverted, weights)

    iA = AlgHom(A, T, [left_elem(A.var(n)) for n in A.names],
                kind="general")
    iB = AlgHom(B, T, [right_elem(B.var(n)) for n in B.names],
                kind="general")
    return T, iA, iB


# ----------------------------------------------------------------------
# flatness primitives
# ----------------------------------------------------------------------

def radical_contains_one(gens, ring):
    """1 in rad(gens) inside `ring`; equivalently ring/(gens) is the zero
    ring, so this is plain ideal membership of 1."""
    ideal = ring.ideal_gens() + [g.poly if isinstance(g, AlgElem) else
                                 embed_poly(ring._coerce_base(g), ring.pres_ring, 0)
                                 for g in gens]
    return is_unit_ideal(groebner_basis(ideal, GREVLEX))


def cover_is_faithfully_flat(base, covers):
    """Is base -> prod of localizations jointly faithfully flat?

    Each cover must be an AlgHom of kind=localization (else
    NotLocalizationPresented).  Criterion: the complements V(prod S_i) have
    empty intersection, i.e. 1 in rad of the ideal generated by the per-cover
    products of inverted elements.
    """
    products = []
    for h in covers:
        if h.kind != "localization":
            raise NotLocalizationPresented(
                f"cover {h} is not presented as a localization")
        f = base.base_ring.one()
        for s in h.extra:
            f = f * s
        products.append(base.element(f))
    if not covers:
        return base.is_zero_ring()
    return radical_contains_one(products, base)


def certify_localization(hom, candidates=()):
    """Try to present `hom` as source -> source[1/T]: returns T (list of
    base-ring polys) or None.

    Declared localizations are taken at face value (their constructor
    contract); otherwise candidate elements whose images are units are
    inverted and the induced map is tested for bijectivity.
    """
    if hom.kind == "localization":
        return list(hom.extra)
    T = []
    seen = set()
    base_vars = [hom.source.base_ring.var(i) for i in range(hom.source.nvars)]
    for c in list(candidates) + base_vars:
        c = hom.source._coerce_base(c)
        if c.is_constant():
            continue
        key = frozenset(c.terms.items())
        if key in seen:
            continue
        seen.add(key)
        if hom.target.unit_inverse(hom.apply_base(c)) is not None:
            T.append(c)
    B2 = hom.source.localize(T)
    h2 = AlgHom(B2, hom.target, [AlgElem(hom.target, im.poly) for im in hom.images])
    try:
        if h2.is_isomorphism():
            return T
    except ValueError:
        return None
    return None


class FFVerdict:
    """Outcome of a faithful-flatness decision: True/False or undecided."""

    def __init__(self, value, reason=""):
        self.value = value  # True, False, or None for undecided
        self.reason = reason

    @property
    def undecided(self):
        return self.value is None

    def __bool__(self):
        return self.value is True

    def __repr__(self):
        if self.undecided:
            return f"Undecided({self.reason})"
        return f"{self.value}" + (f" ({self.reason})" if self.reason else "")


def decide_faithfully_flat(base, homs, candidates=None):
    """Decide whether base -> prod of hom targets is faithfully flat.

    Complete when every target is certified as a localization of base
    (radical criterion); a nonzero joint kernel refutes; otherwise undecided.
    `candidates` is an optional list (one entry per hom) of invertibility
    candidates for the certification step.
    """
    if not homs:
        return FFVerdict(base.is_zero_ring(), "empty cover")
    if base.nvars == 0:
        # base is the field (or the zero ring): flatness is automatic and
        # Spec(base) is at most a point
        if base.is_zero_ring():
            return FFVerdict(True, "zero base ring")
        hit = any(not h.target.is_zero_ring() for h in homs)
        return FFVerdict(hit, "field base")
    certified = []
    for i, h in enumerate(homs):
        cand = candidates[i] if candidates else ()
        T = certify_localization(h, cand)
        if T is None:
            certified = None
            break
        certified.append(T)
    if certified is not None:
        products = []
        for T in certified:
            f = base.base_ring.one()
            for s in T:
                f = f * s
            products.append(base.element(f))
        ok = radical_contains_one(products, base)
        return FFVerdict(ok, "localization cover criterion")
    # refutation: faithfully flat maps are injective
    kernels = [h.kernel_gens() for h in homs]
    joint = _joint_kernel(base, kernels)
    if joint:
        return FFVerdict(False, f"kernel contains {joint[0]}")
    return FFVerdict(None, "targets not certified as localizations")


def _joint_kernel(base, kernels):
    """Nonzero generators of the intersection of the kernel ideals."""
    if any(not k for k in kernels):
        return []
    ideals = [[e.poly for e in k] for k in kernels]
    inter = ideals[0]
    for J in ideals[1:]:
        inter = _ideal_intersection(base, inter, J)
        if not inter:
            return []
    out = [AlgElem(base, f) for f in inter]
    return [e for e in out if not e.is_zero()]


def _ideal_intersection(base, I, J):
    """Intersection of two ideals of the presentation quotient, via the
    one-variable trick eliminating u from u*I + (1-u)*J."""
    big = PolyRing(base.field, ("@u",) + base.pres_ring.names)
    u = big.var(0)
    one = big.one()
    gens = [embed_poly(g, big, 1) for g in base.ideal_gens()]
    gens += [u * embed_poly(f, big, 1) for f in I]
    gens += [(one - u) * embed_poly(f, big, 1) for f in J]
    G = groebner_basis(gens, Block(1))
    out = []
    for g in G:
        if all(e[0] == 0 for e in g.terms):
            f = Poly(base.pres_ring, {e[1:]: c for e, c in g.terms.items()})
            if not base.nf(f).is_zero():
                out.append(f)
    return out
