"""Finitely presented modules over localized algebras.

An FpModule over A is A^g / (row span of a relation matrix).  Vectors at the
API level are tuples of algebra elements; Groebner work happens on the
presentation ring including the saturation variables, with the algebra's
ideal folded into every component.

Graded pieces are computed exactly: standard monomials of the leading-term
module are carved into Stanley cones, and a cone's slice of a given weighted
degree is either certified finite and enumerated, or the piece is proved
infinite-dimensional (InfiniteDimension).
"""

from .errors import InfiniteDimension, UngradedModule
from .algebras import AlgElem, LocAlgebra, AlgHom
from .poly import Poly, GREVLEX, embed_poly, monomial_mul
from .modgb import (ModuleOrder, module_groebner, vec_normal_form, vec_add,
                    vec_scale, vec_from_polys, vec_to_polys, syzygy_basis)


class FpModule:
    """generators 0..ngens-1 over `algebra`, with relation rows among them;
    optional integer degree shift per generator."""

    def __init__(self, algebra, ngens, relations=(), shifts=None):
        self.algebra = algebra
        self.ngens = ngens
        rel = []
        for row in relations:
            row = tuple(self._coerce(v) for v in row)
            if len(row) != ngens:
                raise ValueError("relation row length mismatch")
            rel.append(row)
        self.relations = tuple(rel)
        self.shifts = tuple(shifts) if shifts is not None else None
        if self.shifts is not None and len(self.shifts) != ngens:
            raise ValueError("one shift per generator required")
        self._gb = None

    def _coerce(self, v):
        if isinstance(v, AlgElem):
            return v
        if isinstance(v, Poly):
            return self.algebra.element(v)
        if isinstance(v, int):
            return self.algebra.const(v)
        raise TypeError(f"bad module entry {v!r}")

    @classmethod
    def free(cls, algebra, rank, shifts=None):
        return cls(algebra, rank, (), shifts)

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, 0, ())

    def is_graded(self):
        return self.shifts is not None and self.algebra.pres_weights() is not None

    def gen(self, j):
        out = [self.algebra.zero()] * self.ngens
        out[j] = self.algebra.one()
        return tuple(out)

    # -- Groebner data --------------------------------------------------

    def _rel_vectors(self):
        """Relation rows plus ideal * e_j, as dict-vectors over pres_ring."""
        vecs = []
        for row in self.relations:
            vecs.append(vec_from_polys([v.poly for v in row]))
        ideal = self.algebra.ideal_gens()
        zero = self.algebra.pres_ring.zero()
        for j in range(self.ngens):
            for g in ideal:
                polys = [zero] * self.ngens
                polys[j] = g
                vecs.append(vec_from_polys(polys))
        return [v for v in vecs if v]

    def gb(self):
        if self._gb is None:
            order = ModuleOrder(GREVLEX, 0)
            self._gb = module_groebner(self.algebra.field, self._rel_vectors(), order)
        return self._gb

    def nf(self, vector):
        """Normal form of a tuple-of-elements vector."""
        vec = vec_from_polys([self._coerce(v).poly for v in vector])
        r = vec_normal_form(self.algebra.field, vec, self.gb(), ModuleOrder(GREVLEX, 0))
        return vec_to_polys(r, self.algebra.pres_ring, self.ngens)

    def vector_is_zero(self, vector):
        return all(f.is_zero() for f in self.nf(vector))

    def is_zero_module(self):
        return all(self.vector_is_zero(self.gen(j)) for j in range(self.ngens))

    def elem(self, polys):
        return tuple(self._coerce(p) for p in polys)

    def __repr__(self):
        return (f"FpModule({self.algebra}, rank {self.ngens}, "
                f"{len(self.relations)} relations)")


class ModHom:
    """A-linear map between FpModules over the same algebra, given by the
    images of the source generators."""

    def __init__(self, source, target, images):
        if source.algebra is not target.algebra and \
                not source.algebra.same_presentation(target.algebra):
            raise ValueError("ModHom needs a common algebra")
        self.source = source
        self.target = target
        self.images = tuple(tuple(target._coerce(v) for v in row) for row in images)
        if len(self.images) != source.ngens:
            raise ValueError("one image per source generator required")

    @classmethod
    def identity(cls, module):
        return cls(module, module, [module.gen(j) for j in range(module.ngens)])

    @classmethod
    def zero_map(cls, source, target):
        z = [target.algebra.zero()] * target.ngens
        return cls(source, target, [tuple(z) for _ in range(source.ngens)])

    def apply(self, vector):
        A = self.target.algebra
        out = [A.zero()] * self.target.ngens
        for j, v in enumerate(vector):
            v = self.source._coerce(v)
            for k, w in enumerate(self.images[j]):
                out[k] = out[k] + AlgElem(A, v.poly) * w
        return tuple(out)

    def validate(self):
        problems = []
        for row in self.source.relations:
            if not self.target.vector_is_zero(self.apply(row)):
                problems.append(f"relation {row} not mapped into target relations")
        return problems

    def compose(self, other):
        """self o other."""
        return ModHom(other.source, self.target,
                      [self.apply(row) for row in other.images])

    def is_zero(self):
        return all(self.target.vector_is_zero(row) for row in self.images)

    def is_surjective(self):
        gens = [vec_from_polys([v.poly for v in row]) for row in self.images]
        gens += self.target._rel_vectors()
        order = ModuleOrder(GREVLEX, 0)
        G = module_groebner(self.target.algebra.field, [g for g in gens if g], order)
        for j in range(self.target.ngens):
            e = vec_from_polys([self.target.algebra.pres_ring.one() if k == j
                                else self.target.algebra.pres_ring.zero()
                                for k in range(self.target.ngens)])
            if vec_normal_form(self.target.algebra.field, e, G, order):
                return False
        return True

    def kernel_gens(self):
        """Vectors in the source free cover generating ker(self)."""
        A = self.source.algebra
        cols = [vec_from_polys([v.poly for v in row]) for row in self.images]
        ncols = len(cols)
        rel = self.target._rel_vectors()
        syz = syzygy_basis(A.field, cols + rel, self.target.ngens,
                           A.pres_ring.nvars)
        out = []
        for s in syz:
            polys = [A.pres_ring.zero()] * ncols
            for (pos, e), c in s.items():
                if pos < ncols:
                    polys[pos] = polys[pos] + A.pres_ring.monomial(e, c)
            vec = tuple(AlgElem(A, p) for p in polys)
            if not self.source.vector_is_zero(vec):
                out.append(vec)
        return out

    def is_injective(self):
        return not self.kernel_gens()

    def is_isomorphism(self):
        return self.is_surjective() and self.is_injective()

    def kernel(self):
        """(K, inclusion K -> source) as an FpModule with presentation."""
        A = self.source.algebra
        kgens = self.kernel_gens()
        if not kgens:
            K = FpModule.zero(A)
            return K, ModHom(K, self.source, [])
        cols = [vec_from_polys([v.poly for v in row]) for row in kgens]
        relsrc = self.source._rel_vectors()
        syz = syzygy_basis(A.field, cols + relsrc, self.source.ngens,
                           A.pres_ring.nvars)
        krels = []
        for s in syz:
            row = [A.pres_ring.zero()] * len(kgens)
            for (pos, e), c in s.items():
                if pos < len(kgens):
                    row[pos] = row[pos] + A.pres_ring.monomial(e, c)
            row = tuple(AlgElem(A, p) for p in row)
            if any(not v.is_zero() for v in row):
                krels.append(row)
        shifts = _homogeneous_shifts(self.source, kgens)
        K = FpModule(A, len(kgens), krels, shifts)
        return K, ModHom(K, self.source, kgens)

    def cokernel(self):
        """(C, projection target -> C)."""
        rels = list(self.target.relations) + [row for row in self.images]
        C = FpModule(self.target.algebra, self.target.ngens, rels,
                     self.target.shifts)
        proj = ModHom(self.target, C, [C.gen(j) for j in range(C.ngens)])
        return C, proj

    def __repr__(self):
        return f"ModHom({self.source} -> {self.target})"


def lift_coefficients(module, gens, w):
    """Coefficients c with w = sum c_i * gens_i inside `module`, or None.

    gens and w are tuple-of-element vectors; the relations of `module` (and
    the algebra ideal) are folded in, so any representative lift is returned.
    """
    A = module.algebra
    F = A.field
    ncomp = module.ngens
    k = len(gens)
    zero_exp = (0,) * A.pres_ring.nvars
    tagged = []
    for i, g in enumerate(gens):
        vec = dict(vec_from_polys([module._coerce(v).poly for v in g]))
        vec[(ncomp + i, zero_exp)] = F.one()
        tagged.append(vec)
    for r in module._rel_vectors():
        tagged.append(dict(r))
    order = ModuleOrder(GREVLEX, split=ncomp)
    G = module_groebner(F, tagged, order)
    wv = vec_from_polys([module._coerce(v).poly for v in w])
    r = vec_normal_form(F, wv, G, order)
    if any(pos < ncomp for pos, _ in r):
        return None
    coeffs = [A.pres_ring.zero()] * k
    for (pos, e), c in r.items():
        coeffs[pos - ncomp] = coeffs[pos - ncomp] + A.pres_ring.monomial(e, F.neg(c))
    return [AlgElem(A, p) for p in coeffs]


def _homogeneous_shifts(module, vectors):
    """Degrees making `vectors` homogeneous generators, or None."""
    if not module.is_graded():
        return None
    shifts = []
    for g in vectors:
        degs = set()
        for j, v in enumerate(g):
            if v.is_zero():
                continue
            d = v.weighted_degree()
            if d is None:
                return None
            degs.add(d + module.shifts[j])
        if len(degs) > 1:
            return None
        shifts.append(degs.pop() if degs else 0)
    return tuple(shifts)


def kernel_module_hom(h):
    return h.kernel()


def base_change_module(M, f):
    """M (x)_{f.source} f.target: same generators, relations mapped through f."""
    if M.algebra is not f.source and not M.algebra.same_presentation(f.source):
        raise ValueError("module not over the map's source")
    rel = [tuple(f.apply(v) for v in row) for row in M.relations]
    return FpModule(f.target, M.ngens, rel, M.shifts)


def base_change_vector(f, vector):
    return tuple(f.apply(v) for v in vector)


# ----------------------------------------------------------------------
# graded pieces
# ----------------------------------------------------------------------

def _stanley(gens, nvars):
    """Stanley decomposition of the complement of a monomial ideal.

    gens: exponent tuples of the ideal's generators.  Returns disjoint cones
    (offset exponent tuple, frozenset of free variable indices).
    """
    gens = [g for g in gens]
    zero = (0,) * nvars
    if any(all(e == 0 for e in g) for g in gens):
        return []
    if not gens:
        return [(zero, frozenset(range(nvars)))]
    # pick the first variable occurring in a generator
    j = next(i for g in gens for i in range(nvars) if g[i])
    # branch e_j = 0
    flat = [g for g in gens if g[j] == 0]
    pieces = []
    for off, free in _stanley(flat, nvars):
        if j in free:
            free = free - {j}
        pieces.append((off, free))
    # branch e_j >= 1: x_j * complement(gens : x_j)
    quot = [tuple(max(e - 1, 0) if i == j else e for i, e in enumerate(g))
            for g in gens]
    xj = tuple(1 if i == j else 0 for i in range(nvars))
    for off, free in _stanley(quot, nvars):
        pieces.append((monomial_mul(off, xj), free))
    return pieces


def _cone_slice(offset, free, weights, d):
    """Exponent tuples e = offset + (support on free) with weighted degree d.

    Raises InfiniteDimension when the slice is provably infinite.
    """
    base = sum(w * e for w, e in zip(weights, offset))
    rest = d - base
    free = sorted(free)
    pos = [i for i in free if weights[i] > 0]
    neg = [i for i in free if weights[i] < 0]
    zer = [i for i in free if weights[i] == 0]

    def solvable():
        if not free:
            return rest == 0
        if pos and neg:
            from math import gcd
            g = 0
            for i in free:
                g = gcd(g, abs(weights[i]))
            return g != 0 and rest % g == 0
        ws = [weights[i] for i in free if weights[i]]
        if not ws:
            return rest == 0
        if all(w > 0 for w in ws):
            return rest >= 0 and _knapsack_exists(ws, rest)
        return rest <= 0 and _knapsack_exists([-w for w in ws], -rest)

    if zer and solvable():
        raise InfiniteDimension("zero-weight free variable in a nonempty slice")
    if pos and neg and solvable():
        raise InfiniteDimension("mixed-sign weights in a nonempty slice")
    sols = []
    if not pos and not neg:
        if rest == 0:
            sols.append(offset)
        return sols
    idx = pos or neg
    sign = 1 if pos else -1
    target = sign * rest
    if target < 0:
        return []
    ws = [sign * weights[i] for i in idx]
    for combo in _knapsack_enum(ws, target):
        e = list(offset)
        for i, k in zip(idx, combo):
            e[i] += k
        sols.append(tuple(e))
    return sols


def _knapsack_exists(ws, target):
    if target == 0:
        return True
    if not ws:
        return False
    w, rest = ws[0], ws[1:]
    k = 0
    while k * w <= target:
        if _knapsack_exists(rest, target - k * w):
            return True
        k += 1
    return False


def _knapsack_enum(ws, target):
    if not ws:
        if target == 0:
            yield ()
        return
    w, rest = ws[0], ws[1:]
    k = 0
    while k * w <= target:
        for combo in _knapsack_enum(rest, target - k * w):
            yield (k,) + combo
        k += 1
    if target == 0 and w == 0:
        pass


class GradedPiece:
    """Finite-dimensional slice of a graded FpModule: an ordered monomial
    basis (generator index, presentation exponents) with coordinate maps."""

    def __init__(self, module, degree, basis):
        self.module = module
        self.degree = degree
        self.basis = basis
        self.index = {b: i for i, b in enumerate(basis)}

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, vector):
        """Coordinates of a module vector (tuple of elements)."""
        A = self.module.algebra
        nf = self.module.nf(vector)
        out = [A.field.zero()] * self.dim
        for j, f in enumerate(nf):
            for e, c in f.terms.items():
                key = (j, e)
                if key not in self.index:
                    raise ValueError(
                        f"monomial {key} of degree-{self.degree} vector not in basis")
                out[self.index[key]] = c
        return out

    def element(self, coords):
        A = self.module.algebra
        polys = [A.pres_ring.zero()] * self.module.ngens
        for c, (j, e) in zip(coords, self.basis):
            if c:
                polys[j] = polys[j] + A.pres_ring.monomial(e, c)
        return tuple(AlgElem(A, p) for p in polys)


def graded_piece(M, d):
    """Monomial basis of M_d; raises UngradedModule / InfiniteDimension."""
    if not M.is_graded():
        raise UngradedModule(f"{M} has no grading")
    A = M.algebra
    weights = A.pres_weights()
    nv = A.pres_ring.nvars
    order = ModuleOrder(GREVLEX, 0)
    leads = {}
    for g in M.gb():
        pos, e = order.max_term(g)
        leads.setdefault(pos, []).append(e)
    basis = []
    for j in range(M.ngens):
        target = d - M.shifts[j]
        for off, free in _stanley(leads.get(j, []), nv):
            for e in _cone_slice(off, free, weights, target):
                basis.append((j, e))
    basis.sort()
    return GradedPiece(M, d, basis)


def module_dimension_basis(M):
    """Full monomial basis when M is finite-dimensional over the field;
    raises InfiniteDimension otherwise."""
    A = M.algebra
    nv = A.pres_ring.nvars
    order = ModuleOrder(GREVLEX, 0)
    leads = {}
    for g in M.gb():
        pos, e = order.max_term(g)
        leads.setdefault(pos, []).append(e)
    basis = []
    for j in range(M.ngens):
        for off, free in _stanley(leads.get(j, []), nv):
            if free:
                raise InfiniteDimension(
                    f"generator {j} has a free direction {sorted(free)}")
            basis.append((j, off))
    basis.sort()
    return GradedPiece(M, None, basis)
