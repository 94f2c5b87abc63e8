"""Sheaves of modules on finite ringed posets: the quasi-coherence test,
kernels and cokernels, pullback/pushforward, the tilde functor, ideal
sheaves and pointwise radicals."""

from .errors import SectionsNotPresented, DegreeBoundExceeded
from .algebras import AlgElem, AlgHom, LocAlgebra
from .modules import (FpModule, ModHom, base_change_module, lift_coefficients,
                      _homogeneous_shifts)
from .poly import Poly, PolyRing, GREVLEX, groebner_basis, is_unit_ideal, \
    embed_poly, divide_exact
from .modgb import vec_from_polys
from .spaces import sections_presented


class SheafModule:
    """Per-point FpModule stalks with semilinear restriction matrices.

    The matrix of an edge (x, y) has one row per generator of the stalk at x;
    entries are elements of the stalk algebra at y: generator j of M_x maps
    to sum_k matrix[j][k] * generator k of M_y.
    """

    def __init__(self, space, stalks, matrices):
        self.space = space
        self.stalks = dict(stalks)
        self.matrices = {}
        for (x, y), rows in matrices.items():
            A = space.stalks[y]
            self.matrices[(x, y)] = tuple(
                tuple(v if isinstance(v, AlgElem) else A.element(v) for v in row)
                for row in rows)
        for (x, y) in space.edges:
            if (x, y) not in self.matrices:
                # default to identity when shapes agree
                sx, sy = self.stalks[x], self.stalks[y]
                if sx.ngens != sy.ngens:
                    raise ValueError(f"edge ({x},{y}) missing a restriction matrix")
                A = space.stalks[y]
                self.matrices[(x, y)] = tuple(
                    tuple(A.one() if i == j else A.zero() for j in range(sy.ngens))
                    for i in range(sx.ngens))

    def matrix(self, x, y):
        """Composite restriction matrix along the canonical edge path."""
        path = self.space.edge_path(x, y)
        A = self.space.stalks[y]
        cur = None
        for e in path:
            if cur is None:
                cur = self.matrices[e]
            else:
                cur = _compose_matrices(self.space, self, cur, e[0], e[1],
                                        self.matrices[e])
        if cur is None:  # x == y
            M = self.stalks[x]
            cur = tuple(tuple(A.one() if i == j else A.zero()
                              for j in range(M.ngens)) for i in range(M.ngens))
        return cur

    def tilde_map(self, x, y):
        """The target-linear map M_x (x)_{O_x} O_y -> M_y."""
        r = self.space.restriction(x, y)
        BC = base_change_module(self.stalks[x], r)
        return ModHom(BC, self.stalks[y], self.matrix(x, y))

    def restrict_vector(self, x, y, vector):
        """Image in M_y of a stalk vector at x (semilinear restriction)."""
        r = self.space.restriction(x, y)
        mat = self.matrix(x, y)
        My = self.stalks[y]
        A = self.space.stalks[y]
        out = [A.zero()] * My.ngens
        for j, v in enumerate(vector):
            rv = r.apply(self.stalks[x]._coerce(v))
            for kk, w in enumerate(mat[j]):
                out[kk] = out[kk] + rv * w
        return tuple(out)

    def validate(self):
        problems = []
        for (x, y), rows in self.matrices.items():
            Mx, My = self.stalks[x], self.stalks[y]
            if len(rows) != Mx.ngens or any(len(r) != My.ngens for r in rows):
                problems.append(f"edge ({x},{y}) matrix shape mismatch")
                continue
            for rel in Mx.relations:
                if not My.vector_is_zero(self.restrict_vector(x, y, rel)):
                    problems.append(
                        f"edge ({x},{y}) does not map relations into relations")
                    break
        # path independence on generators
        for x in self.space.points:
            for y in self.space.up_set(x):
                canon = self.matrix(x, y)
                for (a, m) in self.space.edges:
                    if a != x or not self.space.leq(m, y):
                        continue
                    comp = _compose_matrices(self.space, self,
                                             self.matrices[(a, m)], m, y)
                    if not _matrices_agree(self.stalks[y], comp, canon):
                        problems.append(
                            f"sheaf restriction squares at {x}<={m}<={y} differ")
        return problems

    def is_graded(self):
        return all(M.is_graded() for M in self.stalks.values())

    def __repr__(self):
        return f"SheafModule({self.space})"


def _compose_matrices(space, sheaf, mat1, mid, y, mat2=None):
    """Compose mat1: M_x -> M_mid with M_mid -> M_y (mat2, default the
    canonical composite); mat1's entries are pushed through the ring
    restriction O_mid -> O_y."""
    if mat2 is None:
        mat2 = sheaf.matrix(mid, y)
    r = space.restriction(mid, y)
    A = space.stalks[y]
    ny = sheaf.stalks[y].ngens
    out = []
    for row in mat1:
        new = [A.zero()] * ny
        for k, entry in enumerate(row):
            re = r.apply(entry)
            for l in range(ny):
                new[l] = new[l] + re * mat2[k][l]
        out.append(tuple(new))
    return tuple(out)


def _matrices_agree(My, m1, m2):
    for row1, row2 in zip(m1, m2):
        diff = tuple(a - b for a, b in zip(row1, row2))
        if not My.vector_is_zero(diff):
            return False
    return True


class SheafModHom:
    """Morphism of sheaf modules on one space: per-point ModHoms commuting
    with the restrictions."""

    def __init__(self, source, target, maps):
        self.source = source
        self.target = target
        self.maps = dict(maps)  # point -> ModHom

    @classmethod
    def zero(cls, source, target):
        return cls(source, target,
                   {p: ModHom.zero_map(source.stalks[p], target.stalks[p])
                    for p in source.space.points})

    def validate(self):
        problems = []
        for (x, y) in self.source.space.edges:
            for j in range(self.source.stalks[x].ngens):
                gen = self.source.stalks[x].gen(j)
                a = self.target.restrict_vector(x, y, self.maps[x].apply(gen))
                b = self.maps[y].apply(self.source.restrict_vector(x, y, gen))
                diff = tuple(p - q for p, q in zip(a, b))
                if not self.target.stalks[y].vector_is_zero(diff):
                    problems.append(f"square at edge ({x},{y}) row {j} fails")
        return problems

    def kernel(self):
        """Pointwise kernel with induced restrictions (a SheafModule plus the
        inclusion SheafModHom)."""
        stalks, incls = {}, {}
        for p in self.source.space.points:
            K, incl = self.maps[p].kernel()
            stalks[p], incls[p] = K, incl
        matrices = {}
        for (x, y) in self.source.space.edges:
            Ky, inc_y = stalks[y], incls[y]
            rows = []
            for g in incls[x].images:
                w = self.source.restrict_vector(x, y, g)
                coeffs = lift_coefficients(self.source.stalks[y],
                                           list(inc_y.images), w)
                if coeffs is None:
                    raise ValueError("kernel restriction failed to lift "
                                     "(kernel is not a subsheaf here)")
                rows.append(tuple(coeffs))
            matrices[(x, y)] = rows
        K = SheafModule(self.source.space, stalks, matrices)
        incl = SheafModHom(K, self.source, incls)
        return K, incl

    def cokernel(self):
        stalks, projs = {}, {}
        for p in self.source.space.points:
            C, proj = self.maps[p].cokernel()
            stalks[p], projs[p] = C, proj
        matrices = {e: self.target.matrices[e] for e in self.target.matrices}
        C = SheafModule(self.target.space, stalks, matrices)
        proj = SheafModHom(self.target, C, projs)
        return C, proj


def is_quasi_coherent(sheaf):
    """(verdict, failing edges): every induced map M_x (x) O_y -> M_y must be
    an isomorphism."""
    failing = []
    for (x, y) in sheaf.space.edges:
        if not sheaf.tilde_map(x, y).is_isomorphism():
            failing.append((x, y))
    return (not failing), failing


def pullback(f, N):
    """f^* N for a SpaceMap f and a sheaf N on the target."""
    stalks, matrices = {}, {}
    for x in f.source.points:
        stalks[x] = base_change_module(N.stalks[f(x)], f.comorphisms[x])
    for (x, y) in f.source.edges:
        rows = N.matrix(f(x), f(y))
        co = f.comorphisms[y]
        matrices[(x, y)] = [[co.apply(e) for e in row] for row in rows]
    return SheafModule(f.source, stalks, matrices)


def pushforward(f, M, presented=True):
    """f_* M.  With presented=True each f^{-1}(U_y) must have a minimum (its
    stalk is then the stalk of M there); otherwise SectionsNotPresented.
    """
    stalks, minima = {}, {}
    for y in f.target.points:
        pre = sorted(f.preimage(f.target.up_set(y)),
                     key=f.source.points.index)
        if not pre:
            stalks[y] = FpModule.zero(f.target.stalks[y])
            minima[y] = None
            continue
        m = f.source.minimum(pre)
        if m is None:
            if presented:
                raise SectionsNotPresented(
                    f"f^(-1)(U_{y}) has no minimum; pushforward stalk is a "
                    "genuine limit")
            stalks[y] = None
            minima[y] = None
            continue
        minima[y] = m
        # the stalk stays presented over O_m; scalars act through the
        # structure hom O_y -> O_m (restriction of scalars has no finite
        # presentation in general, and the qc test below never needs one)
        stalks[y] = M.stalks[m]
    matrices = {}
    for (y1, y2) in f.target.edges:
        m1, m2 = minima[y1], minima[y2]
        if m1 is None or m2 is None:
            My2 = stalks[y2]
            matrices[(y1, y2)] = [[f.target.stalks[y2].zero()] * (My2.ngens
                                  if My2 else 0)
                                  for _ in range(stalks[y1].ngens if stalks[y1] else 0)]
            continue
        matrices[(y1, y2)] = M.matrix(m1, m2)
    return PushforwardSheaf(f, M, stalks, matrices, minima)


class PushforwardSheaf:
    """Presented direct image: stalk at y is M at the minimum of f^{-1}(U_y),
    seen as an O_y-module along the comorphism."""

    def __init__(self, f, M, stalks, matrices, minima):
        self.map = f
        self.sheaf = M
        self.stalks = stalks
        self.matrices = matrices
        self.minima = minima
        self.space = f.target

    def structure_hom(self, y):
        """O_y -> O_m, the ring map through which scalars act."""
        m = self.minima[y]
        f = self.map
        co = f.comorphisms[m]  # O_{f(m)} -> O_m
        return co.compose(f.target.restriction(y, f(m)))

    def is_quasi_coherent(self):
        """(verdict, failing edges, undecided edges).

        The qc map (f_*M)_{y1} (x)_{O_{y1}} O_{y2} -> (f_*M)_{y2} factors as

          M_{m1} (x)_{O_{m1}} (O_{m1} (x)_{O_{y1}} O_{y2})
            -> M_{m1} (x)_{O_{m1}} O_{m2} -> M_{m2}.

        When the ring map O_{m1} (x)_{O_{y1}} O_{y2} -> O_{m2} is an
        isomorphism (the schematic-morphism condition at that edge), the test
        reduces to the second, computable map; otherwise the edge is
        undecided by this route.
        """
        from .algebras import tensor_algebras, AlgHom as _AlgHom
        failing, undecided = [], []
        for (y1, y2) in self.space.edges:
            m1, m2 = self.minima[y1], self.minima[y2]
            if m1 is None and m2 is None:
                continue
            if m2 is None:
                continue  # target stalk zero, map is onto zero
            if m1 is None:
                if not self.stalks[y2].is_zero_module():
                    failing.append((y1, y2))
                continue
            X = self.map.source
            Om1, Om2 = X.stalks[m1], X.stalks[m2]
            sigma1 = self.structure_hom(y1)
            ry = self.space.restriction(y1, y2)
            T, iA, iB = tensor_algebras(Om1, self.space.stalks[y2],
                                        self.space.stalks[y1], sigma1, ry)
            sigma2 = self.structure_hom(y2)
            rX = X.restriction(m1, m2)
            images = [iA_img for iA_img in
                      (rX.apply(Om1.var(n)) for n in Om1.names)]
            images += [sigma2.apply(self.space.stalks[y2].var(n))
                       for n in self.space.stalks[y2].names]
            psi = _AlgHom(T, Om2, images)
            if not psi.is_isomorphism():
                undecided.append((y1, y2))
                continue
            BC = base_change_module(self.sheaf.stalks[m1], rX)
            h = ModHom(BC, self.sheaf.stalks[m2], self.sheaf.matrix(m1, m2))
            if not h.is_isomorphism():
                failing.append((y1, y2))
        return (not failing and not undecided), failing, undecided


def tilde(space, M=None, witness=None):
    """The quasi-coherent sheaf associated with a module over the presented
    section ring: stalk at x is M (x)_{O(X)} O_x."""
    R, maps = witness if witness is not None else sections_presented(space)
    if M is None:
        M = FpModule.free(R, 1, shifts=(0,) if R.pres_weights() is not None
                          else None)
    if M.algebra is not R and not M.algebra.same_presentation(R):
        raise ValueError("module is not over the section ring")
    stalks = {p: base_change_module(M, maps[p]) for p in space.points}
    matrices = {}
    for (x, y) in space.edges:
        A = space.stalks[y]
        matrices[(x, y)] = [[A.one() if i == j else A.zero()
                             for j in range(M.ngens)] for i in range(M.ngens)]
    return SheafModule(space, stalks, matrices)


def ideal_sheaf(space, global_elements, witness=None):
    """Quasi-coherent ideal generated by elements of the presented section
    ring; returns (sheaf, inclusion into the structure sheaf)."""
    R, maps = witness if witness is not None else sections_presented(space)
    stalks, incls, matrices = {}, {}, {}
    gens = list(global_elements)
    for p in space.points:
        A = space.stalks[p]
        elems = [maps[p].apply(g if isinstance(g, AlgElem) else R.element(g))
                 for g in gens]
        I, incl = ideal_module(A, elems)
        stalks[p], incls[p] = I, incl
    for (x, y) in space.edges:
        A = space.stalks[y]
        n = len(gens)
        matrices[(x, y)] = [[A.one() if i == j else A.zero() for j in range(n)]
                            for i in range(n)]
    I = SheafModule(space, stalks, matrices)
    from .fixtures import structure_sheaf  # local import to avoid a cycle
    O = structure_sheaf(space)
    incl = SheafModHom(I, O, incls)
    return I, incl


def ideal_module(algebra, elements):
    """The ideal (elements) as an FpModule with its inclusion into A^1."""
    free = FpModule.free(algebra, 1,
                         shifts=(0,) if algebra.pres_weights() is not None
                         else None)
    elems = [algebra._coerce_base(e) if isinstance(e, Poly) else e
             for e in elements]
    elems = [algebra.element(e) if isinstance(e, Poly) else e for e in elems]
    from .modgb import syzygy_basis
    cols = [vec_from_polys([e.poly]) for e in elems]
    idl = []
    for g in algebra.ideal_gens():
        idl.append(vec_from_polys([g]))
    syz = syzygy_basis(algebra.field, cols + idl, 1, algebra.pres_ring.nvars)
    rels = []
    for s in syz:
        row = [algebra.pres_ring.zero()] * len(elems)
        for (pos, e), c in s.items():
            if pos < len(elems):
                row[pos] = row[pos] + algebra.pres_ring.monomial(e, c)
        row = tuple(AlgElem(algebra, p) for p in row)
        if any(not v.is_zero() for v in row):
            rels.append(row)
    shifts = None
    if algebra.pres_weights() is not None:
        degs = [e.weighted_degree() for e in elems]
        if all(d is not None for d in degs):
            shifts = tuple(degs)
    I = FpModule(algebra, len(elems), rels, shifts)
    incl = ModHom(I, free, [(e,) for e in elems])
    return I, incl


# ----------------------------------------------------------------------
# radicals
# ----------------------------------------------------------------------

def _univariate_gcd(f, g):
    order = GREVLEX
    while not g.is_zero():
        r = f
        # remainder of univariate division
        while not r.is_zero() and r.lead(order)[0][0] >= g.lead(order)[0][0]:
            le, lc = g.lead(order)
            re, rc = r.lead(order)
            ring = f.ring
            mono = ring.monomial((re[0] - le[0],), ring.field.div(rc, lc))
            r = r - mono * g
        f, g = g, r
    return f


def _derivative(f, i=0):
    ring = f.ring
    out = {}
    for e, c in f.terms.items():
        if e[i]:
            ee = list(e)
            k = ee[i]
            ee[i] -= 1
            coeff = ring.field.mul(c, ring.field.of_int(k))
            if coeff:
                out[tuple(ee)] = coeff
    return Poly(ring, out)


def squarefree_part(f):
    """Univariate squarefree part, characteristic-aware."""
    ring = f.ring
    if f.is_zero() or f.is_constant():
        return f
    fp = _derivative(f)
    if fp.is_zero():
        # char p and f = g(x^p): take p-th root of exponents (F_p coefficients
        # are fixed by Frobenius)
        p = ring.field.p
        g = Poly(ring, {(e[0] // p,): c for e, c in f.terms.items()})
        return squarefree_part(g)
    g = _univariate_gcd(f, fp)
    if g.is_constant():
        return f
    q = divide_exact(f, g.monic(GREVLEX))
    if q is None:
        q = f
    sf = squarefree_part(g)
    extra = divide_exact(sf, _univariate_gcd(q, sf).monic(GREVLEX))
    return q * (extra if extra is not None else ring.one())


def radical_membership(algebra, f, ideal_elems):
    """f in rad(ideal) inside the algebra (Rabinowitsch)."""
    big = PolyRing(algebra.field, ("@r",) + algebra.pres_ring.names)
    gens = [embed_poly(g, big, 1) for g in algebra.ideal_gens()]
    gens += [embed_poly(e.poly, big, 1) for e in ideal_elems]
    gens.append(big.one() - big.var(0) * embed_poly(f.poly, big, 1))
    return is_unit_ideal(groebner_basis(gens, GREVLEX))


def radical_ideal_elements(algebra, elements, degree_bound=12):
    """(generators of rad(elements), certified flag).

    Exact in the univariate and monomial cases; otherwise a bounded search
    adds radical members of degree <= degree_bound and reports certified
    False.
    """
    elems = [algebra.element(e) if isinstance(e, Poly) else e for e in elements]
    if radical_contains_one_local(algebra, elems):
        return [algebra.one()], True
    if algebra.nvars <= 1 and not algebra.relations:
        f = algebra.base_ring.zero()
        firsts = []
        for e in elems:
            num, _den = e.fraction_view()
            firsts.append(num)
        g = firsts[0] if firsts else algebra.base_ring.zero()
        for h in firsts[1:]:
            g = _univariate_gcd(g, h)
        if g.is_zero():
            return [algebra.zero()], True
        return [algebra.element(squarefree_part(g).monic(GREVLEX))], True
    nfs = [e.nf() for e in elems]
    if all(len(f.terms) == 1 for f in nfs if not f.is_zero()):
        # monomial ideal: radical is generated by the squarefree supports
        out = []
        for f in nfs:
            if f.is_zero():
                continue
            (e, _c), = f.terms.items()
            sq = tuple(1 if k else 0 for k in e)
            out.append(AlgElem(algebra, algebra.pres_ring.monomial(sq)))
        return (out or [algebra.zero()]), True
    # bounded search over low-degree monomials
    found = list(elems)
    added = True
    while added:
        added = False
        for e in _monomials_up_to(algebra.base_ring, degree_bound):
            cand = algebra.element(e)
            if radical_membership(algebra, cand, found):
                coeffs = lift_coefficients(
                    FpModule.free(algebra, 1), [(v,) for v in found], (cand,))
                if coeffs is None:
                    found.append(cand)
                    added = True
    return found, False


def radical_contains_one_local(algebra, elems):
    gens = algebra.ideal_gens() + [e.poly for e in elems]
    return is_unit_ideal(groebner_basis(gens, GREVLEX))


def _monomials_up_to(ring, d):
    def rec(i, remaining):
        if i == ring.nvars:
            yield (0,) * 0
            return
        for k in range(remaining + 1):
            for rest in rec(i + 1, remaining - k):
                yield (k,) + rest
    for total in range(1, d + 1):
        for e in rec(0, total):
            if sum(e) == total:
                yield ring.monomial(e)


def radical_ideal_sheaf(I_sheaf, incl, degree_bound=12, require_certified=True):
    """Pointwise radical of a quasi-coherent ideal; DegreeBoundExceeded when a
    stalk radical cannot be certified within the bound."""
    space = I_sheaf.space
    stalks, incls, matrices = {}, {}, {}
    O = incl.target
    for p in space.points:
        A = space.stalks[p]
        elems = [row[0] for row in incl.maps[p].images]
        rad, certified = radical_ideal_elements(A, elems, degree_bound)
        if not certified and require_certified:
            raise DegreeBoundExceeded(
                f"radical at {p} not certified within degree {degree_bound}")
        I, inc = ideal_module(A, rad)
        stalks[p], incls[p] = I, inc
    for (x, y) in space.edges:
        rows = []
        gens_x = [row[0] for row in incls[x].images]
        gens_y = [row[0] for row in incls[y].images]
        r = space.restriction(x, y)
        My = stalks[y]
        for g in gens_x:
            w = (r.apply(g),)
            coeffs = lift_coefficients(FpModule.free(space.stalks[y], 1),
                                       [(v,) for v in gens_y], w)
            if coeffs is None:
                raise ValueError("radical is not a subsheaf (unexpected)")
            rows.append(tuple(coeffs))
        matrices[(x, y)] = rows
    R = SheafModule(space, stalks, matrices)
    rincl = SheafModHom(R, O, incls)
    return R, rincl
