"""Finite ringed posets (preorders with localized-algebra stalks) and their
morphisms, plus the geometric constructions: open subspaces, Kolmogorov
quotient, products, fiber products, cylinders and point adjunction.

The order is stored through a generating edge set; each edge carries the
restriction homomorphism.  Restrictions between arbitrary comparable points
are composites along an edge path; `validate` certifies that the choice of
path does not matter (checked on algebra generators).
"""

from .errors import NotOpen, SectionsNotPresented
from .algebras import LocAlgebra, AlgHom, AlgElem, tensor_algebras


class FinSpace:
    def __init__(self, points, edges, stalks, sections_witness=None):
        """points: ordered names; edges: dict (x, y) -> AlgHom O_x -> O_y for a
        generating set of the preorder; stalks: dict point -> LocAlgebra."""
        self.points = tuple(points)
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate point names")
        self.stalks = dict(stalks)
        self.edges = dict(edges)
        for (x, y), h in self.edges.items():
            if h.source is not self.stalks[x] or h.target is not self.stalks[y]:
                raise ValueError(f"edge ({x},{y}) hom endpoints mismatch")
        self._leq = self._closure()
        self._restr_cache = {}
        self._chains = None
        self.sections_witness = sections_witness  # (LocAlgebra, {point: AlgHom})

    # -- order ----------------------------------------------------------

    def _closure(self):
        leq = {x: {x} for x in self.points}
        for (x, y) in self.edges:
            leq[x].add(y)
        changed = True
        while changed:
            changed = False
            for x in self.points:
                grow = set()
                for y in leq[x]:
                    grow |= leq[y]
                if not grow <= leq[x]:
                    leq[x] |= grow
                    changed = True
        return {x: frozenset(s) for x, s in leq.items()}

    def leq(self, x, y):
        return y in self._leq[x]

    def lt(self, x, y):
        return x != y and self.leq(x, y)

    def equiv(self, x, y):
        return self.leq(x, y) and self.leq(y, x)

    def up_set(self, x):
        """U_x, the minimal open neighbourhood."""
        return self._leq[x]

    def is_open(self, pts):
        pts = set(pts)
        return all(self.up_set(x) <= pts for x in pts)

    def minimal_points(self, pts=None):
        pts = set(self.points if pts is None else pts)
        return [x for x in self.points if x in pts
                and not any(self.lt(y, x) for y in pts)]

    def maximal_points(self, pts=None):
        pts = set(self.points if pts is None else pts)
        return [x for x in self.points if x in pts
                and not any(self.lt(x, y) for y in pts)]

    def minimum(self, pts=None):
        pts = set(self.points if pts is None else pts)
        for x in pts:
            if all(self.leq(x, y) for y in pts):
                return x
        return None

    def is_t0(self):
        return not any(self.equiv(x, y) for x in self.points
                       for y in self.points if x != y)

    def intersection_open(self, x, y):
        """U_xy = U_x cap U_y."""
        return self.up_set(x) & self.up_set(y)

    def strict_chains(self):
        """All strict chains x_0 < ... < x_n, grouped by length n; cached."""
        if self._chains is None:
            chains = {0: [(x,) for x in self.points]}
            n = 0
            while chains[n]:
                nxt = []
                for c in chains[n]:
                    last = c[-1]
                    for y in self.points:
                        if self.lt(last, y):
                            nxt.append(c + (y,))
                n += 1
                chains[n] = nxt
            del chains[n]
            self._chains = chains
        return self._chains

    def dim(self):
        return max(self.strict_chains()) if self.points else -1

    # -- restrictions ----------------------------------------------------

    def edge_path(self, x, y):
        """A fixed list of edges composing to the canonical O_x -> O_y."""
        if not self.leq(x, y):
            raise ValueError(f"{x} <= {y} fails")
        if x == y:
            return []
        prev = {x: None}
        queue = [x]
        while queue and y not in prev:
            cur = queue.pop(0)
            for (a, b) in sorted(self.edges):
                if a == cur and b not in prev:
                    prev[b] = (cur, (a, b))
                    queue.append(b)
        if y not in prev:
            raise ValueError(
                f"no edge path {x} -> {y}; edges do not generate the order")
        path = []
        cur = y
        while prev[cur] is not None:
            cur, e = prev[cur]
            path.append(e)
        path.reverse()
        return path

    def restriction(self, x, y):
        """O_x -> O_y along the canonical edge path (validate() certifies
        that the choice of path does not matter)."""
        key = (x, y)
        if key in self._restr_cache:
            return self._restr_cache[key]
        path = self.edge_path(x, y)
        if not path:
            h = AlgHom.identity(self.stalks[x])
        else:
            h = self.edges[path[0]]
            for e in path[1:]:
                h = self.edges[e].compose(h)
        self._restr_cache[key] = h
        return h

    # -- validation --------------------------------------------------------

    def validate(self):
        """Defect report (empty list = valid)."""
        problems = []
        for (x, y), h in self.edges.items():
            if not self.leq(x, y):
                problems.append(f"edge ({x},{y}) not in the order")
            for p in h.validate():
                problems.append(f"edge ({x},{y}): {p}")
            w = self.stalks[x].weights
            if w is not None and self.stalks[y].weights is not None:
                for n, im in zip(h.source.names, h.images):
                    d = im.weighted_degree()
                    expect = w[h.source.names.index(n)]
                    if not im.is_zero() and d is not None and d != expect:
                        problems.append(
                            f"edge ({x},{y}): image of {n} has degree {d}, expected {expect}")
        # path independence: canon(m,y) o edge(x,m) == canon(x,y)
        for x in self.points:
            for y in self._leq[x]:
                canon = self.restriction(x, y)
                for (a, m), h in self.edges.items():
                    if a != x or not self.leq(m, y):
                        continue
                    comp = self.restriction(m, y).compose(h)
                    if not _homs_agree(comp, canon):
                        problems.append(
                            f"restriction squares at {x}<={m}<={y} do not commute")
        if self.sections_witness is not None:
            R, maps = self.sections_witness
            for x in self.points:
                if x not in maps:
                    problems.append(f"sections witness misses point {x}")
            for (x, y) in self.edges:
                if x in maps and y in maps:
                    if not _homs_agree(self.edges[(x, y)].compose(maps[x]), maps[y]):
                        problems.append(f"sections witness does not commute at ({x},{y})")
        return problems

    def __repr__(self):
        return f"FinSpace({len(self.points)} points)"


def _homs_agree(h1, h2):
    """Equality of parallel algebra maps on generators."""
    if h1.source.names != h2.source.names:
        return False
    return all(a == b for a, b in zip(h1.images, h2.images))


class SpaceMap:
    def __init__(self, source, target, point_map, comorphisms):
        self.source = source
        self.target = target
        self.point_map = dict(point_map)
        self.comorphisms = dict(comorphisms)  # x -> AlgHom O'_{f(x)} -> O_x

    @classmethod
    def identity(cls, space):
        return cls(space, space, {x: x for x in space.points},
                   {x: AlgHom.identity(space.stalks[x]) for x in space.points})

    def __call__(self, x):
        return self.point_map[x]

    def comorphism(self, x):
        return self.comorphisms[x]

    def compose(self, other):
        """self o other: other.source -> self.target."""
        pm = {x: self.point_map[other.point_map[x]] for x in other.source.points}
        co = {}
        for x in other.source.points:
            co[x] = other.comorphisms[x].compose(self.comorphisms[other.point_map[x]])
        return SpaceMap(other.source, self.target, pm, co)

    def validate(self):
        problems = []
        for x in self.source.points:
            if self.point_map.get(x) not in self.target.points:
                problems.append(f"point {x} maps outside the target")
                return problems
        for x in self.source.points:
            for y in self.source.points:
                if self.source.leq(x, y) and not self.target.leq(self(x), self(y)):
                    problems.append(f"not monotone at {x} <= {y}")
        for x in self.source.points:
            h = self.comorphisms[x]
            if h.source is not self.target.stalks[self(x)] or \
                    h.target is not self.source.stalks[x]:
                problems.append(f"comorphism at {x} has wrong endpoints")
                return problems
            for p in h.validate():
                problems.append(f"comorphism at {x}: {p}")
        for x in self.source.points:
            for y in self.source.points:
                if not self.source.lt(x, y):
                    continue
                left = self.source.restriction(x, y).compose(self.comorphisms[x])
                right = self.comorphisms[y].compose(
                    self.target.restriction(self(x), self(y)))
                if not _homs_agree(left, right):
                    problems.append(f"comorphism square at {x} <= {y} does not commute")
        return problems

    def literally_equal(self, other):
        """Same point map and comorphisms agreeing on generators."""
        if self.source is not other.source and \
                set(self.source.points) != set(other.source.points):
            return False
        if self.point_map != other.point_map:
            return False
        return all(_homs_agree(self.comorphisms[x], other.comorphisms[x])
                   for x in self.source.points)

    def preimage(self, pts):
        pts = set(pts)
        return {x for x in self.source.points if self.point_map[x] in pts}

    def image(self):
        return {self.point_map[x] for x in self.source.points}

    def __repr__(self):
        return f"SpaceMap({self.source} -> {self.target})"


# ----------------------------------------------------------------------
# constructions
# ----------------------------------------------------------------------

def open_subspace(space, pts):
    """The open subspace on the upward-closed set `pts`, with its inclusion."""
    pts = [p for p in space.points if p in set(pts)]
    if not space.is_open(pts):
        raise NotOpen(f"{pts} is not upward closed")
    sub = FinSpace(pts,
                   {(x, y): h for (x, y), h in space.edges.items()
                    if x in pts and y in pts},
                   {p: space.stalks[p] for p in pts})
    incl = SpaceMap(sub, space, {p: p for p in pts},
                    {p: AlgHom.identity(space.stalks[p]) for p in pts})
    return sub, incl


def minimal_open(space, x):
    return space.up_set(x)


def u_xy(space, x, y):
    return space.intersection_open(x, y)


def kolmogorov_quotient(space):
    """Identify preorder-equivalent points; returns (quotient, quotient map)."""
    # deterministic representative: first equivalent point in point order
    rep = {x: next(y for y in space.points if space.equiv(x, y))
           for x in space.points}
    classes = []
    for x in space.points:
        if rep[x] == x:
            classes.append(x)
    edges = {}
    for (x, y), h in space.edges.items():
        a, b = rep[x], rep[y]
        if a != b and (a, b) not in edges:
            edges[(a, b)] = space.restriction(a, b)
    quot = FinSpace(classes, edges, {c: space.stalks[c] for c in classes},
                    space.sections_witness)
    qmap = SpaceMap(space, quot, {x: rep[x] for x in space.points},
                    {x: space.restriction(rep[x], x) for x in space.points})
    return quot, qmap


def product_over_ring(X, Y, over=None, sX=None, sY=None):
    """X x_R Y: product preorder, stalk at (x,y) is O_x (x)_R O_y.

    over=None tensors over the common base field; otherwise `over` is a
    LocAlgebra and sX/sY give structure maps per point (dicts point->AlgHom).
    Returns (product, projections are not ringed maps in general so only the
    space is returned).
    """
    points = [_pair_name(x, y) for x in X.points for y in Y.points]
    stalks, injections = {}, {}
    for x in X.points:
        for y in Y.points:
            fA = sX[x] if sX else None
            fB = sY[y] if sY else None
            T, iA, iB = tensor_algebras(X.stalks[x], Y.stalks[y], over, fA, fB)
            p = _pair_name(x, y)
            stalks[p] = T
            injections[p] = (iA, iB)
    edges = {}
    for x in X.points:
        for y in Y.points:
            p = _pair_name(x, y)
            for (a, b), hX in X.edges.items():
                if a == x:
                    q = _pair_name(b, y)
                    edges[(p, q)] = _tensor_edge(
                        stalks[p], injections[p], stalks[q], injections[q],
                        hX, AlgHom.identity(Y.stalks[y]))
            for (a, b), hY in Y.edges.items():
                if a == y:
                    q = _pair_name(x, b)
                    edges[(p, q)] = _tensor_edge(
                        stalks[p], injections[p], stalks[q], injections[q],
                        AlgHom.identity(X.stalks[x]), hY)
    return FinSpace(points, edges, stalks), injections


def _pair_name(x, y):
    return f"({x},{y})"


def _tensor_edge(T1, inj1, T2, inj2, hA, hB):
    """Map T1 = A1 (x) B1 -> T2 = A2 (x) B2 induced by hA: A1->A2, hB: B1->B2."""
    iA2, iB2 = inj2
    images = []
    for n in hA.source.names:
        images.append(iA2.apply(hA.apply(hA.source.var(n))))
    for n in hB.source.names:
        images.append(iB2.apply(hB.apply(hB.source.var(n))))
    kind, extra = "general", ()
    if hA.kind == "localization" and hB.kind == "localization":
        kind = "localization"
        na = hA.source.nvars
        from .poly import embed_poly
        ex = [embed_poly(e, T1.base_ring, 0) for e in hA.extra]
        ex += [embed_poly(e, T1.base_ring, na) for e in hB.extra]
        extra = tuple(ex)
    return AlgHom(T1, T2, images, kind, extra)


def fiber_product(f, g):
    """X x_Y X' for f: X->Y, g: X'->Y schematic; returns
    (space, proj1, proj2).  Points: pairs with f(x) = g(x'); stalks
    O_x (x)_{O_{f(x)}} O_{x'}.

    Edge maps are declared localizations when both component restrictions
    are.  That declaration is justified by the schematicity precondition on
    the target: its restrictions are flat epimorphisms (the tensor-collapse
    identity), so the tensor over the lower base already equals the tensor
    over the upper one and localizing the two legs is all that happens.
    validate() re-checks the declarations on demand."""
    X, Xp, Y = f.source, g.source, f.target
    pairs = [(x, xp) for x in X.points for xp in Xp.points
             if f(x) == g(xp)]
    points = [_pair_name(x, xp) for (x, xp) in pairs]
    stalks, injections = {}, {}
    for (x, xp) in pairs:
        y = f(x)
        T, iA, iB = tensor_algebras(X.stalks[x], Xp.stalks[xp],
                                    Y.stalks[y], f.comorphisms[x], g.comorphisms[xp])
        p = _pair_name(x, xp)
        stalks[p] = T
        injections[p] = (iA, iB)
    edges = {}
    for (x, xp) in pairs:
        p = _pair_name(x, xp)
        for (x2, xp2) in pairs:
            if (x, xp) == (x2, xp2):
                continue
            if X.leq(x, x2) and Xp.leq(xp, xp2):
                q = _pair_name(x2, xp2)
                edges[(p, q)] = _tensor_edge(
                    stalks[p], injections[p], stalks[q], injections[q],
                    X.restriction(x, x2), Xp.restriction(xp, xp2))
    P = FinSpace(points, edges, stalks)
    proj1 = SpaceMap(P, X, {_pair_name(x, xp): x for (x, xp) in pairs},
                     {_pair_name(x, xp): injections[_pair_name(x, xp)][0]
                      for (x, xp) in pairs})
    proj2 = SpaceMap(P, Xp, {_pair_name(x, xp): xp for (x, xp) in pairs},
                     {_pair_name(x, xp): injections[_pair_name(x, xp)][1]
                      for (x, xp) in pairs})
    return P, proj1, proj2


def cylinder(f):
    """C(f) = X disjoint-union Y with x > y iff f(x) >= y.

    Returns (C, include_X, retraction_F) with F o include_X = f.
    """
    X, Y = f.source, f.target
    clash = set(X.points) & set(Y.points)
    xname = (lambda p: f"X:{p}") if clash else (lambda p: p)
    yname = (lambda q: f"Y:{q}") if clash else (lambda q: q)
    points = [yname(q) for q in Y.points] + [xname(p) for p in X.points]
    stalks = {yname(q): Y.stalks[q] for q in Y.points}
    stalks.update({xname(p): X.stalks[p] for p in X.points})
    edges = {}
    for (a, b), h in Y.edges.items():
        edges[(yname(a), yname(b))] = h
    for (a, b), h in X.edges.items():
        edges[(xname(a), xname(b))] = h
    for p in X.points:
        edges[(yname(f(p)), xname(p))] = f.comorphisms[p]
    C = FinSpace(points, edges, stalks)
    incl = SpaceMap(X, C, {p: xname(p) for p in X.points},
                    {p: AlgHom.identity(X.stalks[p]) for p in X.points})
    retr = SpaceMap(C, Y,
                    {**{yname(q): q for q in Y.points},
                     **{xname(p): f(p) for p in X.points}},
                    {**{yname(q): AlgHom.identity(Y.stalks[q]) for q in Y.points},
                     **{xname(p): f.comorphisms[p] for p in X.points}})
    return C, incl, retr


def sections_presented(space, pts=None):
    """(R, {point: AlgHom R -> O_x}) for the open set `pts` (default: X).

    Available when the open set has a minimum, or (for the whole space) when
    a sections witness is attached.  Raises SectionsNotPresented otherwise.
    """
    pts = list(space.points) if pts is None else [p for p in space.points
                                                  if p in set(pts)]
    m = space.minimum(pts)
    if m is not None:
        return space.stalks[m], {x: space.restriction(m, x) for x in pts}
    if set(pts) == set(space.points) and space.sections_witness is not None:
        R, maps = space.sections_witness
        return R, dict(maps)
    raise SectionsNotPresented(
        f"open set {pts} has no minimum and no sections witness")


def sections_membership(space, pts, values):
    """Does a family {x: element of O_x for x in pts} lie in the equalizer
    O(U)?  This is the membership half of the limit representation."""
    pts = [p for p in space.points if p in set(pts)]
    if not space.is_open(pts):
        raise NotOpen(f"{pts} is not upward closed")
    for x in pts:
        for y in pts:
            if x == y or not space.leq(x, y):
                continue
            if space.restriction(x, y).apply(values[x]) != values[y]:
                return False
    return True


def adjoin_point(space, pts, name="u"):
    """X' = X + {u} with u below exactly the open set `pts` and above the
    points under all of `pts`; the new stalk is the presented section ring
    of `pts`, which makes u removable."""
    if not space.is_open(pts):
        raise NotOpen(f"{sorted(pts)} is not upward closed")
    R, maps = sections_presented(space, pts)
    while name in space.points:
        name += "'"
    pts = [p for p in space.points if p in set(pts)]
    below = [x for x in space.points
             if all(space.leq(x, y) for y in pts)]
    points = list(space.points) + [name]
    stalks = dict(space.stalks)
    stalks[name] = R
    edges = dict(space.edges)
    for p in space.minimal_points(pts):
        edges[(name, p)] = maps[p]
    m = space.minimum(pts)
    for x in space.maximal_points(below):
        # O_x -> R: with a minimum m this is the restriction into O_m = R
        if m is None:
            raise SectionsNotPresented(
                f"cannot form the map O_{x} -> O(U) without a minimum in U")
        edges[(x, name)] = space.restriction(x, m)
    return FinSpace(points, edges, stalks, space.sections_witness)


# ----------------------------------------------------------------------
# isomorphism checking
# ----------------------------------------------------------------------

def _stalk_signature(space, x):
    ups = sum(1 for y in space.points if space.lt(x, y))
    downs = sum(1 for y in space.points if space.lt(y, x))
    return (ups, downs)


def _strip_suffix(name):
    base, _, tail = name.rpartition("_")
    if base and tail.isdigit():
        return base
    return name


def _candidate_images(A, B):
    """Variable assignments worth trying for a map A -> B."""
    tries = []
    if set(A.names) <= set(B.names):
        tries.append([B.var(n) for n in A.names])
    stripped = [_strip_suffix(n) for n in A.names]
    if set(stripped) <= set(B.names):
        tries.append([B.var(n) for n in stripped])
    if A.nvars == B.nvars:
        tries.append([B.var(B.names[i]) for i in range(A.nvars)])
    return tries


def _try_stalk_iso(A, B):
    """An isomorphism A -> B by matching variable names (exact, tensor-suffix
    stripped, or positional)."""
    if A.field != B.field:
        return None
    for images in _candidate_images(A, B):
        h = AlgHom(A, B, images)
        if any(not h.apply_base(r).is_zero() for r in A.relations):
            continue
        if any(B.unit_inverse(h.apply_base(s)) is None for s in A.inverted):
            continue
        if h.is_isomorphism():
            return h
    return None


def find_isomorphism(X, Y):
    """An isomorphism witness between X and Y (returned as a SpaceMap Y -> X
    whose comorphisms are the stalk isomorphisms O_{X,x} -> O_{Y,y}), or None.

    Searches order-compatible point bijections (pruned by stalk signatures)
    and certifies stalk isomorphisms edge-compatibly.  This is an explicit
    witness search, not a canonical form; a None answer on exotic stalk
    presentations only means no isomorphism was found.
    """
    if len(X.points) != len(Y.points):
        return None
    sigX = {x: _stalk_signature(X, x) for x in X.points}
    sigY = {y: _stalk_signature(Y, y) for y in Y.points}

    def bijections(assign, remaining):
        if not remaining:
            yield dict(assign)
            return
        x = remaining[0]
        for y in Y.points:
            if y in assign.values() or sigX[x] != sigY[y]:
                continue
            if any(X.leq(a, x) != Y.leq(b, y) or X.leq(x, a) != Y.leq(y, b)
                   for a, b in assign.items()):
                continue
            assign[x] = y
            yield from bijections(assign, remaining[1:])
            del assign[x]

    for pm in bijections({}, list(X.points)):
        isos = {}
        for x, y in pm.items():
            h = _try_stalk_iso(X.stalks[x], Y.stalks[y])
            if h is None:
                break
            isos[x] = h
        if len(isos) != len(X.points):
            continue
        # commuting with restrictions
        if any(not _homs_agree(isos[b].compose(h),
                               Y.restriction(pm[a], pm[b]).compose(isos[a]))
               for (a, b), h in X.edges.items()):
            continue
        fwd = SpaceMap(Y, X, {pm[x]: x for x in X.points},
                       {pm[x]: isos[x] for x in X.points})
        if not fwd.validate():
            return fwd
    return None
