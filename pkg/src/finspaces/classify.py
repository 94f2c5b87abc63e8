"""Decision procedures for the space and morphism classes.

Everything reduces to one primitive: is a ring map into a finite product of
stalks faithfully flat?  For localization-presented data the answer is the
radical cover criterion (complete); a nonzero kernel refutes; window-bounded
nonvanishing H^1 refutes affineness.  `Undecided` is a first-class verdict -
flatness of a general map is never guessed.
"""

from .errors import NotLocalizationPresented, SectionsNotPresented
from .algebras import (AlgHom, AlgElem, tensor_algebras, decide_faithfully_flat,
                       certify_localization, FFVerdict)
from .poly import embed_poly
from .spaces import (FinSpace, SpaceMap, open_subspace, kolmogorov_quotient,
                     sections_presented, cylinder)
from .cohomology import cohomology, DEFAULT_WINDOW


class ClassReport:
    """verdict True / False / None (undecided), with per-criterion evidence
    rows (criterion, location, status)."""

    def __init__(self, name):
        self.name = name
        self.evidence = []
        self._false = False
        self._undecided = []

    def record(self, criterion, location, verdict):
        if isinstance(verdict, FFVerdict):
            if verdict.undecided:
                status = "undecided"
            else:
                status = "pass" if verdict.value else "fail"
            reason = verdict.reason
        elif verdict is None:
            status, reason = "undecided", ""
        else:
            status, reason = ("pass" if verdict else "fail"), ""
        self.evidence.append((criterion, location, status))
        if status == "fail":
            self._false = True
        elif status == "undecided":
            self._undecided.append((criterion, location, reason))
        return status

    def skip(self, criterion, location):
        self.evidence.append((criterion, location, "skip"))

    @property
    def verdict(self):
        if self._false:
            return False
        if self._undecided:
            return None
        return True

    @property
    def undecided_reasons(self):
        return list(self._undecided)

    def __bool__(self):
        return self.verdict is True

    def __repr__(self):
        v = {True: "true", False: "false", None: "Undecided"}[self.verdict]
        return f"ClassReport({self.name}: {v}, {len(self.evidence)} checks)"

    def to_tree(self):
        v = self.verdict
        return {
            "name": self.name,
            "verdict": "true" if v is True else "false" if v is False else "undecided",
            "evidence": [{"criterion": c, "location": l, "status": s}
                         for (c, l, s) in self.evidence],
        }


def _embed_left(T, A, polys):
    return [embed_poly(p, T.base_ring, 0) for p in polys]


def _embed_right(T, A, polys):
    return [embed_poly(p, T.base_ring, A.nvars) for p in polys]


def _pair_cover_verdict(space, B, iA, iB, y, yp, zs):
    """Faithful flatness of O_y (x) O_y' -> prod_{z in zs} O_z, where the
    tensor legs restrict into each O_z through the space."""
    homs, cands = [], []
    for z in zs:
        rl = space.restriction(y, z)
        rr = space.restriction(yp, z)
        images = [rl.apply(rl.source.var(n)) for n in rl.source.names]
        images += [rr.apply(rr.source.var(n)) for n in rr.source.names]
        homs.append(AlgHom(B, space.stalks[z], images))
        cand = []
        if rl.kind == "localization":
            cand += _embed_left(B, rl.source, rl.extra)
        if rr.kind == "localization":
            cand += _embed_right(B, rl.source, rr.extra)
        cands.append(cand)
    return decide_faithfully_flat(B, homs, cands)


def is_fr_space(space, flat_certificates=()):
    """Every restriction flat: localization edges are flat by construction;
    a General edge needs a user certificate or leaves the verdict undecided."""
    rep = ClassReport("fr-space")
    certs = set(flat_certificates)
    for (x, y), h in space.edges.items():
        if h.kind == "localization" or (x, y) in certs:
            rep.record("restriction is flat", f"({x},{y})", True)
        else:
            rep.record("restriction is flat", f"({x},{y})", None)
    if not space.edges:
        rep.record("restriction is flat", "(no edges)", True)
    return rep


def is_schematic(space):
    """Every minimal open is affine, tested triple by triple:
    O_y (x)_{O_x} O_y' -> prod_{z in U_yy'} O_z must be faithfully flat
    for every x <= y, y'."""
    rep = ClassReport("schematic")
    pts = space.points
    seen = set()
    for x in pts:
        above = sorted(space.up_set(x), key=pts.index)
        for i, y in enumerate(above):
            for yp in above[i:]:
                key = (x, y, yp)
                if key in seen:
                    continue
                seen.add(key)
                ry = space.restriction(x, y)
                ryp = space.restriction(x, yp)
                B, iA, iB = tensor_algebras(space.stalks[y], space.stalks[yp],
                                            space.stalks[x], ry, ryp)
                zs = sorted(space.intersection_open(y, yp), key=pts.index)
                v = _pair_cover_verdict(space, B, iA, iB, y, yp, zs)
                rep.record("tensor cover faithfully flat",
                           f"x={x}, y={y}, y'={yp}", v)
    return rep


def is_affine(space, window=DEFAULT_WINDOW, use_serre_refutation=True):
    """Two conditions: the section ring covers the stalks faithfully
    flatly, and every pairwise tensor covers its intersection open; a
    window-bounded H^{>0} refutation stands in when either escapes to
    Undecided."""
    rep = ClassReport("affine")
    try:
        R, maps = sections_presented(space)
    except SectionsNotPresented:
        rep.record("sections presented", "O(X)", None)
        _serre_refute(space, rep, window, use_serre_refutation)
        return rep
    hom_list = [maps[x] for x in space.points]
    cands = [list(h.extra) if h.kind == "localization" else []
             for h in hom_list]
    v1 = decide_faithfully_flat(R, hom_list, cands)
    rep.record("O(X) -> prod of stalks faithfully flat", "all points", v1)
    pts = space.points
    for i, y in enumerate(pts):
        for yp in pts[i:]:
            B, iA, iB = tensor_algebras(space.stalks[y], space.stalks[yp],
                                        R, maps[y], maps[yp])
            zs = sorted(space.intersection_open(y, yp), key=pts.index)
            v = _pair_cover_verdict(space, B, iA, iB, y, yp, zs)
            rep.record("pair tensor cover faithfully flat",
                       f"y={y}, y'={yp}", v)
    if rep.verdict is None:
        _serre_refute(space, rep, window, use_serre_refutation)
    return rep


def _serre_refute(space, rep, window, enabled):
    """If H^i(X, O) != 0 for some i > 0 in the window, X is not affine."""
    if not enabled:
        return
    from .fixtures import structure_sheaf
    try:
        table = cohomology(space, structure_sheaf(space), window=window,
                           min_index=1)
    except Exception:
        rep.skip("H^{>0}(X, O) refutation", "cohomology unavailable")
        return
    bad = any(table.total(i) for i in table.rows() if i > 0)
    if bad:
        rep.record("acyclicity of the structure sheaf", "window", False)
    else:
        rep.skip("H^{>0}(X, O) zero in window (no refutation)", "window")


def is_semiseparated(space, window=DEFAULT_WINDOW):
    """All pairwise intersections U_pq acyclic (window-qualified)."""
    from .fixtures import structure_sheaf
    rep = ClassReport("semiseparated")
    O = structure_sheaf(space)
    pts = space.points
    for i, p in enumerate(pts):
        for q in pts[i:]:
            U = space.intersection_open(p, q)
            if not U:
                rep.record("U_pq acyclic", f"({p},{q}) empty", True)
                continue
            table = cohomology(space, O, window=window, pts=U, min_index=1)
            ok = all(table.total(k) == 0 for k in table.rows() if k > 0)
            rep.record("U_pq acyclic (window)", f"({p},{q})", ok)
    return rep


def removable_points(space):
    """Points whose stalk maps faithfully flatly into the product of the
    strictly-above stalks."""
    out = []
    for x in space.points:
        above = [y for y in space.points if space.lt(x, y)]
        homs = [space.restriction(x, y) for y in above]
        cands = [list(h.extra) if h.kind == "localization" else []
                 for h in homs]
        v = decide_faithfully_flat(space.stalks[x], homs, cands)
        if v.undecided:
            continue  # not certified removable
        if v.value:
            out.append(x)
    return out


def minimal_model(space):
    """(X_M, quotient map X -> Kolmogorov(X), inclusion X_M -> Kolmogorov(X)).

    Removable points are deleted one at a time (first in point order); the
    invariants suite checks order-independence separately.
    """
    quot, qmap = kolmogorov_quotient(space)
    cur = quot
    while True:
        rem = removable_points(cur)
        if not rem:
            break
        keep = [p for p in cur.points if p != rem[0]]
        cur = _delete_points(cur, keep)
    incl = SpaceMap(cur, quot, {p: p for p in cur.points},
                    {p: AlgHom.identity(cur.stalks[p]) for p in cur.points})
    return cur, qmap, incl


def _delete_points(space, keep):
    keep = [p for p in space.points if p in set(keep)]
    kept = set(keep)
    edges = {}
    for x in keep:
        for y in keep:
            if x != y and space.leq(x, y):
                edges[(x, y)] = space.restriction(x, y)
    return FinSpace(keep, edges, {p: space.stalks[p] for p in keep},
                    space.sections_witness)


def space_from_cover(space, cover):
    """Quotient of a space by a finite open cover: points are the classes
    of 'same smallest cover intersection'; returns (Y, quotient map).

    Every class intersection must have presented sections (a minimum)."""
    cover = [frozenset(U) for U in cover]
    for U in cover:
        if not space.is_open(U):
            raise ValueError("cover members must be open")
    u_of = {}
    for s in space.points:
        through = [U for U in cover if s in U]
        if not through:
            raise ValueError(f"point {s} not covered")
        inter = set(space.points)
        for U in through:
            inter &= U
        u_of[s] = frozenset(inter)
    reps = {}
    for s in space.points:
        reps.setdefault(u_of[s], s)
    classes = sorted(set(reps.values()), key=space.points.index)
    minima, stalks = {}, {}
    for r in classes:
        m = space.minimum(u_of[r])
        if m is None:
            raise SectionsNotPresented(
                f"cover class of {r} has no minimum; sections unpresented")
        minima[r] = m
        stalks[r] = space.stalks[m]
    edges = {}
    for a in classes:
        for b in classes:
            if a != b and u_of[b] < u_of[a]:
                edges[(a, b)] = space.restriction(minima[a], minima[b])
    Y = FinSpace(classes, edges, stalks)
    pm = {s: reps[u_of[s]] for s in space.points}
    co = {s: space.restriction(minima[reps[u_of[s]]], s)
          for s in space.points}
    return Y, SpaceMap(space, Y, pm, co)


# ----------------------------------------------------------------------
# morphism classification
# ----------------------------------------------------------------------

def _map_pair_verdict(f, x, y):
    """Graph-tensor cover verdict at x in X, y >= f(x): is
    O_x (x)_{O_{f(x)}} O_y -> prod_{z in U_x cap f^{-1}(U_y)} O_z
    faithfully flat (equivalently surjective on spectra, flatness being
    automatic here)?"""
    X, Y = f.source, f.target
    co = f.comorphisms[x]
    ry = Y.restriction(f(x), y)
    B, iA, iB = tensor_algebras(X.stalks[x], Y.stalks[y],
                                Y.stalks[f(x)], co, ry)
    zs = [z for z in X.points
          if X.leq(x, z) and Y.leq(y, f(z))]
    homs, cands = [], []
    for z in zs:
        rl = X.restriction(x, z)
        rr = f.comorphisms[z].compose(Y.restriction(y, f(z)))
        images = [rl.apply(rl.source.var(n)) for n in rl.source.names]
        images += [rr.apply(rr.source.var(n)) for n in rr.source.names]
        homs.append(AlgHom(B, X.stalks[z], images))
        cand = []
        if rl.kind == "localization":
            cand += _embed_left(B, rl.source, rl.extra)
        if rr.kind == "localization":
            cand += _embed_right(B, rl.source, rr.extra)
        cands.append(cand)
    return decide_faithfully_flat(B, homs, cands)


def map_is_schematic(f):
    rep = ClassReport("schematic morphism")
    for x in f.source.points:
        for y in f.target.points:
            if not f.target.leq(f(x), y):
                continue
            v = _map_pair_verdict(f, x, y)
            rep.record("graph tensor cover faithfully flat", f"x={x}, y={y}", v)
    return rep


def map_is_affine(f, window=DEFAULT_WINDOW, schematic_report=None):
    """Affine: schematic + every f^{-1}(U_y) affine."""
    rep = ClassReport("affine morphism")
    srep = schematic_report or map_is_schematic(f)
    rep.record("schematic", "(all pairs)", srep.verdict)
    for y in f.target.points:
        pre = f.preimage(f.target.up_set(y))
        if not pre:
            rep.record("preimage affine", f"y={y} (empty)",
                       FFVerdict(False, "empty preimage is not affine"))
            continue
        sub, _ = open_subspace(f.source, pre)
        sub_rep = is_affine(sub, window)
        rep.record("preimage affine", f"y={y}", sub_rep.verdict)
    return rep


def map_is_flat(f):
    rep = ClassReport("flat morphism")
    for x in f.source.points:
        co = f.comorphisms[x]
        if co.kind == "localization":
            rep.record("comorphism flat", f"x={x}", True)
        else:
            T = certify_localization(co)
            rep.record("comorphism flat", f"x={x}",
                       True if T is not None else None)
    return rep


def map_is_faithfully_flat(f):
    rep = ClassReport("faithfully flat morphism")
    X, Y = f.source, f.target
    for y in Y.points:
        pre = sorted(f.preimage(Y.up_set(y)), key=X.points.index)
        homs, cands = [], []
        for x in pre:
            h = f.comorphisms[x].compose(Y.restriction(y, f(x)))
            homs.append(h)
            cands.append(list(h.extra) if h.kind == "localization" else [])
        v = decide_faithfully_flat(Y.stalks[y], homs, cands)
        rep.record("stalk cover faithfully flat", f"y={y}", v)
    return rep


def map_is_quasi_iso(f, window=DEFAULT_WINDOW, affine_report=None):
    """Affine + f_* O_X = O_Y (the canonical O_y -> O(f^{-1} U_y) is an
    isomorphism, decided on presented preimages)."""
    rep = ClassReport("quasi-isomorphism")
    arep = affine_report or map_is_affine(f, window)
    rep.record("affine", "(all preimages)", arep.verdict)
    X, Y = f.source, f.target
    for y in Y.points:
        pre = sorted(f.preimage(Y.up_set(y)), key=X.points.index)
        if not pre:
            rep.record("O_y = sections of preimage", f"y={y}",
                       FFVerdict(False, "empty preimage"))
            continue
        m = X.minimum(pre)
        if m is None:
            rep.record("O_y = sections of preimage", f"y={y}", None)
            continue
        h = f.comorphisms[m].compose(Y.restriction(y, f(m)))
        rep.record("O_y = sections of preimage", f"y={y}",
                   h.is_isomorphism())
    return rep


def map_is_quasi_open_immersion(f, schematic_report=None):
    """Cylinder criterion: f is a quasi-open immersion iff C(f) is
    schematic."""
    rep = ClassReport("quasi-open immersion")
    srep = schematic_report or map_is_schematic(f)
    rep.record("schematic", "(all pairs)", srep.verdict)
    if srep.verdict is False:
        return rep
    C, _incl, _retr = cylinder(f)
    crep = is_schematic(C)
    rep.record("cylinder schematic", "C(f)", crep.verdict)
    return rep


def map_is_quasi_closed_immersion(f, window=DEFAULT_WINDOW, affine_report=None):
    """Affine + O_Y -> f_* O_X an epimorphism (surjective on presented
    stalks)."""
    rep = ClassReport("quasi-closed immersion")
    arep = affine_report or map_is_affine(f, window)
    rep.record("affine", "(all preimages)", arep.verdict)
    X, Y = f.source, f.target
    for y in Y.points:
        pre = sorted(f.preimage(Y.up_set(y)), key=X.points.index)
        if not pre:
            rep.record("O_y -> sections surjective", f"y={y} (zero ring)", True)
            continue
        m = X.minimum(pre)
        if m is None:
            rep.record("O_y -> sections surjective", f"y={y}", None)
            continue
        h = f.comorphisms[m].compose(Y.restriction(y, f(m)))
        rep.record("O_y -> sections surjective", f"y={y}", h.is_surjective())
    return rep


def classify_map(f, window=DEFAULT_WINDOW):
    """All morphism class verdicts, reusing shared sub-reports."""
    srep = map_is_schematic(f)
    arep = map_is_affine(f, window, schematic_report=srep)
    return {
        "schematic": srep,
        "affine": arep,
        "flat": map_is_flat(f),
        "faithfully_flat": map_is_faithfully_flat(f),
        "quasi_iso": map_is_quasi_iso(f, window, affine_report=arep),
        "quasi_open_immersion": map_is_quasi_open_immersion(f, schematic_report=srep),
        "quasi_closed_immersion": map_is_quasi_closed_immersion(
            f, window, affine_report=arep),
    }
