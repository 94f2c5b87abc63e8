"""The finite Godement complex and sheaf cohomology.

The complex on an open set U has n-th term the product over strict chains
x_0 < ... < x_n inside U of the stalk at x_n; the differential is the
alternating face sum whose last term pushes through the restriction.  Three
exact evaluation strategies:

  * vector: every stalk finite-dimensional over the base field;
  * graded: per internal degree via certified-finite monomial enumeration;
  * toric: lattice slicing for relation-free monomial data (see toric.py).

Tables carry their window; a graded claim is always window-qualified.
"""

from .errors import InfiniteDimension, UngradedModule
from .linalg import field_rank
from .modules import graded_piece, module_dimension_basis
from .toric import ToricEngine, ToricIneligible


DEFAULT_WINDOW = (-10, 10)


class GodementComplex:
    """Chain bookkeeping for a sheaf on an open subset of its space."""

    def __init__(self, space, sheaf, pts=None):
        self.space = space
        self.sheaf = sheaf
        self.pts = list(space.points) if pts is None else \
            [p for p in space.points if p in set(pts)]
        inside = set(self.pts)
        self.terms = {}
        for n, cs in space.strict_chains().items():
            mine = [c for c in cs if all(q in inside for q in c)]
            if mine:
                self.terms[n] = mine

    def top(self):
        return max(self.terms) if self.terms else -1

    def faces(self, chain):
        """(index, omitted chain) pairs for one chain of length n+1."""
        return [(i, chain[:i] + chain[i + 1:]) for i in range(len(chain))]

    def check_d_squared(self):
        """d o d = 0, verified on the assembled matrices."""
        mats = _vector_matrices(self)
        field = self.space.stalks[self.pts[0]].field
        for n in sorted(mats):
            if n + 1 not in mats:
                break
            a, b = mats[n], mats[n + 1]
            if not a or not b:
                continue
            for row in a:
                img = [field.zero()] * (len(b[0]) if b and b[0] else 0)
                for k, c in enumerate(row):
                    if c and b[k:k+1]:
                        for l, v in enumerate(b[k]):
                            img[l] = field.add(img[l], field.mul(c, v))
                if any(img):
                    return False
        return True


class CohomologyTable:
    """Dimensions of H^i, per internal degree when graded.

    entries: {(i, d): dim} with d=None for ungraded computations; absent
    entries outside the window are unknown, not zero.
    """

    def __init__(self, entries, window=None, backend="", notes=()):
        self.entries = dict(entries)
        self.window = window
        self.backend = backend
        self.notes = tuple(notes)

    def dim(self, i, d=None):
        return self.entries.get((i, d), 0)

    def total(self, i):
        return sum(v for (n, _d), v in self.entries.items() if n == i)

    def max_index(self):
        return max((i for (i, _d) in self.entries), default=-1)

    def degrees(self):
        return sorted({d for (_i, d) in self.entries if d is not None})

    def is_zero_above(self, i0=0):
        return all(v == 0 for (i, _d), v in self.entries.items() if i > i0)

    def rows(self):
        return sorted({i for (i, _d) in self.entries})

    def to_text(self):
        lines = []
        if self.window is not None:
            lines.append(f"window: [{self.window[0]}, {self.window[1]}]"
                         f"  backend: {self.backend}")
            degs = list(range(self.window[0], self.window[1] + 1))
            head = "     " + " ".join(f"{d:>4}" for d in degs) + "   total"
            lines.append(head)
            for i in self.rows():
                cells = " ".join(f"{self.dim(i, d):>4}" for d in degs)
                lines.append(f"H^{i:<2} {cells}   {self.total(i):>5}")
        else:
            lines.append(f"backend: {self.backend}")
            for i in self.rows():
                lines.append(f"H^{i} = {self.dim(i)}")
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines)

    def to_csv(self):
        out = []
        if self.window is not None:
            degs = list(range(self.window[0], self.window[1] + 1))
            out.append("i," + ",".join(str(d) for d in degs) + ",total")
            for i in self.rows():
                out.append(f"{i}," + ",".join(str(self.dim(i, d)) for d in degs)
                           + f",{self.total(i)}")
        else:
            out.append("i,dim")
            for i in self.rows():
                out.append(f"{i},{self.dim(i)}")
        return "\n".join(out) + "\n"

    def to_tree(self):
        ents = [{"i": i, "d": d, "dim": v} for (i, d), v in
                sorted(self.entries.items(), key=lambda kv: (kv[0][0], kv[0][1] if kv[0][1] is not None else 0))]
        return {"window": list(self.window) if self.window else None,
                "backend": self.backend, "entries": ents,
                "notes": list(self.notes)}


def godement(space, sheaf, pts=None):
    return GodementComplex(space, sheaf, pts)


# ----------------------------------------------------------------------
# vector backend
# ----------------------------------------------------------------------

def _vector_matrices(complex_):
    """Differential matrices over the field; stalks must be finite
    dimensional (module_dimension_basis certifies)."""
    space, sheaf = complex_.space, complex_.sheaf
    field = space.stalks[complex_.pts[0]].field
    bases = {p: module_dimension_basis(sheaf.stalks[p]) for p in complex_.pts}
    layout = {}
    for n, chains in complex_.terms.items():
        offs, at = {}, 0
        for c in chains:
            offs[c] = at
            at += bases[c[-1]].dim
        layout[n] = (offs, at)
    mats = {}
    for n in sorted(complex_.terms):
        if n + 1 not in complex_.terms:
            break
        offs_n, dim_n = layout[n]
        offs_n1, dim_n1 = layout[n + 1]
        rows = [[field.zero()] * dim_n1 for _ in range(dim_n)]
        for c1 in complex_.terms[n + 1]:
            for i, omitted in complex_.faces(c1):
                if omitted not in offs_n:
                    continue
                sign = field.of_int((-1) ** i)
                src_b = bases[omitted[-1]]
                tgt_b = bases[c1[-1]]
                if i < len(c1) - 1:
                    for bi in range(src_b.dim):
                        rows[offs_n[omitted] + bi][offs_n1[c1] + bi] = \
                            field.add(rows[offs_n[omitted] + bi][offs_n1[c1] + bi], sign)
                else:
                    x, y = omitted[-1], c1[-1]
                    for bi, bkey in enumerate(src_b.basis):
                        vec = src_b.element([field.one() if k == bi else field.zero()
                                             for k in range(src_b.dim)])
                        img = sheaf.restrict_vector(x, y, vec)
                        for ci, cv in enumerate(tgt_b.coords(img)):
                            if cv:
                                cell = rows[offs_n[omitted] + bi]
                                cell[offs_n1[c1] + ci] = field.add(
                                    cell[offs_n1[c1] + ci], field.mul(sign, cv))
        mats[n] = rows
    complex_._layout = layout
    return mats


def _cohomology_vector(space, sheaf, pts):
    cx = GodementComplex(space, sheaf, pts)
    if not cx.terms:
        return {}
    field = space.stalks[cx.pts[0]].field
    mats = _vector_matrices(cx)
    dims = {n: cx._layout[n][1] for n in cx.terms}
    ranks = {n: field_rank(field, m) for n, m in mats.items()}
    return {n: dims[n] - ranks.get(n, 0) - ranks.get(n - 1, 0)
            for n in cx.terms}


# ----------------------------------------------------------------------
# graded backend (certified finite enumeration)
# ----------------------------------------------------------------------

def _cohomology_graded_degree(space, sheaf, pts, d):
    cx = GodementComplex(space, sheaf, pts)
    if not cx.terms:
        return {}
    field = space.stalks[cx.pts[0]].field
    pieces = {p: graded_piece(sheaf.stalks[p], d) for p in cx.pts}
    layout = {}
    for n, chains in cx.terms.items():
        offs, at = {}, 0
        for c in chains:
            offs[c] = at
            at += pieces[c[-1]].dim
        layout[n] = (offs, at)
    ranks = {}
    for n in sorted(cx.terms):
        if n + 1 not in cx.terms:
            break
        offs_n, dim_n = layout[n]
        offs_n1, dim_n1 = layout[n + 1]
        rows = [[field.zero()] * dim_n1 for _ in range(dim_n)]
        for c1 in cx.terms[n + 1]:
            for i, omitted in cx.faces(c1):
                if omitted not in offs_n:
                    continue
                sign = field.of_int((-1) ** i)
                src = pieces[omitted[-1]]
                tgt = pieces[c1[-1]]
                if i < len(c1) - 1:
                    for bi in range(src.dim):
                        rows[offs_n[omitted] + bi][offs_n1[c1] + bi] = field.add(
                            rows[offs_n[omitted] + bi][offs_n1[c1] + bi], sign)
                else:
                    x, y = omitted[-1], c1[-1]
                    for bi in range(src.dim):
                        vec = src.element([field.one() if k == bi else field.zero()
                                           for k in range(src.dim)])
                        img = sheaf.restrict_vector(x, y, vec)
                        for ci, cv in enumerate(tgt.coords(img)):
                            if cv:
                                cell = rows[offs_n[omitted] + bi]
                                cell[offs_n1[c1] + ci] = field.add(
                                    cell[offs_n1[c1] + ci], field.mul(sign, cv))
        ranks[n] = field_rank(field, rows)
    return {n: layout[n][1] - ranks.get(n, 0) - ranks.get(n - 1, 0)
            for n in cx.terms}


# ----------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------

def cohomology(space, sheaf, backend="auto", window=DEFAULT_WINDOW, pts=None,
               min_index=0):
    """CohomologyTable of the sheaf on the open set `pts` (default all).

    min_index > 0 asks only for the rows H^i, i >= min_index; lower rows with
    provably infinite graded pieces are then tolerated and omitted (only the
    toric backend can exploit this)."""
    pts = list(space.points) if pts is None else \
        [p for p in space.points if p in set(pts)]
    if not pts:
        return CohomologyTable({}, None, backend="empty")
    if backend == "vector":
        dims = _cohomology_vector(space, sheaf, pts)
        return CohomologyTable({(i, None): v for i, v in dims.items()},
                               None, backend="vector")
    if backend in ("auto", "graded", "toric"):
        graded = all(sheaf.stalks[p].is_graded() for p in pts)
        if not graded:
            if backend in ("graded", "toric"):
                raise UngradedModule("stalks are not graded")
            dims = _cohomology_vector(space, sheaf, pts)
            return CohomologyTable({(i, None): v for i, v in dims.items()},
                                   None, backend="vector")
        lo, hi = window
        engines = None
        if backend in ("auto", "toric"):
            try:
                engines = _toric_engines(space, sheaf, pts)
            except ToricIneligible as exc:
                if backend == "toric":
                    raise
                engines = None
        entries = {}
        if engines is not None:
            for d in range(lo, hi + 1):
                acc = {}
                for eng in engines:
                    for i, v in eng.degree_dims(d, min_index).items():
                        acc[i] = acc.get(i, 0) + v
                for i, v in acc.items():
                    entries[(i, d)] = v
            notes = ["claims are window-qualified"]
            if min_index:
                notes.append(f"rows below H^{min_index} omitted on request")
            return CohomologyTable(entries, window, backend="toric",
                                   notes=tuple(notes))
        for d in range(lo, hi + 1):
            for i, v in _cohomology_graded_degree(space, sheaf, pts, d).items():
                entries[(i, d)] = v
        return CohomologyTable(entries, window, backend="graded",
                               notes=("claims are window-qualified",))
    raise ValueError(f"unknown backend {backend!r}")


def _components(space, pts):
    pts = list(pts)
    seen, comps = set(), []
    for p in pts:
        if p in seen:
            continue
        comp, stack = set(), [p]
        while stack:
            q = stack.pop()
            if q in comp:
                continue
            comp.add(q)
            for r in pts:
                if r not in comp and (space.leq(q, r) or space.leq(r, q)):
                    stack.append(r)
        seen |= comp
        comps.append([q for q in pts if q in comp])
    return comps


def _toric_engines(space, sheaf, pts):
    return [ToricEngine(space, sheaf, comp)
            for comp in _components(space, pts)]


def sections_dims(space, sheaf, window=DEFAULT_WINDOW, pts=None, backend="auto"):
    """Per-degree dimensions of the section space (H^0)."""
    table = cohomology(space, sheaf, backend, window, pts)
    return {d: table.dim(0, d) for d in range(window[0], window[1] + 1)}


# ----------------------------------------------------------------------
# higher direct images and the Serre harness
# ----------------------------------------------------------------------

def restrict_sheaf(sheaf, sub):
    """Restriction of a sheaf to an open subspace (its own FinSpace)."""
    from .sheaves import SheafModule
    stalks = {p: sheaf.stalks[p] for p in sub.points}
    mats = {e: sheaf.matrices[e] for e in sub.edges}
    return SheafModule(sub, stalks, mats)


def higher_direct_image(f, sheaf, backend="auto", window=DEFAULT_WINDOW,
                        qc_evidence=False):
    """Tables y -> H^i(f^{-1}(U_y), M), the stalks of R^i f_*.

    With qc_evidence=True also reports the base-change necessary condition
    on edges where the lower table vanishes (zero stalks must stay zero
    upward).
    """
    out = {}
    for y in f.target.points:
        pre = f.preimage(f.target.up_set(y))
        out[y] = cohomology(f.source, sheaf, backend, window, pre)
    evidence = []
    if qc_evidence:
        for (y1, y2) in f.target.edges:
            for i in range(1 + max((t.max_index() for t in out.values()),
                                   default=0)):
                if out[y1].total(i) == 0:
                    ok = out[y2].total(i) == 0
                    evidence.append((f"R^{i} at {y1}<={y2}",
                                     "zero propagates", "pass" if ok else "fail"))
                else:
                    evidence.append((f"R^{i} at {y1}<={y2}",
                                     "nonzero source", "skip"))
    return out, evidence


def serre_harness(space, battery, window=DEFAULT_WINDOW, backend="auto",
                  affine_verdict=None, pts=None):
    """H^1 over a battery of quasi-coherent modules, cross-checked against an
    affineness verdict when one is supplied.

    Returns a report dict; raises AssertionError on the hard failure
    (certified affine but H^1 != 0)."""
    results = {}
    for name, sheaf in battery:
        table = cohomology(space, sheaf, backend, window, pts)
        results[name] = table
    h1_all_zero = all(t.total(1) == 0 for t in results.values())
    report = {
        "h1": {name: t.total(1) for name, t in results.items()},
        "tables": results,
        "all_zero": h1_all_zero,
        "conclusion": None,
    }
    if not h1_all_zero:
        report["conclusion"] = "not affine (nonzero H^1 in window)"
    elif affine_verdict is True:
        report["conclusion"] = "consistent with affine"
    else:
        report["conclusion"] = ("battery-insufficient evidence: H^1 vanished "
                                "on the battery but affineness is not certified")
    if affine_verdict is True and not h1_all_zero:
        raise AssertionError(
            "hard failure: space certified affine but a quasi-coherent module "
            "has H^1 != 0 in the window")
    return report
