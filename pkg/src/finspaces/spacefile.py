"""Space files: a JSON-compatible tree describing a finite ringed space,
its named (endo)maps, modules and roofs.

Top-level keys: field, points, order (generating pairs), stalks,
restrictions, maps, modules, and optionally sections (a presented section
ring witness) and roofs.  Printing is canonical, so parse after print is the
identity on trees the printer produced.
"""

import json

from .errors import FinspacesError
from .fields import Field
from .algebras import LocAlgebra, AlgHom, AlgElem
from .modules import FpModule
from .spaces import FinSpace, SpaceMap
from .sheaves import SheafModule
from .poly import Poly


class ParseError(FinspacesError):
    pass


# ----------------------------------------------------------------------
# element expressions
# ----------------------------------------------------------------------

def _tokens(text):
    out, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(("num", text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("name", text[i:j]))
            i = j
        elif ch in "+-*/^()":
            out.append((ch, ch))
            i += 1
        else:
            raise ParseError(f"bad character {ch!r} in {text!r}")
    out.append(("end", ""))
    return out


class _ExprParser:
    def __init__(self, algebra, text):
        self.algebra = algebra
        self.toks = _tokens(text)
        self.pos = 0
        self.text = text

    def peek(self):
        return self.toks[self.pos][0]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind and tok[0] != kind:
            raise ParseError(f"expected {kind}, got {tok[0]} in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self):
        e = self.expr()
        if self.peek() != "end":
            raise ParseError(f"trailing input in {self.text!r}")
        return e

    def expr(self):
        if self.peek() == "-":
            self.take()
            out = -self.term()
        else:
            out = self.term()
        while self.peek() in "+-":
            op = self.take()[0]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        out = self.factor()
        while self.peek() in "*/":
            op = self.take()[0]
            f = self.factor()
            if op == "*":
                out = out * f
            else:
                out = out.divide_by_unit(f)
        return out

    def factor(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            n = int(self.take("num")[1])
            if neg:
                return self.algebra.one().divide_by_unit(base ** n)
            return base ** n
        return base

    def atom(self):
        kind = self.peek()
        if kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if kind == "num":
            return self.algebra.const(int(self.take()[1]))
        if kind == "name":
            name = self.take()[1]
            if name not in self.algebra.names:
                raise ParseError(f"unknown variable {name!r} in {self.text!r}")
            return self.algebra.var(name)
        if kind == "-":
            self.take()
            return -self.atom()
        raise ParseError(f"unexpected {kind!r} in {self.text!r}")


def parse_element(algebra, text):
    return _ExprParser(algebra, str(text)).parse()


def element_str(elem):
    num, den = elem.fraction_view()
    if den.is_constant() and den.constant_value() == elem.algebra.field.one():
        return str(num)
    return f"({num})/({den})"


def parse_base_poly(algebra, text):
    elem = parse_element(algebra, text)
    num, den = elem.fraction_view()
    if not (den.is_constant() and den.constant_value() == algebra.field.one()):
        raise ParseError(f"{text!r} is not polynomial")
    return num


# ----------------------------------------------------------------------
# tree -> objects
# ----------------------------------------------------------------------

def _edge_key(x, y):
    return f"{x}<{y}"


def _split_edge(key):
    if "<" not in key:
        raise ParseError(f"bad edge key {key!r}")
    x, y = key.split("<", 1)
    return x, y


def parse_space(tree):
    """(FinSpace, maps dict, sheaf modules dict, roofs dict)."""
    field = Field.parse(tree["field"])
    points = list(tree["points"])
    for p in points:
        if "<" in p:
            raise ParseError(f"point name {p!r} may not contain '<'")
    stalks = {}
    for p in points:
        info = tree["stalks"][p]
        names = tuple(info.get("vars", ()))
        scratch = LocAlgebra(field, names)
        relations = [parse_base_poly(scratch, t) for t in info.get("relations", ())]
        inverted = [parse_base_poly(scratch, t) for t in info.get("invert", ())]
        weights = info.get("weights")
        stalks[p] = LocAlgebra(field, names, relations, inverted,
                               tuple(weights) if weights is not None else None)
    edges = {}
    order_pairs = [tuple(pair) for pair in tree.get("order", ())]
    restr = tree.get("restrictions", {})
    for (x, y) in order_pairs:
        key = _edge_key(x, y)
        if key not in restr:
            raise ParseError(f"missing restriction for edge {key}")
        info = restr[key]
        images = [parse_element(stalks[y], t) for t in info["images"]]
        if "extra_invert" in info:
            extra = [parse_base_poly(stalks[x], t) for t in info["extra_invert"]]
            h = AlgHom(stalks[x], stalks[y], images, "localization", extra)
        else:
            h = AlgHom(stalks[x], stalks[y], images, "general")
        edges[(x, y)] = h
    witness = None
    if "sections" in tree:
        info = tree["sections"]
        names = tuple(info.get("vars", ()))
        scratch = LocAlgebra(field, names)
        R = LocAlgebra(field, names,
                       [parse_base_poly(scratch, t) for t in info.get("relations", ())],
                       [parse_base_poly(scratch, t) for t in info.get("invert", ())],
                       tuple(info["weights"]) if info.get("weights") is not None
                       else None)
        maps = {}
        for p in points:
            entry = info["images"][p]
            images = [parse_element(stalks[p], t) for t in entry["images"]]
            if "extra_invert" in entry:
                extra = [parse_base_poly(R, t) for t in entry["extra_invert"]]
                maps[p] = AlgHom(R, stalks[p], images, "localization", extra)
            else:
                maps[p] = AlgHom(R, stalks[p], images, "general")
        witness = (R, maps)
    space = FinSpace(points, edges, stalks, witness)
    maps = {}
    for name, info in tree.get("maps", {}).items():
        pm = dict(info["points"])
        co = {}
        for p in points:
            entry = info["comorphisms"][p]
            src = stalks[pm[p]]
            images = [parse_element(stalks[p], t) for t in entry["images"]]
            if "extra_invert" in entry:
                extra = [parse_base_poly(src, t) for t in entry["extra_invert"]]
                co[p] = AlgHom(src, stalks[p], images, "localization", extra)
            else:
                co[p] = AlgHom(src, stalks[p], images, "general")
        maps[name] = SpaceMap(space, space, pm, co)
    modules = {}
    for name, info in tree.get("modules", {}).items():
        mstalks, mats = {}, {}
        for p in points:
            entry = info["stalks"][p]
            A = stalks[p]
            g = int(entry["gens"])
            rel = [[parse_element(A, t) for t in row]
                   for row in entry.get("relations", ())]
            shifts = entry.get("shifts")
            mstalks[p] = FpModule(A, g, rel,
                                  tuple(shifts) if shifts is not None else None)
        for key, rows in info.get("matrices", {}).items():
            x, y = _split_edge(key)
            mats[(x, y)] = [[parse_element(stalks[y], t) for t in row]
                            for row in rows]
        modules[name] = SheafModule(space, mstalks, mats)
    roofs = {name: (info["left"], info["right"])
             for name, info in tree.get("roofs", {}).items()}
    return space, maps, modules, roofs


# ----------------------------------------------------------------------
# objects -> tree
# ----------------------------------------------------------------------

def _alg_tree(A):
    out = {"vars": list(A.names)}
    out["relations"] = [str(r) for r in A.relations]
    out["invert"] = [str(s) for s in A.inverted]
    if A.weights is not None:
        out["weights"] = list(A.weights)
    return out


def _hom_entry(h):
    out = {"images": [element_str(im) for im in h.images]}
    if h.kind == "localization":
        out["extra_invert"] = [str(e) for e in h.extra]
    return out


def print_space(space, maps=None, modules=None, roofs=None):
    tree = {
        "field": repr(space.stalks[space.points[0]].field) if space.points else "Q",
        "points": list(space.points),
        "order": [[x, y] for (x, y) in sorted(space.edges)],
        "stalks": {p: _alg_tree(space.stalks[p]) for p in space.points},
        "restrictions": {_edge_key(x, y): _hom_entry(h)
                         for (x, y), h in sorted(space.edges.items())},
    }
    if space.sections_witness is not None:
        R, wmaps = space.sections_witness
        sec = _alg_tree(R)
        sec["images"] = {p: _hom_entry(wmaps[p]) for p in space.points}
        tree["sections"] = sec
    if maps:
        tree["maps"] = {}
        for name, f in maps.items():
            tree["maps"][name] = {
                "points": {p: f.point_map[p] for p in space.points},
                "comorphisms": {p: _hom_entry(f.comorphisms[p])
                                for p in space.points},
            }
    if modules:
        tree["modules"] = {}
        for name, M in modules.items():
            stalks = {}
            for p in space.points:
                mp = M.stalks[p]
                entry = {"gens": mp.ngens,
                         "relations": [[element_str(v) for v in row]
                                       for row in mp.relations]}
                if mp.shifts is not None:
                    entry["shifts"] = list(mp.shifts)
                stalks[p] = entry
            tree["modules"][name] = {
                "stalks": stalks,
                "matrices": {_edge_key(x, y): [[element_str(v) for v in row]
                                               for row in rows]
                             for (x, y), rows in sorted(M.matrices.items())},
            }
    if roofs:
        tree["roofs"] = {name: {"left": l, "right": r}
                         for name, (l, r) in roofs.items()}
    return tree


def dumps(tree):
    return json.dumps(tree, indent=2) + "\n"


def loads(text):
    return json.loads(text)


def save(path, space, **kw):
    with open(path, "w") as fh:
        fh.write(dumps(print_space(space, **kw)))


def load(path):
    with open(path) as fh:
        return parse_space(loads(fh.read()))
