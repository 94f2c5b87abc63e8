"""Built-in spaces: the worked examples (projective line and plane, affine
line with doubled origin) plus auxiliary fixtures used by the cohomology
backends, and their twisting modules."""

from .errors import FinspacesError
from .fields import Field
from .algebras import LocAlgebra, AlgHom
from .modules import FpModule
from .spaces import FinSpace
from .sheaves import SheafModule


def _loc_edge(src, dst, images, extra):
    return AlgHom(src, dst, images, kind="localization", extra=extra)


def projective_line(field=None):
    """Three points: two affine charts k[x], k[1/x] under a common generic
    point k[x, 1/x]."""
    k = field or Field.rationals()
    c0 = LocAlgebra(k, ("x",), weights=(1,))
    cinf = LocAlgebra(k, ("u",), weights=(-1,))
    x = c0.base_ring.var("x")
    eta = LocAlgebra(k, ("x",), inverted=[x], weights=(1,))
    edges = {
        ("p0", "eta"): _loc_edge(c0, eta, [eta.var("x")], [x]),
        ("pinf", "eta"): _loc_edge(cinf, eta, [eta.inv_gen(0)],
                                   [cinf.base_ring.var("u")]),
    }
    constants = LocAlgebra(k, (), weights=())
    witness = (constants, {p: AlgHom(constants, s, [])
                           for p, s in (("p0", c0), ("pinf", cinf), ("eta", eta))})
    return FinSpace(("p0", "pinf", "eta"), edges,
                    {"p0": c0, "pinf": cinf, "eta": eta}, witness)


def projective_line_doubled_generic(field=None):
    """P^1 model with two preorder-equivalent generic points; its Kolmogorov
    quotient is the 3-point model."""
    k = field or Field.rationals()
    c0 = LocAlgebra(k, ("x",), weights=(1,))
    cinf = LocAlgebra(k, ("u",), weights=(-1,))
    x = c0.base_ring.var("x")
    eta1 = LocAlgebra(k, ("x",), inverted=[x], weights=(1,))
    eta2 = LocAlgebra(k, ("x",), inverted=[x], weights=(1,))
    edges = {
        ("p0", "eta1"): _loc_edge(c0, eta1, [eta1.var("x")], [x]),
        ("pinf", "eta1"): _loc_edge(cinf, eta1, [eta1.inv_gen(0)],
                                    [cinf.base_ring.var("u")]),
        ("eta1", "eta2"): _loc_edge(eta1, eta2, [eta2.var("x")], []),
        ("eta2", "eta1"): _loc_edge(eta2, eta1, [eta1.var("x")], []),
    }
    return FinSpace(("p0", "pinf", "eta1", "eta2"), edges,
                    {"p0": c0, "pinf": cinf, "eta1": eta1, "eta2": eta2})


def projective_plane(field=None):
    """Seven points: three affine charts, three pairwise intersections, one
    triple intersection; chart-0 coordinates x, y throughout."""
    k = field or Field.rationals()
    c0 = LocAlgebra(k, ("x", "y"), weights=(1, 1))
    c1 = LocAlgebra(k, ("u", "v"), weights=(-1, 0))   # u = 1/x, v = y/x
    c2 = LocAlgebra(k, ("s", "t"), weights=(-1, 0))   # s = 1/y, t = x/y
    x, y = c0.base_ring.var("x"), c0.base_ring.var("y")
    u, v = c1.base_ring.var("u"), c1.base_ring.var("v")
    s, t = c2.base_ring.var("s"), c2.base_ring.var("t")
    u01 = LocAlgebra(k, ("x", "y"), inverted=[x], weights=(1, 1))
    u02 = LocAlgebra(k, ("x", "y"), inverted=[y], weights=(1, 1))
    u12 = LocAlgebra(k, ("u", "v"), inverted=[v], weights=(-1, 0))
    top = LocAlgebra(k, ("x", "y"), inverted=[x, y], weights=(1, 1))
    edges = {
        ("c0", "u01"): _loc_edge(c0, u01, [u01.var("x"), u01.var("y")], [x]),
        ("c0", "u02"): _loc_edge(c0, u02, [u02.var("x"), u02.var("y")], [y]),
        ("c1", "u01"): _loc_edge(c1, u01,
                                 [u01.inv_gen(0), u01.var("y") * u01.inv_gen(0)],
                                 [u]),
        ("c1", "u12"): _loc_edge(c1, u12, [u12.var("u"), u12.var("v")], [v]),
        ("c2", "u02"): _loc_edge(c2, u02,
                                 [u02.inv_gen(0), u02.var("x") * u02.inv_gen(0)],
                                 [s]),
        ("c2", "u12"): _loc_edge(c2, u12,
                                 [u12.var("u") * u12.inv_gen(0), u12.inv_gen(0)],
                                 [t]),
        ("u01", "top"): _loc_edge(u01, top, [top.var("x"), top.var("y")], [y]),
        ("u02", "top"): _loc_edge(u02, top, [top.var("x"), top.var("y")], [x]),
        ("u12", "top"): _loc_edge(u12, top,
                                  [top.inv_gen(0), top.var("y") * top.inv_gen(0)],
                                  [u]),
    }
    constants = LocAlgebra(k, (), weights=())
    stalks = {"c0": c0, "c1": c1, "c2": c2, "u01": u01, "u02": u02,
              "u12": u12, "top": top}
    witness = (constants, {p: AlgHom(constants, a, []) for p, a in stalks.items()})
    return FinSpace(("c0", "c1", "c2", "u01", "u02", "u12", "top"),
                    edges, stalks, witness)


def doubled_origin_line(field=None):
    """The affine line with a doubled point: two copies of k[x] glued over
    k[x, 1/x]."""
    k = field or Field.rationals()
    a1 = LocAlgebra(k, ("x",), weights=(1,))
    a2 = LocAlgebra(k, ("x",), weights=(1,))
    x = a1.base_ring.var("x")
    eta = LocAlgebra(k, ("x",), inverted=[x], weights=(1,))
    edges = {
        ("p1", "eta"): _loc_edge(a1, eta, [eta.var("x")], [x]),
        ("p2", "eta"): _loc_edge(a2, eta, [eta.var("x")],
                                 [a2.base_ring.var("x")]),
    }
    R = LocAlgebra(k, ("x",), weights=(1,))
    witness = (R, {
        "p1": AlgHom(R, a1, [a1.var("x")], kind="localization", extra=()),
        "p2": AlgHom(R, a2, [a2.var("x")], kind="localization", extra=()),
        "eta": AlgHom(R, eta, [eta.var("x")], kind="localization",
                      extra=(R.base_ring.var("x"),)),
    })
    return FinSpace(("p1", "p2", "eta"), edges,
                    {"p1": a1, "p2": a2, "eta": eta}, witness)


def affine_line(field=None):
    """U_x-shaped model of the affine line: k[x] under k[x, 1/x]."""
    k = field or Field.rationals()
    a = LocAlgebra(k, ("x",), weights=(1,))
    x = a.base_ring.var("x")
    eta = LocAlgebra(k, ("x",), inverted=[x], weights=(1,))
    edges = {("p", "eta"): _loc_edge(a, eta, [eta.var("x")], [x])}
    return FinSpace(("p", "eta"), edges, {"p": a, "eta": eta})


def doubled_origin_plane(field=None):
    """Two copies of the affine plane glued along the punctured plane; the
    classical non-semiseparated (but schematic) example."""
    k = field or Field.rationals()
    q1 = LocAlgebra(k, ("x", "y"), weights=(1, 1))
    q2 = LocAlgebra(k, ("x", "y"), weights=(1, 1))
    x, y = q1.base_ring.var("x"), q1.base_ring.var("y")
    ax = LocAlgebra(k, ("x", "y"), inverted=[x], weights=(1, 1))
    ay = LocAlgebra(k, ("x", "y"), inverted=[y], weights=(1, 1))
    axy = LocAlgebra(k, ("x", "y"), inverted=[x, y], weights=(1, 1))

    def into(src, dst, extra):
        return _loc_edge(src, dst, [dst.var("x"), dst.var("y")], extra)

    edges = {
        ("q1", "ax"): into(q1, ax, [x]),
        ("q1", "ay"): into(q1, ay, [y]),
        ("q2", "ax"): into(q2, ax, [x]),
        ("q2", "ay"): into(q2, ay, [y]),
        ("ax", "axy"): into(ax, axy, [y]),
        ("ay", "axy"): into(ay, axy, [x]),
    }
    return FinSpace(("q1", "q2", "ax", "ay", "axy"), edges,
                    {"q1": q1, "q2": q2, "ax": ax, "ay": ay, "axy": axy})


def pseudo_circle(field=None):
    """Four points a, b < c, d with constant stalks; the minimal finite model
    of the circle."""
    k = field or Field.rationals()
    stalks = {p: LocAlgebra(k, (), weights=()) for p in "abcd"}
    edges = {(lo, hi): AlgHom(stalks[lo], stalks[hi], [],
                              kind="localization", extra=())
             for lo in "ab" for hi in "cd"}
    return FinSpace(("a", "b", "c", "d"), edges, stalks)


def point_space(algebra, name="pt"):
    return FinSpace((name,), {}, {name: algebra})


def chain_space(field=None, length=3):
    """x_0 < x_1 < ... with one more point of the line inverted at each step
    (so no point of the chain is removable).  Ungraded: the inverted
    elements x - i are inhomogeneous."""
    k = field or Field.rationals()
    base = LocAlgebra(k, ("x",))
    x = base.base_ring.var("x")
    points, stalks, edges = [], {}, {}
    prev = None
    inverted = []
    for i in range(length):
        name = f"x{i}"
        alg = LocAlgebra(k, ("x",), inverted=list(inverted))
        points.append(name)
        stalks[name] = alg
        if prev is not None:
            edges[(prev, name)] = _loc_edge(stalks[prev], alg,
                                            [alg.var("x")], [inverted[-1]])
        prev = name
        inverted.append(x - base.base_ring.const(k.of_int(i)))
    return FinSpace(points, edges, stalks)


# ----------------------------------------------------------------------
# twisting modules
# ----------------------------------------------------------------------

def _power(algebra, name, d):
    """x^d as an element, d possibly negative (x must then be inverted)."""
    if d >= 0:
        return algebra.var(name) ** d
    i = next(j for j, s in enumerate(algebra.inverted)
             if s == algebra.base_ring.var(name))
    return algebra.inv_gen(i) ** (-d)


def structure_sheaf(space):
    stalks = {p: FpModule.free(space.stalks[p], 1, shifts=(0,) if
                               space.stalks[p].pres_weights() is not None else None)
              for p in space.points}
    matrices = {e: [[space.stalks[e[1]].one()]] for e in space.edges}
    return SheafModule(space, stalks, matrices)


def twist_p1(space, d):
    """O(d) on the projective_line fixture."""
    eta = space.stalks["eta"]
    stalks = {
        "p0": FpModule.free(space.stalks["p0"], 1, shifts=(0,)),
        "pinf": FpModule.free(space.stalks["pinf"], 1, shifts=(d,)),
        "eta": FpModule.free(eta, 1, shifts=(0,)),
    }
    matrices = {
        ("p0", "eta"): [[eta.one()]],
        ("pinf", "eta"): [[_power(eta, "x", d)]],
    }
    return SheafModule(space, stalks, matrices)


def twist_p2(space, d):
    """O(d) on the projective_plane fixture (chart-0 trivialization)."""
    st = space.stalks
    shifts = {"c0": 0, "c1": d, "c2": d, "u01": 0, "u02": 0, "u12": d, "top": 0}
    stalks = {p: FpModule.free(st[p], 1, shifts=(shifts[p],))
              for p in space.points}
    v_elem = st["u12"].var("v")
    matrices = {
        ("c0", "u01"): [[st["u01"].one()]],
        ("c0", "u02"): [[st["u02"].one()]],
        ("c1", "u01"): [[_power(st["u01"], "x", d)]],
        ("c1", "u12"): [[st["u12"].one()]],
        ("c2", "u02"): [[_power(st["u02"], "y", d)]],
        ("c2", "u12"): [[_power(st["u12"], "v", d)]],
        ("u01", "top"): [[st["top"].one()]],
        ("u02", "top"): [[st["top"].one()]],
        ("u12", "top"): [[_power(st["top"], "x", d)]],
    }
    return SheafModule(space, stalks, matrices)


def constant_sheaf(space, rank=1):
    """Rank-`rank` free module with identity restrictions (used on fixtures
    with field stalks)."""
    stalks = {p: FpModule.free(space.stalks[p], rank,
                               shifts=(0,) * rank if
                               space.stalks[p].pres_weights() is not None else None)
              for p in space.points}
    matrices = {}
    for (a, b) in space.edges:
        A = space.stalks[b]
        matrices[(a, b)] = [[A.one() if i == j else A.zero()
                             for j in range(rank)] for i in range(rank)]
    return SheafModule(space, stalks, matrices)


BUILTIN_SPACES = {
    "p1": projective_line,
    "p2": projective_plane,
    "doubled_line": doubled_origin_line,
    "affine_line": affine_line,
    "pseudo_circle": pseudo_circle,
    "p1_doubled_generic": projective_line_doubled_generic,
    "doubled_plane": doubled_origin_plane,
}


def generate(name, field=None):
    """Built-in fixture by name; point(<ring>) handled by the CLI layer."""
    if name not in BUILTIN_SPACES:
        raise FinspacesError(f"unknown builtin space {name!r}")
    return BUILTIN_SPACES[name](field)


def builtin_module(space, name, spec_name):
    """Named module on a builtin space: 'O' or 'O(d)'."""
    text = name.strip()
    if text == "O":
        return structure_sheaf(space)
    if text.startswith("O(") and text.endswith(")"):
        d = int(text[2:-1])
        if spec_name == "p1":
            return twist_p1(space, d)
        if spec_name == "p2":
            return twist_p2(space, d)
        raise FinspacesError(f"no twist family on {spec_name}")
    raise FinspacesError(f"unknown module {name!r}")
