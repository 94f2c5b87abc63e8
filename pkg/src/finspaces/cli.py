"""Batch front end: load space files (or builtins), classify, compute
cohomology tables and higher direct images, build products, cylinders and
minimal models, decide roof equality, and emit reports.

Exit codes: 0 verdict-true/success, 1 verdict-false, 2 undecided, 3 input
error.  Reports are deterministic; --format json emits the structured tree,
--figures DIR renders matplotlib figures next to the delimited output.
"""

import argparse
import json
import os
import re
import sys

from .errors import FinspacesError
from .fields import Field
from .algebras import LocAlgebra
from . import fixtures
from .spacefile import (parse_space, print_space, dumps, loads, ParseError,
                        parse_base_poly)
from .spaces import product_over_ring, fiber_product, cylinder
from .classify import (is_fr_space, is_affine, is_schematic, is_semiseparated,
                       minimal_model, classify_map, removable_points)
from .cohomology import cohomology, higher_direct_image, serre_harness, \
    DEFAULT_WINDOW
from .roofs import Roof, roof_equal

EXIT_TRUE, EXIT_FALSE, EXIT_UNDECIDED, EXIT_INPUT = 0, 1, 2, 3


def _parse_window(text):
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"bad window {text!r}; use a..b")
    return int(m.group(1)), int(m.group(2))


def _field_from(args):
    name = getattr(args, "field", None) or os.environ.get("FINSPACES_FIELD") or "Q"
    return Field.parse(name)


def _window_from(args):
    w = getattr(args, "window", None)
    if w:
        return w
    env = os.environ.get("FINSPACES_WINDOW")
    if env:
        return _parse_window(env)
    return DEFAULT_WINDOW


def _load_space(args, spec):
    """Builtin (builtin:p1 or bare known name) or a space file path."""
    field = _field_from(args)
    name = spec[len("builtin:"):] if spec.startswith("builtin:") else spec
    pm = re.fullmatch(r"point\((.+)\)", name)
    if pm:
        return _point_space(field, pm.group(1)), {}, {}, {}
    if name in fixtures.BUILTIN_SPACES:
        space = fixtures.generate(name, field)
        mods = {"O": fixtures.structure_sheaf(space)}
        return space, {}, mods, {}
    if not os.path.exists(spec):
        raise FinspacesError(f"no such space: {spec!r}")
    with open(spec) as fh:
        tree = loads(fh.read())
    return parse_space(tree)


def _point_space(field, ring_text):
    m = re.fullmatch(r"(?:(\w+)\s*)?\[([^\]]*)\]([^\s]*)", ring_text.strip())
    if not m:
        raise FinspacesError(f"cannot parse ring {ring_text!r}")
    if m.group(1):
        field = Field.parse(m.group(1))
    names = tuple(v.strip() for v in m.group(2).split(",") if v.strip())
    scratch = LocAlgebra(field, names)
    inverted = []
    rest = m.group(3) or ""
    for inv in re.findall(r"\[1/([^\]]+)\]", rest):
        inverted.append(parse_base_poly(scratch, inv))
    return fixtures.point_space(LocAlgebra(field, names, (), inverted))


def _builtin_name(spec):
    name = spec[len("builtin:"):] if spec.startswith("builtin:") else spec
    return name if name in fixtures.BUILTIN_SPACES else None


def _get_module(args, spec, space, modules):
    name = getattr(args, "module", None) or "O"
    if name in modules:
        return modules[name]
    if name == "O":
        return fixtures.structure_sheaf(space)
    b = _builtin_name(spec)
    if b:
        return fixtures.builtin_module(space, name, b)
    raise FinspacesError(f"module {name!r} not found in {spec!r}")


def _emit(args, human_lines, tree):
    if getattr(args, "format", "human") == "json":
        sys.stdout.write(dumps(tree))
    else:
        for line in human_lines:
            print(line)


def _verdict_exit(verdict):
    if verdict is True:
        return EXIT_TRUE
    if verdict is False:
        return EXIT_FALSE
    return EXIT_UNDECIDED


def _echo_options(args, window=None):
    parts = [f"field={_field_from(args)}"]
    if window is not None:
        parts.append(f"window=[{window[0]},{window[1]}]")
    return "options: " + " ".join(parts)


def _figdir(args):
    figs = getattr(args, "figures", None)
    if figs:
        os.makedirs(figs, exist_ok=True)
    return figs


# ----------------------------------------------------------------------
# verbs
# ----------------------------------------------------------------------

def cmd_validate(args):
    space, maps, modules, _ = _load_space(args, args.space)
    problems = space.validate()
    for name, f in maps.items():
        problems += [f"map {name}: {p}" for p in f.validate()]
    for name, M in modules.items():
        problems += [f"module {name}: {p}" for p in M.validate()]
    tree = {"valid": not problems, "problems": problems}
    _emit(args, ["valid" if not problems else "invalid:"] +
          [f"  {p}" for p in problems], tree)
    return EXIT_TRUE if not problems else EXIT_FALSE


def cmd_classify(args):
    space, maps, modules, _ = _load_space(args, args.space)
    window = _window_from(args)
    if args.map:
        if args.map not in maps:
            raise FinspacesError(f"map {args.map!r} not in file")
        reports = classify_map(maps[args.map], window)
        lines = [_echo_options(args, window)]
        tree = {"map": args.map, "reports": {}}
        worst = EXIT_TRUE
        for key, rep in reports.items():
            v = rep.verdict
            lines.append(f"{key}: " +
                         ("true" if v else "false" if v is False else "Undecided"))
            tree["reports"][key] = rep.to_tree()
            worst = max(worst, _verdict_exit(v))
        _emit(args, lines, tree)
        return worst
    which = []
    if args.fr:
        which.append(("fr", lambda: is_fr_space(space)))
    if args.affine:
        which.append(("affine", lambda: is_affine(space, window)))
    if args.schematic:
        which.append(("schematic", lambda: is_schematic(space)))
    if args.semiseparated:
        which.append(("semiseparated", lambda: is_semiseparated(space, window)))
    if not which:
        which = [("fr", lambda: is_fr_space(space)),
                 ("schematic", lambda: is_schematic(space)),
                 ("affine", lambda: is_affine(space, window)),
                 ("semiseparated", lambda: is_semiseparated(space, window))]
    lines = [_echo_options(args, window)]
    tree = {"reports": {}}
    code = EXIT_TRUE
    for name, run in which:
        rep = run()
        v = rep.verdict
        lines.append(f"{name}: " +
                     ("true" if v else "false" if v is False else "Undecided"))
        if args.verbose:
            for crit, loc, status in rep.evidence:
                lines.append(f"    [{status}] {crit} @ {loc}")
        tree["reports"][name] = rep.to_tree()
        code = max(code, _verdict_exit(v))
    fig = _figdir(args)
    if fig:
        from .plots import hasse_figure
        path = os.path.join(fig, "space.png")
        hasse_figure(space, path, title=os.path.basename(args.space))
        lines.append(f"figure: {path}")
    _emit(args, lines, tree)
    return code


def cmd_minimize(args):
    space, _, _, _ = _load_space(args, args.space)
    XM, qmap, incl = minimal_model(space)
    tree = print_space(XM)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(dumps(tree))
    _emit(args, [f"points: {len(space.points)} -> {len(XM.points)}",
                 f"removed/collapsed: "
                 f"{sorted(set(space.points) - set(XM.points))}"],
          {"minimal_points": list(XM.points)})
    return EXIT_TRUE


def cmd_cohomology(args):
    space, maps, modules, _ = _load_space(args, args.space)
    window = _window_from(args)
    M = _get_module(args, args.space, space, modules)
    pts = None
    if args.open:
        pts = space.up_set(args.open)
    table = cohomology(space, M, backend=args.backend, window=window, pts=pts)
    lines = [_echo_options(args, window), table.to_text()]
    fig = _figdir(args)
    if fig:
        from .plots import table_figure, hasse_figure
        csv_path = os.path.join(fig, "cohomology.csv")
        with open(csv_path, "w") as fh:
            fh.write(table.to_csv())
        png = table_figure(table, os.path.join(fig, "cohomology.png"),
                           title=f"{getattr(args, 'module', None) or 'O'} on "
                                 f"{os.path.basename(args.space)}")
        hasse_figure(space, os.path.join(fig, "space.png"))
        lines.append(f"csv: {csv_path}")
        lines.append(f"figure: {png}")
    _emit(args, lines, table.to_tree())
    return EXIT_TRUE


def cmd_rfi(args):
    space, maps, modules, _ = _load_space(args, args.space)
    window = _window_from(args)
    if args.map not in maps:
        raise FinspacesError(f"map {args.map!r} not in file")
    M = _get_module(args, args.space, space, modules)
    tables, evidence = higher_direct_image(maps[args.map], M,
                                           window=window, qc_evidence=True)
    lines = [_echo_options(args, window)]
    tree = {"stalks": {}, "evidence": []}
    for y, t in tables.items():
        lines.append(f"-- stalk at {y}:")
        lines.append(t.to_text())
        tree["stalks"][y] = t.to_tree()
    for crit, loc, status in evidence:
        lines.append(f"[{status}] {crit} ({loc})")
        tree["evidence"].append({"criterion": crit, "location": loc,
                                 "status": status})
    _emit(args, lines, tree)
    return EXIT_TRUE


def cmd_serre(args):
    space, maps, modules, _ = _load_space(args, args.space)
    window = _window_from(args)
    affine = is_affine(space, window).verdict
    battery = [("O", fixtures.structure_sheaf(space))]
    for name, M in modules.items():
        if name != "O":
            battery.append((name, M))
    report = serre_harness(space, battery, window, affine_verdict=affine)
    lines = [_echo_options(args, window),
             f"is_affine: {affine}",
             f"H^1 totals: {report['h1']}",
             f"conclusion: {report['conclusion']}"]
    _emit(args, lines, {"is_affine": affine, "h1": report["h1"],
                        "conclusion": report["conclusion"]})
    return EXIT_TRUE


def cmd_product(args):
    sa, _, _, _ = _load_space(args, args.left)
    sb, _, _, _ = _load_space(args, args.right)
    P, _inj = product_over_ring(sa, sb)
    tree = print_space(P)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(dumps(tree))
    _emit(args, [f"product has {len(P.points)} points"], tree)
    return EXIT_TRUE


def cmd_fiber(args):
    space, maps, _, _ = _load_space(args, args.space)
    for m in (args.left_map, args.right_map):
        if m not in maps:
            raise FinspacesError(f"map {m!r} not in file")
    P, p1, p2 = fiber_product(maps[args.left_map], maps[args.right_map])
    tree = print_space(P)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(dumps(tree))
    _emit(args, [f"fiber product has {len(P.points)} points"], tree)
    return EXIT_TRUE


def cmd_cylinder(args):
    space, maps, _, _ = _load_space(args, args.space)
    if args.map not in maps:
        raise FinspacesError(f"map {args.map!r} not in file")
    C, incl, retr = cylinder(maps[args.map])
    tree = print_space(C)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(dumps(tree))
    _emit(args, [f"cylinder has {len(C.points)} points"], tree)
    return EXIT_TRUE


def cmd_roof_eq(args):
    space, maps, _, roofs = _load_space(args, args.space)
    window = _window_from(args)

    def mk(name):
        if name not in roofs:
            raise FinspacesError(f"roof {name!r} not in file")
        l, r = roofs[name]
        return Roof(maps[l], maps[r], window=window, certify=True)

    r1, r2 = mk(args.roof1), mk(args.roof2)
    eq = roof_equal(r1, r2, window)
    _emit(args, [f"roofs {'agree' if eq else 'differ'}"], {"equal": eq})
    return EXIT_TRUE if eq else EXIT_FALSE


def cmd_generate(args):
    field = _field_from(args)
    pm = re.fullmatch(r"point\((.+)\)", args.name)
    if pm:
        space = _point_space(field, pm.group(1))
        mods = None
    else:
        space = fixtures.generate(args.name, field)
        mods = {"O": fixtures.structure_sheaf(space)}
        if args.name == "p1":
            mods["O(-2)"] = fixtures.twist_p1(space, -2)
        if args.name == "p2":
            mods["O(-3)"] = fixtures.twist_p2(space, -3)
    text = dumps(print_space(space, modules=mods))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_TRUE


# ----------------------------------------------------------------------

_NEGATIVE_WINDOW = re.compile(r"^-\d+(\.\.-?\d+)?$|^-\d+$")


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from clobbering globally-given options
    shared.add_argument("--field", default=argparse.SUPPRESS,
                        help="coefficient field (Q or F<p>)")
    shared.add_argument("--window", type=_parse_window,
                        default=argparse.SUPPRESS,
                        help="internal degree window a..b")
    shared.add_argument("--format", choices=("human", "json"),
                        default=argparse.SUPPRESS)
    shared.add_argument("--figures", default=argparse.SUPPRESS,
                        help="directory for report figures")
    shared._negative_number_matcher = _NEGATIVE_WINDOW
    ap = argparse.ArgumentParser(
        prog="finspaces",
        description="finite ringed posets: classification, cohomology, roofs",
        parents=[shared])
    ap._negative_number_matcher = _NEGATIVE_WINDOW
    sub = ap.add_subparsers(dest="verb", required=True)

    def add_parser(name, **kw):
        p = sub.add_parser(name, parents=[shared], **kw)
        p._negative_number_matcher = _NEGATIVE_WINDOW
        return p
    sub_add = add_parser

    p = sub_add("validate", help="check space/map/module axioms")
    p.add_argument("space")
    p.set_defaults(run=cmd_validate)

    p = sub_add("classify", help="space or morphism class verdicts")
    p.add_argument("space")
    p.add_argument("--fr", action="store_true")
    p.add_argument("--affine", action="store_true")
    p.add_argument("--schematic", action="store_true")
    p.add_argument("--semiseparated", action="store_true")
    p.add_argument("--map", help="classify a named map instead")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(run=cmd_classify)

    p = sub_add("minimize", help="Kolmogorov quotient minus removable points")
    p.add_argument("space")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_minimize)

    p = sub_add("cohomology", help="Godement cohomology table")
    p.add_argument("space")
    p.add_argument("--module", help="module name (O, O(d), or from file)")
    p.add_argument("--backend", default="auto",
                   choices=("auto", "vector", "graded", "toric"))
    p.add_argument("--open", help="restrict to the minimal open of the point")
    p.set_defaults(run=cmd_cohomology)

    p = sub_add("rfi", help="higher direct images along a named map")
    p.add_argument("space")
    p.add_argument("--map", required=True)
    p.add_argument("--module")
    p.set_defaults(run=cmd_rfi)

    p = sub_add("serre", help="Serre harness: H^1 battery vs affineness")
    p.add_argument("space")
    p.set_defaults(run=cmd_serre)

    p = sub_add("product", help="product of two spaces over the field")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_product)

    p = sub_add("fiber", help="fiber product of two named maps")
    p.add_argument("space")
    p.add_argument("--left-map", required=True)
    p.add_argument("--right-map", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_fiber)

    p = sub_add("cylinder", help="mapping cylinder of a named map")
    p.add_argument("space")
    p.add_argument("--map", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_cylinder)

    p = sub_add("roof-eq", help="equality of two named roofs")
    p.add_argument("space")
    p.add_argument("roof1")
    p.add_argument("roof2")
    p.set_defaults(run=cmd_roof_eq)

    p = sub_add("generate", help="emit a builtin fixture")
    p.add_argument("name")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_generate)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.run(args)
    except (FinspacesError, ParseError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
