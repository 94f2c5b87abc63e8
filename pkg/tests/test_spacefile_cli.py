"""Serialization round trips and the CLI surface (exit codes, formats,
figures)."""

import json
import os
import subprocess
import sys

import pytest

from finspaces.fixtures import (projective_line, projective_plane,
                                doubled_origin_line, twist_p1,
                                structure_sheaf)
from finspaces.spacefile import (print_space, parse_space, dumps, loads,
                                 parse_element, element_str, ParseError)
from finspaces.cli import main as cli_main


def test_roundtrip_trees():
    for space, mods in ((projective_line(), {"O(-2)": None}),
                        (projective_plane(), None),
                        (doubled_origin_line(), None)):
        if mods is not None:
            mods = {"O(-2)": twist_p1(space, -2)}
        tree = print_space(space, modules=mods)
        sp2, maps2, mods2, _ = parse_space(loads(dumps(tree)))
        tree2 = print_space(sp2, modules=mods2 or None)
        assert tree == tree2
        assert sp2.validate() == []


def test_element_parse_print():
    p1 = projective_line()
    eta = p1.stalks["eta"]
    for text in ("x^2 - 3", "(1)/(x)", "2*x - 1/2", "x^-2", "(x - 1)/(x^2)"):
        e = parse_element(eta, text)
        again = parse_element(eta, element_str(e))
        assert e == again
    with pytest.raises(ParseError):
        parse_element(eta, "y + 1")
    with pytest.raises(ParseError):
        parse_element(eta, "x +")


def _run(args):
    from io import StringIO
    import contextlib
    out = StringIO()
    with contextlib.redirect_stdout(out):
        code = cli_main(args)
    return code, out.getvalue()


def test_cli_exit_codes():
    code, _ = _run(["classify", "builtin:p1", "--schematic"])
    assert code == 0
    code, _ = _run(["classify", "builtin:p1", "--affine", "--window=-4..4"])
    assert code == 1
    code, _ = _run(["classify", "builtin:nonexistent"])
    assert code == 3


def test_cli_undecided_exit(tmp_path):
    # a declared-General edge gives an Undecided fr verdict: exit 2
    tree = {
        "field": "Q",
        "points": ["a", "b"],
        "order": [["a", "b"]],
        "stalks": {"a": {"vars": ["x"], "relations": [], "invert": []},
                   "b": {"vars": ["x"], "relations": ["x"], "invert": []}},
        "restrictions": {"a<b": {"images": ["x"]}},
    }
    path = tmp_path / "quotient_edge.space"
    path.write_text(dumps(tree))
    code, _ = _run(["classify", str(path), "--fr"])
    assert code == 2


def test_cli_generate_roundtrip(tmp_path):
    path = tmp_path / "p2.space"
    code, _ = _run(["generate", "p2", "-o", str(path)])
    assert code == 0
    tree = loads(path.read_text())
    sp, _, mods, _ = parse_space(tree)
    assert print_space(sp, modules=mods) == tree
    code, _ = _run(["classify", str(path), "--schematic"])
    assert code == 0


def test_cli_cohomology_table_and_figures(tmp_path):
    figs = tmp_path / "figs"
    code, out = _run(["cohomology", "builtin:p1", "--module", "O(-2)",
                      "--window=-5..5", "--figures", str(figs)])
    assert code == 0
    assert "H^1" in out
    assert (figs / "cohomology.csv").exists()
    assert (figs / "cohomology.png").exists()
    assert (figs / "space.png").exists()
    csv = (figs / "cohomology.csv").read_text()
    assert csv.splitlines()[0].startswith("i,")


def test_cli_json_format():
    code, out = _run(["--format", "json", "classify", "builtin:p1",
                      "--schematic"])
    assert code == 0
    tree = json.loads(out)
    assert tree["reports"]["schematic"]["verdict"] == "true"


def test_cli_verbs_cover_constructions(tmp_path):
    out_path = tmp_path / "prod.space"
    code, _ = _run(["product", "builtin:p1", "builtin:p1",
                    "-o", str(out_path)])
    assert code == 0
    sp, _, _, _ = parse_space(loads(out_path.read_text()))
    assert len(sp.points) == 9

    code, _ = _run(["minimize", "builtin:p1_doubled_generic"])
    assert code == 0

    code, _ = _run(["serre", "builtin:doubled_line", "--window=-5..-1"])
    assert code == 0

    code, _ = _run(["generate", "point(Q[x])"])
    assert code == 0


def test_cli_roof_eq_and_maps(tmp_path):
    # build a file with identity and chart-swap endomaps and two roofs
    from finspaces.spacefile import print_space
    p1 = projective_line()
    from finspaces.spaces import SpaceMap
    from finspaces.algebras import AlgHom
    c0, cinf, eta = p1.stalks["p0"], p1.stalks["pinf"], p1.stalks["eta"]
    swap = SpaceMap(p1, p1,
                    {"p0": "pinf", "pinf": "p0", "eta": "eta"},
                    {"p0": AlgHom(cinf, c0, [c0.var("x")]),
                     "pinf": AlgHom(c0, cinf, [cinf.var("u")]),
                     "eta": AlgHom(eta, eta, [eta.inv_gen(0)])})
    ident = SpaceMap.identity(p1)
    tree = print_space(p1, maps={"id": ident, "swap": swap},
                       roofs={"r_id": ("id", "id"), "r_swap": ("id", "swap")})
    path = tmp_path / "p1maps.space"
    path.write_text(dumps(tree))

    code, _ = _run(["classify", str(path), "--map", "swap", "--window=-4..4"])
    assert code == 0

    code, _ = _run(["roof-eq", str(path), "r_id", "r_id", "--window=-4..4"])
    assert code == 0
    code, _ = _run(["roof-eq", str(path), "r_id", "r_swap", "--window=-4..4"])
    assert code == 1

    code, _ = _run(["cylinder", str(path), "--map", "id",
                    "-o", str(tmp_path / "cyl.space")])
    assert code == 0
    code, _ = _run(["fiber", str(path), "--left-map", "id", "--right-map", "id",
                    "-o", str(tmp_path / "fib.space")])
    assert code == 0
    code, _ = _run(["rfi", str(path), "--map", "id", "--window=-2..2"])
    assert code == 0


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "finspaces.cli",
                           "validate", "builtin:p1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "valid" in proc.stdout
