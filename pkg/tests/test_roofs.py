"""The localized category: roof composition, inversion, equality."""

import pytest

from finspaces.fields import Field
from finspaces.algebras import AlgHom
from finspaces.spaces import SpaceMap, kolmogorov_quotient
from finspaces.fixtures import (projective_line,
                                projective_line_doubled_generic, affine_line,
                                point_space)
from finspaces.classify import space_from_cover
from finspaces.roofs import (Roof, compose, invert, roof_equal, identity_roof)
from finspaces.errors import NotInvertible

Q = Field.rationals()
WINDOW = (-4, 4)


def chart_swap(p1):
    c0, cinf, eta = p1.stalks["p0"], p1.stalks["pinf"], p1.stalks["eta"]
    return SpaceMap(p1, p1,
                    {"p0": "pinf", "pinf": "p0", "eta": "eta"},
                    {"p0": AlgHom(cinf, c0, [c0.var("x")]),
                     "pinf": AlgHom(c0, cinf, [cinf.var("u")]),
                     "eta": AlgHom(eta, eta, [eta.inv_gen(0)])})


def test_identity_laws():
    p1 = projective_line()
    rid = identity_roof(p1)
    assert roof_equal(rid, identity_roof(p1), WINDOW)
    comp = compose(rid, identity_roof(p1), WINDOW)
    assert roof_equal(comp, rid, WINDOW)


def test_identity_vs_chart_swap():
    p1 = projective_line()
    rid = identity_roof(p1)
    rswap = Roof.from_map(chart_swap(p1), certify=False)
    assert roof_equal(rid, rswap, WINDOW) is False
    # swap o swap is the identity class
    both = compose(rswap, rswap, WINDOW)
    assert roof_equal(both, rid, WINDOW)


def test_plain_map_composition_matches_roof_composition():
    # (Id, f) o (Id, g) = (Id, f o g) as classes
    p1 = projective_line()
    s = chart_swap(p1)
    r1 = Roof.from_map(s, certify=False)
    comp = compose(r1, r1, WINDOW)
    direct = Roof.from_map(s.compose(s), certify=False)
    assert roof_equal(comp, direct, WINDOW)


def test_invert_requires_quasi_iso():
    p1 = projective_line()
    sub_incl = None
    from finspaces.spaces import open_subspace
    sub, incl = open_subspace(p1, p1.up_set("p0"))
    r = Roof(SpaceMap.identity(sub), incl, left_cert="identity",
             right_cert="open inclusion", certify=False)
    with pytest.raises(NotInvertible):
        invert(r, WINDOW)


def test_invert_involution_and_inverse_laws():
    pdg = projective_line_doubled_generic()
    Y, qmap = space_from_cover(pdg, [pdg.up_set("p0"), pdg.up_set("pinf")])
    q = Roof.from_map(qmap, certify=False)
    qi = invert(q, WINDOW)
    qii = invert(qi, WINDOW)
    assert roof_equal(qii, q, WINDOW)
    assert roof_equal(compose(q, qi, WINDOW), identity_roof(pdg), WINDOW)
    assert roof_equal(compose(qi, q, WINDOW), identity_roof(Y), WINDOW)


def test_prop6_precompose_by_quasi_iso():
    # [phi, f] = [phi o psi, f o psi] for a quasi-isomorphism psi
    pdg = projective_line_doubled_generic()
    quot, psi = kolmogorov_quotient(pdg)   # psi: pdg -> quot, a quasi-iso
    s3 = chart_swap_from_quot(quot)
    base = Roof(SpaceMap.identity(quot), s3, left_cert="identity",
                right_cert=None, certify=False)
    pre = Roof(psi, s3.compose(psi), left_cert=None, right_cert=None,
               certify=False)
    assert roof_equal(base, pre, WINDOW)


def chart_swap_from_quot(quot):
    # the quotient of the doubled-generic model is the 3-point P^1 with
    # points p0, pinf, eta1
    c0, cinf, eta = quot.stalks["p0"], quot.stalks["pinf"], quot.stalks["eta1"]
    return SpaceMap(quot, quot,
                    {"p0": "pinf", "pinf": "p0", "eta1": "eta1"},
                    {"p0": AlgHom(cinf, c0, [c0.var("x")]),
                     "pinf": AlgHom(c0, cinf, [cinf.var("u")]),
                     "eta1": AlgHom(eta, eta, [eta.inv_gen(0)])})


def test_equality_is_an_equivalence_on_samples():
    p1 = projective_line()
    rid = identity_roof(p1)
    rswap = Roof.from_map(chart_swap(p1), certify=False)
    rswap2 = Roof.from_map(chart_swap(p1), certify=False)
    samples = [rid, rswap, rswap2]
    for r in samples:
        assert roof_equal(r, r, WINDOW)
    for a in samples:
        for b in samples:
            assert roof_equal(a, b, WINDOW) == roof_equal(b, a, WINDOW)
    assert roof_equal(rswap, rswap2, WINDOW)
    # transitivity instance
    assert roof_equal(rid, rid, WINDOW) and roof_equal(rswap, rswap2, WINDOW)


def test_associativity_on_composable_triples():
    p1 = projective_line()
    s = chart_swap(p1)
    r = Roof.from_map(s, certify=False)
    rid = identity_roof(p1)
    for triple in [(r, rid, r), (rid, r, rid), (r, r, r)]:
        a, b, c = triple
        left = compose(compose(a, b, WINDOW), c, WINDOW)
        right = compose(a, compose(b, c, WINDOW), WINDOW)
        assert roof_equal(left, right, WINDOW)


def test_well_definedness_of_composition():
    # if [f] = [F] and [g] = [G], then [g o f] = [G o F]
    pdg = projective_line_doubled_generic()
    quot, psi = kolmogorov_quotient(pdg)
    s = chart_swap_from_quot(quot)
    f = Roof(SpaceMap.identity(quot), s, left_cert="identity",
             right_cert=None, certify=False)
    F = Roof(psi, s.compose(psi), left_cert=None, right_cert=None,
             certify=False)
    g = identity_roof(quot)
    G = Roof(psi, psi, left_cert=None, right_cert=None, certify=False)
    assert roof_equal(f, F, WINDOW) and roof_equal(g, G, WINDOW)
    assert roof_equal(compose(f, g, WINDOW), compose(F, G, WINDOW), WINDOW)


def test_certification_rejects_non_quasi_iso_left_leg():
    p1 = projective_line()
    from finspaces.spaces import open_subspace
    sub, incl = open_subspace(p1, p1.up_set("p0"))
    with pytest.raises(ValueError):
        Roof(incl, incl, window=WINDOW, certify=True)
