"""The localized category of schematic spaces by quasi-isomorphisms.

A morphism class X --> Y is a roof: an apex X' with a quasi-isomorphism down
to X and a schematic morphism to Y.  Composition goes through the fiber
product; equality of two roofs is decided on the minimal model of the fiber
product of their left legs, where literal equality of the composites is both
sound and complete.  Completeness rests on one composed derivation rather
than a single quotable fact: the comparison map into the minimal apex is
itself a quasi-isomorphism by the two-out-of-three property, and on a
minimal space two equivalent morphisms are literally equal.
"""

from .errors import NotInvertible
from .spaces import SpaceMap, fiber_product
from .algebras import AlgHom
from .classify import (map_is_quasi_iso, map_is_schematic, minimal_model,
                       removable_points, DEFAULT_WINDOW)


class Roof:
    """apex X' with left: X' -> X (quasi-iso) and right: X' -> Y (schematic).

    Certificates are ClassReports when computed, or strings recording a
    derivation (base change / composition stability)."""

    def __init__(self, left, right, left_cert=None, right_cert=None,
                 window=DEFAULT_WINDOW, certify=True):
        if left.source is not right.source:
            raise ValueError("roof legs must share their apex")
        self.apex = left.source
        self.left = left
        self.right = right
        if certify and left_cert is None:
            left_cert = map_is_quasi_iso(left, window)
            if left_cert.verdict is False:
                raise ValueError("left leg is not a quasi-isomorphism")
        if certify and right_cert is None:
            right_cert = map_is_schematic(right)
            if right_cert.verdict is False:
                raise ValueError("right leg is not schematic")
        self.left_cert = left_cert
        self.right_cert = right_cert

    @classmethod
    def from_map(cls, f, window=DEFAULT_WINDOW, certify=True):
        """The class [Id, f] of a plain schematic morphism."""
        ident = SpaceMap.identity(f.source)
        return cls(ident, f, left_cert="identity", window=window,
                   certify=certify)

    @property
    def source(self):
        return self.left.target

    @property
    def target(self):
        return self.right.target

    def __repr__(self):
        return f"Roof({self.source} <- {self.apex} -> {self.target})"


def compose(f, g, window=DEFAULT_WINDOW, verify=False):
    """g o f for roofs f: X --> Y, g: Y --> Z, via the fiber product of
    f.right and g.left; the new left certificate is derived (quasi-isos are
    stable under base change and closed under composition)."""
    if f.target is not g.source and set(f.target.points) != set(g.source.points):
        raise ValueError("roofs are not composable")
    W, p1, p2 = fiber_product(f.right, g.left)
    left = f.left.compose(p1)
    right = g.right.compose(p2)
    if verify:
        return Roof(left, right, window=window, certify=True)
    return Roof(left, right,
                left_cert="derived: base change of a quasi-isomorphism, "
                          "composed with one",
                right_cert="derived: composition of schematic morphisms",
                certify=False)


def invert(f, window=DEFAULT_WINDOW):
    """[phi, g]^{-1} = [g, phi]; needs the right leg to be a
    quasi-isomorphism."""
    cert = map_is_quasi_iso(f.right, window)
    if cert.verdict is not True:
        raise NotInvertible(
            "right leg is not a certified quasi-isomorphism"
            + ("" if cert.verdict is False else " (undecided)"))
    return Roof(f.right, f.left, left_cert=cert,
                right_cert="derived: quasi-isomorphism, hence schematic",
                certify=False)


def _section_into(F, W, qmap):
    """A monotone section F -> W of the Kolmogorov quotient restricted to the
    minimal model F (representatives are genuine points of W)."""
    pm = {p: p for p in F.points}
    co = {p: AlgHom.identity(F.stalks[p]) for p in F.points}
    return SpaceMap(F, W, pm, co)


def roof_equal(f, g, window=DEFAULT_WINDOW):
    """Equality in the localized category.

    Form W = apex(f) x_X apex(g) over the two left legs, take its minimal
    model F, and compare the two composites F -> Y literally (point maps and
    comorphisms on generators)."""
    if f.source is not g.source or f.target is not g.target:
        if set(f.source.points) != set(g.source.points) or \
                set(f.target.points) != set(g.target.points):
            raise ValueError("roofs do not share endpoints")
    W, p1, p2 = fiber_product(f.left, g.left)
    F, qmap, incl = minimal_model(W)
    s = _section_into(F, W, qmap)
    left_comp = f.right.compose(p1.compose(s))
    right_comp = g.right.compose(p2.compose(s))
    return left_comp.literally_equal(right_comp)


def identity_roof(space):
    ident = SpaceMap.identity(space)
    return Roof(ident, ident, left_cert="identity",
                right_cert="identity", certify=False)
