"""Exact coefficient fields: the rationals and prime fields F_p.

Scalars are plain Python values: Fraction for Q, int in [0, p) for F_p.
All arithmetic is exact; there is no floating point anywhere downstream.
"""

from fractions import Fraction


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """The field Q (kind 'Q') or F_p (kind 'Fp', p prime)."""

    __slots__ = ("kind", "p")

    def __init__(self, kind, p=None):
        if kind == "Q":
            self.kind, self.p = "Q", None
        elif kind == "Fp":
            if not _is_prime(p):
                raise ValueError(f"F_p needs a prime, got {p}")
            self.kind, self.p = "Fp", p
        else:
            raise ValueError(f"unknown field kind {kind!r}")

    @classmethod
    def rationals(cls):
        return cls("Q")

    @classmethod
    def prime(cls, p):
        return cls("Fp", p)

    @classmethod
    def parse(cls, text):
        """Accepts 'Q', 'QQ', 'F7', 'Fp:7', 'GF(7)'."""
        t = text.strip()
        if t in ("Q", "QQ", "Rationals"):
            return cls.rationals()
        for prefix in ("Fp:", "F", "GF(", "Fp"):
            if t.startswith(prefix):
                digits = t[len(prefix):].rstrip(")")
                if digits.isdigit():
                    return cls.prime(int(digits))
        raise ValueError(f"cannot parse field {text!r}")

    def __eq__(self, other):
        return isinstance(other, Field) and self.kind == other.kind and self.p == other.p

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "Q" if self.kind == "Q" else f"F{self.p}"

    # scalar ops ------------------------------------------------------

    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def of_int(self, n):
        return Fraction(n) if self.kind == "Q" else n % self.p

    def of_fraction(self, fr):
        if self.kind == "Q":
            return Fraction(fr)
        num, den = fr.numerator, fr.denominator
        return (num * pow(den, -1, self.p)) % self.p

    def add(self, a, b):
        return a + b if self.kind == "Q" else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.kind == "Q" else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.kind == "Q" else (a * b) % self.p

    def neg(self, a):
        return -a if self.kind == "Q" else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a) if self.kind == "Q" else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def scalar_str(self, a):
        return str(a)

    def parse_scalar(self, text):
        fr = Fraction(text)
        return fr if self.kind == "Q" else self.of_fraction(fr)
