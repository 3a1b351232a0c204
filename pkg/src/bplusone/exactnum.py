"""Exact scalars: rationals (gmpy2.mpq) and the cyclotomic field Q(zeta_8).

Elements of Q(zeta_8) are stored in the basis 1, z, z^2, z^3 with z^4 = -1.
Arithmetic between a Cyclo8Rational and a plain rational is supported in
both directions.  ``simplify`` demotes a field element with vanishing
irrational part to a plain rational, which is how series coefficients are
kept canonical.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpq

Rational = type(mpq(0))
Scalar = Union["Cyclo8Rational", Rational, int]

ZERO = mpq(0)
ONE = mpq(1)


def rat(x, d=None) -> Rational:
    """Coerce ints, Fractions, strings like '3/4' and mpq values to mpq."""
    if d is not None:
        return mpq(x, d)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def is_rational(x) -> bool:
    return isinstance(x, (int, Rational, Fraction))


class Cyclo8Rational:
    """a0 + a1 z + a2 z^2 + a3 z^3 with z a primitive 8th root of unity."""

    __slots__ = ("coords",)

    def __init__(self, coords=(0, 0, 0, 0)):
        if len(coords) != 4:
            raise ValueError("Cyclo8Rational needs 4 coordinates")
        self.coords = tuple(rat(c) for c in coords)

    @classmethod
    def from_rational(cls, x) -> "Cyclo8Rational":
        return cls((x, 0, 0, 0))

    # -- coercion helpers -------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, Cyclo8Rational):
            return other.coords
        if is_rational(other):
            return (rat(other), ZERO, ZERO, ZERO)
        return None

    def is_rational(self) -> bool:
        return not (self.coords[1] or self.coords[2] or self.coords[3])

    def __bool__(self) -> bool:
        return any(self.coords)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a = self.coords
        return Cyclo8Rational((a[0] + o[0], a[1] + o[1], a[2] + o[2], a[3] + o[3]))

    __radd__ = __add__

    def __neg__(self):
        a = self.coords
        return Cyclo8Rational((-a[0], -a[1], -a[2], -a[3]))

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a = self.coords
        return Cyclo8Rational((a[0] - o[0], a[1] - o[1], a[2] - o[2], a[3] - o[3]))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if is_rational(other):
            r = rat(other)
            a = self.coords
            return Cyclo8Rational((a[0] * r, a[1] * r, a[2] * r, a[3] * r))
        if not isinstance(other, Cyclo8Rational):
            return NotImplemented
        a0, a1, a2, a3 = self.coords
        b0, b1, b2, b3 = other.coords
        # z^4 = -1 folds degrees 4..6 back with a sign
        c0 = a0 * b0 - (a1 * b3 + a2 * b2 + a3 * b1)
        c1 = a0 * b1 + a1 * b0 - (a2 * b3 + a3 * b2)
        c2 = a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3
        c3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
        return Cyclo8Rational((c0, c1, c2, c3))

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclo8Rational":
        """Complex conjugation z -> z^-1 = -z^3."""
        a0, a1, a2, a3 = self.coords
        return Cyclo8Rational((a0, -a3, -a2, -a1))

    def galois(self, k: int) -> "Cyclo8Rational":
        """The automorphism z -> z^k for odd k."""
        if k % 2 == 0:
            raise ValueError("Galois exponent must be odd")
        out = Cyclo8Rational()
        for j, a in enumerate(self.coords):
            if a:
                out = out + root_of_unity(mpq(j * k, 8)) * a
        return out

    def norm(self) -> Rational:
        """Field norm down to Q (product of the four conjugates)."""
        p = self * self.galois(3) * self.galois(5) * self.galois(7)
        return p.coords[0]

    def inverse(self) -> "Cyclo8Rational":
        if not self:
            raise ZeroDivisionError("zero divisor")
        others = self.galois(3) * self.galois(5) * self.galois(7)
        n = (self * others).coords[0]
        return others * (ONE / n)

    def __truediv__(self, other):
        if is_rational(other):
            if not other:
                raise ZeroDivisionError("zero divisor")
            return self * (ONE / rat(other))
        if not isinstance(other, Cyclo8Rational):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if not is_rational(other):
            return NotImplemented
        return self.inverse() * rat(other)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclo8Rational((1, 0, 0, 0))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coords == tuple(o)

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    def __repr__(self):
        return f"Cyclo8Rational({', '.join(str(c) for c in self.coords)})"

    def __str__(self):
        names = ("", "z", "z^2", "z^3")
        parts = []
        for c, n in zip(self.coords, names):
            if not c:
                continue
            if not n:
                parts.append(str(c))
            elif c == 1:
                parts.append(n)
            elif c == -1:
                parts.append("-" + n)
            else:
                parts.append(f"{c}*{n}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def to_json(self):
        return [f"{c.numerator}/{c.denominator}" for c in self.coords]


def root_of_unity(a) -> Cyclo8Rational:
    """exp(2 pi i a) for a in (1/8)Z, i.e. z^(8a)."""
    a = rat(a)
    k = a * 8
    if k.denominator != 1:
        raise ValueError("phase outside Q(ζ₈)")
    k = int(k.numerator) % 8
    coords = [0, 0, 0, 0]
    coords[k % 4] = -1 if k >= 4 else 1
    return Cyclo8Rational(coords)


def simplify(x):
    """Canonical scalar: a plain mpq whenever the value is rational."""
    if isinstance(x, Cyclo8Rational):
        return x.coords[0] if x.is_rational() else x
    if isinstance(x, Rational):
        return x
    return rat(x)


def as_cyclo(x) -> Cyclo8Rational:
    if isinstance(x, Cyclo8Rational):
        return x
    return Cyclo8Rational.from_rational(x)


def phase(a):
    """exp(2 pi i a) as a canonical scalar (plain rational when real)."""
    return simplify(root_of_unity(a))


def field_arith(x, y, op: str):
    x, y = as_cyclo(x), as_cyclo(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def scalar_to_json(x):
    x = simplify(x)
    if isinstance(x, Cyclo8Rational):
        return x.to_json()
    return str(x)


def scalar_from_json(obj):
    if isinstance(obj, str):
        return rat(obj)
    if isinstance(obj, (int,)):
        return rat(obj)
    return simplify(Cyclo8Rational(tuple(rat(c) for c in obj)))


def scalar_str(x) -> str:
    x = simplify(x)
    return str(x)


def invert_scalar(x):
    if isinstance(x, Cyclo8Rational):
        return simplify(x.inverse())
    if not x:
        raise ZeroDivisionError("zero divisor")
    return ONE / rat(x)


__all__ = [
    "Cyclo8Rational",
    "Rational",
    "rat",
    "root_of_unity",
    "phase",
    "simplify",
    "as_cyclo",
    "field_arith",
    "scalar_to_json",
    "scalar_from_json",
    "invert_scalar",
    "is_rational",
    "gmpy2",
]
