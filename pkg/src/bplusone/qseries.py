"""Truncated Laurent/Puiseux series in q, and Laurent series in z over them.

Exponents are stored as integers counting 1/48 units, so q^(1/2) has key 24
and q^(-1/4) has key -12.  A series carries a truncation ``trunc`` (same
units, or ``math.inf`` for an exact finite expression): coefficients below it
are known, coefficients at or above it are unknown and reading one raises.
"""
from __future__ import annotations

import math
from fractions import Fraction
from math import gcd, inf
from typing import Callable, Iterable

from .exactnum import (
    Cyclo8Rational,
    ONE,
    ZERO,
    invert_scalar,
    is_rational,
    rat,
    scalar_from_json,
    scalar_to_json,
    simplify,
)

GRID = 48


class TruncationError(ValueError):
    """Raised when a coefficient at or beyond the truncation is requested."""


def units(e) -> int:
    """Rational exponent -> integer count of 1/48 units."""
    e = rat(e) * GRID
    if e.denominator != 1:
        raise ValueError("exponent grid overflow")
    return int(e.numerator)


def from_units(k: int):
    return rat(k, GRID)


def _clean(x):
    x = simplify(x)
    return x if x else None


def _scalar(c):
    if isinstance(c, Cyclo8Rational):
        return simplify(c)
    return rat(c)


def _smul(a, b):
    # gmpy2 rationals do not defer to Cyclo8Rational, so dispatch by hand
    if isinstance(a, Cyclo8Rational):
        return a * b
    if isinstance(b, Cyclo8Rational):
        return b * a
    return a * b


def _sadd(a, b):
    if isinstance(a, Cyclo8Rational):
        return a + b
    if isinstance(b, Cyclo8Rational):
        return b + a
    return a + b


class QSeries:
    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: dict | None = None, trunc=inf):
        self.trunc = trunc
        out = {}
        if coeffs:
            for e, c in coeffs.items():
                if e >= trunc:
                    continue
                c = _clean(c)
                if c is not None:
                    out[e] = c
        self.coeffs = out

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_terms(cls, terms, trunc=None) -> "QSeries":
        """Build from {rational exponent: coefficient}; trunc is a rational exponent."""
        items = terms.items() if isinstance(terms, dict) else terms
        coeffs: dict = {}
        for e, c in items:
            k = units(e)
            coeffs[k] = _sadd(coeffs.get(k, ZERO), _scalar(c))
        return cls(coeffs, inf if trunc is None else units(trunc))

    @classmethod
    def const(cls, c, trunc=inf) -> "QSeries":
        return cls({0: _scalar(c)}, trunc)

    @classmethod
    def monomial(cls, e, c=1, trunc=inf) -> "QSeries":
        """c * q^e with e a rational exponent."""
        return cls({units(e): _scalar(c)}, trunc)

    @classmethod
    def zero(cls, trunc=inf) -> "QSeries":
        return cls({}, trunc)

    @classmethod
    def from_function(cls, fn: Callable[[int], object], start: int, step: int, trunc: int) -> "QSeries":
        """Coefficients fn(k) at unit exponents start, start+step, ... < trunc."""
        return cls({k: fn(k) for k in range(start, trunc, step)}, trunc)

    # -- inspection -------------------------------------------------------
    def valuation(self):
        """Lowest exponent (in units) with a nonzero coefficient; trunc if none known."""
        return min(self.coeffs) if self.coeffs else self.trunc

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.trunc == inf

    def coeff_units(self, k: int):
        if k >= self.trunc:
            raise TruncationError(
                f"coefficient of q^{from_units(k)} requested beyond truncation q^{from_units(self.trunc)}"
            )
        return self.coeffs.get(k, ZERO)

    def __getitem__(self, e):
        """Coefficient of q^e for a rational exponent e."""
        return self.coeff_units(units(e))

    def terms(self):
        """Sorted list of (rational exponent, coefficient)."""
        return [(from_units(k), self.coeffs[k]) for k in sorted(self.coeffs)]

    def grid_step(self) -> int:
        """gcd of all stored exponent differences (0 for at most one term)."""
        keys = sorted(self.coeffs)
        g = 0
        for k in keys[1:]:
            g = gcd(g, k - keys[0])
        return g

    def truncate(self, trunc) -> "QSeries":
        """Lower the truncation to ``trunc`` units."""
        return QSeries(self.coeffs, min(self.trunc, trunc))

    def trunc_exponent(self):
        return None if self.trunc == inf else from_units(self.trunc)

    def is_rational(self) -> bool:
        return all(not isinstance(c, Cyclo8Rational) for c in self.coeffs.values())

    # -- ring operations --------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QSeries):
            return other
        if is_rational(other) or isinstance(other, Cyclo8Rational):
            return QSeries.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = min(self.trunc, o.trunc)
        out = {k: c for k, c in self.coeffs.items() if k < t}
        for k, c in o.coeffs.items():
            if k < t:
                out[k] = _sadd(out[k], c) if k in out else c
        return QSeries(out, t)

    __radd__ = __add__

    def __neg__(self):
        return QSeries({k: -c for k, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "QSeries":
        c = _scalar(c)
        if not c:
            return QSeries.zero(self.trunc)
        return QSeries({k: _smul(v, c) for k, v in self.coeffs.items()}, self.trunc)

    def shift(self, e) -> "QSeries":
        """Multiply by q^e (rational exponent)."""
        k = units(e)
        return QSeries({j + k: c for j, c in self.coeffs.items()}, self.trunc + k)

    def __mul__(self, other):
        if is_rational(other) or isinstance(other, Cyclo8Rational):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        va, vb = self.valuation(), other.valuation()
        t = min(self.trunc + vb, other.trunc + va)
        if self.is_zero() or other.is_zero():
            return QSeries.zero(t)
        a = sorted(self.coeffs.items())
        b = sorted(other.coeffs.items())
        out: dict = {}
        for ka, ca in a:
            if ka + vb >= t:
                break
            for kb, cb in b:
                k = ka + kb
                if k >= t:
                    break
                p = _smul(ca, cb)
                out[k] = _sadd(out[k], p) if k in out else p
        return QSeries(out, t)

    __rmul__ = __mul__

    def inverse(self, order=None) -> "QSeries":
        """1/self.  ``order`` (units) caps the result when self is exact."""
        if self.is_zero():
            raise ZeroDivisionError("indeterminate division")
        v = self.valuation()
        lead = self.coeffs[v]
        t = self.trunc - 2 * v
        if order is not None:
            t = min(t, order)
        if len(self.coeffs) == 1:
            return QSeries({-v: invert_scalar(lead)}, t)
        if t == inf:
            raise ValueError("inverse of an exact non-monomial needs an order")
        step = self.grid_step()
        inv_lead = invert_scalar(lead)
        rest = [(k - v, c) for k, c in sorted(self.coeffs.items()) if k != v]
        res: dict = {0: inv_lead}
        k = step
        while k - v < t:
            acc = ZERO
            for j, c in rest:
                if j > k:
                    break
                r = res.get(k - j)
                if r:
                    acc = _sadd(acc, _smul(c, r))
            if acc:
                res[k] = -_smul(acc, inv_lead)
            k += step
        return QSeries({k - v: c for k, c in res.items()}, t)

    def __truediv__(self, other):
        if is_rational(other) or isinstance(other, Cyclo8Rational):
            return self.scale(invert_scalar(_scalar(other)))
        if not isinstance(other, QSeries):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("indeterminate division")
        order = None
        if other.trunc == inf and len(other.coeffs) > 1:
            if self.trunc == inf:
                raise ValueError("division of exact series needs a finite truncation")
            order = self.trunc - other.valuation() - self.valuation()
        return self * other.inverse(order)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QSeries.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- analytic-style operations -----------------------------------------
    def qderiv(self) -> "QSeries":
        """q d/dq, termwise."""
        return QSeries({k: _smul(c, from_units(k)) for k, c in self.coeffs.items()}, self.trunc)

    def exp(self, order=None) -> "QSeries":
        """exp(self) for self of strictly positive valuation."""
        v = self.valuation()
        if self.is_zero():
            return QSeries.const(1, self.trunc)
        if v <= 0:
            raise ValueError("exp of non-topologically-nilpotent series")
        t = self.trunc if order is None else min(self.trunc, order)
        if t == inf:
            raise ValueError("exp of an exact series needs an order")
        step = self.grid_step() or v
        step = gcd(step, v)
        d = [(k, _smul(c, rat(k))) for k, c in sorted(self.coeffs.items())]
        res: dict = {0: ONE}
        k = step
        # k E_k = sum_j j a_j E_{k-j}
        while k < t:
            acc = ZERO
            for j, c in d:
                if j > k:
                    break
                r = res.get(k - j)
                if r:
                    acc = _sadd(acc, _smul(c, r))
            if acc:
                res[k] = _smul(acc, rat(1, k))
            k += step
        return QSeries(res, t)

    def log(self, order=None) -> "QSeries":
        """log(self) for self = 1 + (positive valuation)."""
        if self.coeff_units(0) != 1 or any(k < 0 for k in self.coeffs):
            raise ValueError("log needs constant term 1")
        h = self - 1
        if h.is_zero():
            return QSeries.zero(self.trunc)
        t = self.trunc if order is None else min(self.trunc, order)
        if t == inf:
            raise ValueError("log of an exact series needs an order")
        quotient = self.qderiv() * self.inverse(t)
        return QSeries({k: _smul(c, rat(GRID, k)) for k, c in quotient.coeffs.items() if k < t}, t)

    def rescale(self, k) -> "QSeries":
        """Exponent map e -> k*e (tau -> k*tau)."""
        k = rat(k)
        out = {}
        for e, c in self.coeffs.items():
            ne = e * k
            if ne.denominator != 1:
                raise ValueError("exponent grid overflow")
            out[int(ne)] = c
        t = self.trunc * k
        if t != inf:
            # a non-integral truncation rounds up: every grid point below it is still known
            t = math.ceil(t)
        return QSeries(out, t)

    def substitute(self, inner: "QSeries") -> "QSeries":
        """Composition self(inner) where self has integral exponents."""
        if any(k % GRID for k in self.coeffs):
            raise ValueError("non-integral composition")
        v = inner.valuation()
        if inner.is_zero() or v <= 0:
            raise ValueError("inner series must have positive valuation")
        t = inf
        if self.trunc != inf:
            # smallest integral power whose coefficient is unknown
            t = -((-self.trunc) // GRID) * v
        powers = sorted(k // GRID for k in self.coeffs)
        result = QSeries.zero(t)
        if not powers:
            return result
        lo = powers[0]
        if lo >= 0:
            cur = inner ** lo
        else:
            if t == inf and len(inner.coeffs) > 1:
                raise ValueError("negative powers of an exact series need a truncation")
            order = None if t == inf else t + (-lo + 1) * v
            cur = inner.inverse(order) ** (-lo)
        idx = lo
        for p in powers:
            while idx < p:
                cur = cur * inner
                idx += 1
            result = result + cur.scale(self.coeffs[p * GRID])
        return result.truncate(t)

    def revert(self) -> "QSeries":
        """Compositional inverse of a series with valuation exactly q^1."""
        if self.is_zero() or self.valuation() != GRID or any(k % GRID for k in self.coeffs):
            raise ValueError("not reversible")
        t = self.trunc
        if t == inf:
            raise ValueError("reversion of an exact series needs a truncation")
        t = -((-t) // GRID) * GRID
        lead = self.coeffs[GRID]
        inv_lead = invert_scalar(lead)
        higher = QSeries({k: c for k, c in self.coeffs.items() if k != GRID}, t)
        b = QSeries({GRID: inv_lead}, t)
        # fixed point b = (y - higher(b)) / lead; one order gained per step
        for _ in range(t // GRID):
            nb = (QSeries.monomial(1, 1, t) - higher.substitute(b)).scale(inv_lead)
            if nb == b and nb.trunc == b.trunc:
                break
            b = nb
        return b.truncate(t)

    # -- comparison / output ------------------------------------------------
    def __eq__(self, other):
        """Equality of all coefficients below the common truncation."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = min(self.trunc, o.trunc)
        a = {k: c for k, c in self.coeffs.items() if k < t}
        b = {k: c for k, c in o.coeffs.items() if k < t}
        return a == b

    def same(self, other: "QSeries") -> bool:
        """Strict identity: equal coefficients and equal truncation."""
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        return f"QSeries({self})"

    def __str__(self):
        parts = []
        for e, c in self.terms():
            cs = str(c)
            if isinstance(c, Cyclo8Rational):
                cs = f"({cs})"
            if e == 0:
                parts.append(cs)
            elif e == 1:
                parts.append(f"{cs}*q")
            else:
                parts.append(f"{cs}*q^({e})")
        s = " + ".join(parts) if parts else "0"
        if self.trunc != inf:
            s += f" + O(q^({from_units(self.trunc)}))"
        return s

    def to_json(self) -> dict:
        return {
            "grid": GRID,
            "trunc": None if self.trunc == inf else int(self.trunc),
            "terms": [[int(k), scalar_to_json(self.coeffs[k])] for k in sorted(self.coeffs)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QSeries":
        if obj.get("grid", GRID) != GRID:
            raise ValueError("unsupported exponent grid")
        t = obj.get("trunc")
        return cls({int(k): scalar_from_json(c) for k, c in obj["terms"]}, inf if t is None else int(t))


def qs_arith(a: QSeries, b: QSeries, op: str) -> QSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def qs_exp(a: QSeries, order=None) -> QSeries:
    return a.exp(None if order is None else units(order))


def qs_qderiv(a: QSeries) -> QSeries:
    return a.qderiv()


def qs_substitute(outer: QSeries, inner: QSeries) -> QSeries:
    return outer.substitute(inner)


def qs_revert(a: QSeries) -> QSeries:
    return a.revert()


def qs_rescale(a: QSeries, k) -> QSeries:
    return a.rescale(k)


# ---------------------------------------------------------------------------
# Laurent series in z


class _ZSeries:
    """Common machinery: terms {n: coefficient} for n >= -1, tracked up to zorder."""

    __slots__ = ("terms", "zorder")

    def __init__(self, terms: dict | None = None, zorder: int = 0):
        self.zorder = zorder
        out = {}
        for n, c in (terms or {}).items():
            if n > zorder:
                continue
            if n < -1:
                if self._nonzero(c):
                    raise ValueError("z-pole overflow")
                continue
            if self._nonzero(c):
                out[n] = c
        self.terms = out

    # subclasses define the coefficient ring
    @staticmethod
    def _nonzero(c) -> bool:
        raise NotImplementedError

    @staticmethod
    def _zero():
        raise NotImplementedError

    @staticmethod
    def _one():
        raise NotImplementedError

    def lowest(self):
        return min(self.terms) if self.terms else None

    def __getitem__(self, n: int):
        if n > self.zorder:
            raise TruncationError(f"z^{n} requested beyond z-order {self.zorder}")
        return self.terms.get(n, self._zero())

    def coefficient(self, n: int):
        return self[n]

    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        zo = min(self.zorder, o.zorder)
        out = {n: c for n, c in self.terms.items() if n <= zo}
        for n, c in o.terms.items():
            if n <= zo:
                out[n] = out[n] + c if n in out else c
        return type(self)(out, zo)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({n: -c for n, c in self.terms.items()}, self.zorder)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.scale(other)
        la, lb = self.lowest(), o.lowest()
        if la is None or lb is None:
            zo = min(self.zorder + (lb if lb is not None else 0), o.zorder + (la if la is not None else 0))
            return type(self)({}, zo)
        if la + lb < -1:
            raise ValueError("z-pole overflow")
        zo = min(self.zorder + lb, o.zorder + la)
        out: dict = {}
        for n1, c1 in self.terms.items():
            for n2, c2 in o.terms.items():
                n = n1 + n2
                if n > zo:
                    continue
                p = c1 * c2
                out[n] = out[n] + p if n in out else p
        return type(self)(out, zo)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        return type(self)({n: self._scale_coeff(v, c) for n, v in self.terms.items()}, self.zorder)

    @staticmethod
    def _scale_coeff(v, c):
        return v * c

    def truncate(self, zorder: int):
        return type(self)(self.terms, min(zorder, self.zorder))

    def shift(self, k: int):
        """Multiply by z^k."""
        return type(self)({n + k: c for n, c in self.terms.items()}, self.zorder + k)

    def exp(self):
        lo = self.lowest()
        if lo is not None and lo <= 0:
            raise ValueError("exp of non-nilpotent z-series")
        result = type(self)({0: self._one()}, self.zorder)
        if lo is None:
            return result
        term = result
        for k in range(1, self.zorder // lo + 1):
            term = (term * self).scale(rat(1, k))
            result = result + term
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        zo = min(self.zorder, o.zorder)
        for n in range(-1, zo + 1):
            if self.terms.get(n, self._zero()) != o.terms.get(n, self._zero()):
                return False
        return True

    __hash__ = None


class FormalZ(_ZSeries):
    """Laurent series in z with QSeries coefficients."""

    __slots__ = ()

    @staticmethod
    def _nonzero(c) -> bool:
        return not (isinstance(c, QSeries) and c.is_zero() and c.trunc == inf)

    @staticmethod
    def _zero():
        return QSeries.zero()

    @staticmethod
    def _one():
        return QSeries.const(1)

    @staticmethod
    def _scale_coeff(v, c):
        return v * c

    def map(self, fn: Callable[[QSeries], QSeries]) -> "FormalZ":
        return FormalZ({n: fn(c) for n, c in self.terms.items()}, self.zorder)

    def qmul(self, s: QSeries) -> "FormalZ":
        return self.map(lambda c: c * s)

    def __repr__(self):
        return "FormalZ(" + ", ".join(f"z^{n}: {c}" for n, c in sorted(self.terms.items())) + ")"

    def to_json(self) -> dict:
        return {"zorder": self.zorder, "terms": [[n, self.terms[n].to_json()] for n in sorted(self.terms)]}

    @classmethod
    def from_json(cls, obj: dict) -> "FormalZ":
        return cls({int(n): QSeries.from_json(c) for n, c in obj["terms"]}, int(obj["zorder"]))


class NumericZ(_ZSeries):
    """Laurent series in z with exact scalar coefficients."""

    __slots__ = ()

    def __init__(self, terms: dict | None = None, zorder: int = 0):
        super().__init__({n: simplify(_scalar(c)) for n, c in (terms or {}).items()}, zorder)

    @staticmethod
    def _nonzero(c) -> bool:
        return bool(c)

    @staticmethod
    def _zero():
        return ZERO

    @staticmethod
    def _one():
        return ONE

    @staticmethod
    def _scale_coeff(v, c):
        return _smul(v, _scalar(c))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        zo = min(self.zorder, o.zorder)
        out = {n: c for n, c in self.terms.items() if n <= zo}
        for n, c in o.terms.items():
            if n <= zo:
                out[n] = _sadd(out[n], c) if n in out else c
        return NumericZ(out, zo)

    __radd__ = __add__

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.scale(other)
        la, lb = self.lowest(), o.lowest()
        if la is None or lb is None:
            return NumericZ({}, min(self.zorder + (lb or 0), o.zorder + (la or 0)))
        if la + lb < -1:
            raise ValueError("z-pole overflow")
        zo = min(self.zorder + lb, o.zorder + la)
        out: dict = {}
        for n1, c1 in self.terms.items():
            for n2, c2 in o.terms.items():
                n = n1 + n2
                if n > zo:
                    continue
                p = _smul(c1, c2)
                out[n] = _sadd(out[n], p) if n in out else p
        return NumericZ(out, zo)

    def __repr__(self):
        return "NumericZ(" + ", ".join(f"z^{n}: {c}" for n, c in sorted(self.terms.items())) + ")"

    def __str__(self):
        parts = [f"({c})*z^{n}" for n, c in sorted(self.terms.items())]
        return (" + ".join(parts) if parts else "0") + f" + O(z^{self.zorder + 1})"

    def to_json(self) -> dict:
        return {"zorder": self.zorder, "terms": [[n, scalar_to_json(self.terms[n])] for n in sorted(self.terms)]}

    @classmethod
    def from_json(cls, obj: dict) -> "NumericZ":
        return cls({int(n): scalar_from_json(c) for n, c in obj["terms"]}, int(obj["zorder"]))

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, zorder: int, start: int = 0) -> "NumericZ":
        return cls({start + i: c for i, c in enumerate(coeffs)}, zorder)


def zs_arith(a, b, op: str):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def zs_exp(a):
    return a.exp()


class TSeries:
    """Generating series sum_r Psi(x z, p^r) t^(r+1): keys r+1 >= 1, NumericZ values."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        terms = dict(terms or {})
        if 0 in terms or any(k < 1 for k in terms):
            raise ValueError("t-exponents start at 1")
        self.terms = terms

    @classmethod
    def from_psi(cls, psi_by_r: dict) -> "TSeries":
        return cls({r + 1: v for r, v in psi_by_r.items()})

    def psi(self, r: int) -> NumericZ:
        return self.terms[r + 1]

    def z_coefficient(self, n: int) -> dict:
        """{t-exponent: scalar} for the z^n coefficient."""
        return {k: v[n] for k, v in self.terms.items()}

    def to_json(self) -> dict:
        return {"terms": [[k, self.terms[k].to_json()] for k in sorted(self.terms)]}


def bernoulli(n: int):
    """Exact Bernoulli number B_n with B_1 = -1/2."""
    return _bernoulli_table(n)[n]


_BERN: list = []
_AT: list = []


def _bernoulli_table(n: int) -> list:
    # Akiyama-Tanigawa gives B_1 = +1/2; flip it afterwards
    while len(_BERN) <= n:
        m = len(_BERN)
        _AT.append(rat(1, m + 1))
        for j in range(m, 0, -1):
            _AT[j - 1] = j * (_AT[j - 1] - _AT[j])
        _BERN.append(_AT[0] if m != 1 else rat(-1, 2))
    return _BERN


def fraction_of(x) -> Fraction:
    x = rat(x)
    return Fraction(int(x.numerator), int(x.denominator))
