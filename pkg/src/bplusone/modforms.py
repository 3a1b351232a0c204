"""Named modular forms as truncated q-series, and the three re-expansions
used downstream: coefficient in u, polynomial in U, Laurent series in Ũ - 2.

Series whose expansions carry an eighth-root-of-unity prefactor also come in
a rational "core" form, e.g. f = 1^(-1/8) f_core and U = 1^(1/4) U_core,
which keeps the heavy products in plain rational arithmetic.
"""
from __future__ import annotations

from functools import lru_cache
from math import inf, isqrt

from .exactnum import ONE, ZERO, Cyclo8Rational, phase, rat, simplify
from .qseries import GRID, FormalZ, QSeries, bernoulli, from_units, units, _smul, _sadd


class OrderStarvation(ValueError):
    """Input series is not known far enough for the requested extraction."""

    def __init__(self, needed, message="order starvation"):
        super().__init__(f"{message}: input must be known past q^({needed})")
        self.needed = needed


# ---------------------------------------------------------------------------
# building blocks at a working truncation T (units of 1/48)


def _euler_product(m, T: int) -> QSeries:
    """prod_{n>0} (1 - q^(m n)) via the pentagonal number theorem."""
    step = units(m)
    out = {}
    k = 0
    while True:
        done = True
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2 * step
            if e < T:
                out[e] = rat(-1 if kk % 2 else 1)
                done = False
        if done and k > 0:
            break
        k += 1
    return QSeries(out, T)


def _eta_power(k: int, m, T: int) -> QSeries:
    """eta(m tau)^k with m in {1/2, 1, 2}."""
    lead = units(rat(m) * k / 24)
    core = _euler_product(m, T - lead)
    if k < 0:
        core = core.inverse()
    return (core ** abs(k)).shift(from_units(lead))


def _theta_sum(mu: int, nu: int, T: int) -> QSeries:
    out = {}
    bound = isqrt(max(T, 0) // 6) + 2
    for n in range(-bound, bound + 1):
        a2 = (2 * n + mu) ** 2  # (n + mu/2)^2 * 4
        e = a2 * 6  # (a2/4)/2 * 48
        if e < T:
            c = rat(-1 if (nu and n % 2) else 1)
            out[e] = out.get(e, ZERO) + c
    return QSeries(out, T)


def _sigma(n: int, k: int, odd_only: bool = False) -> int:
    s = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            for dd in {d, n // d}:
                if not odd_only or dd % 2:
                    s += dd ** k
    return s


def _eisenstein(k: int, T: int) -> QSeries:
    if k % 2:
        return QSeries.zero(T)
    out = {0: -bernoulli(k) / (2 * k)}
    n = 1
    while n * GRID < T:
        out[n * GRID] = rat(_sigma(n, k - 1))
        n += 1
    return QSeries(out, T)


def _e_value(which: int, T: int) -> QSeries:
    if which == 1:
        out = {0: rat(-1, 6)}
        n = 1
        while n * GRID < T:
            out[n * GRID] = rat(-4 * _sigma(n, 1, True))
            n += 1
        return QSeries(out, T)
    out = {0: rat(1, 12)}
    n = 1
    while n * 24 < T:
        sign = -1 if (which == 3 and n % 2) else 1
        out[n * 24] = rat(2 * sign * _sigma(n, 1, True))
        n += 1
    return QSeries(out, T)


def _ensure(builder, T: int) -> QSeries:
    """Run builder at increasing working precision until it reaches T."""
    work = T
    for _ in range(50):
        s = builder(work)
        if s.trunc >= T:
            return s.truncate(T)
        work += (T - s.trunc) + GRID
    raise RuntimeError("working precision did not converge")


# phases attached to the rational cores
F_PHASE = rat(-1, 8)  # f = 1^(-1/8) f_core
U_PHASE = rat(1, 4)  # U = 1^(1/4) U_core
UL_PHASE = rat(1, 4)  # u = 1^(1/4) u_core


def _build(name: str, T: int) -> QSeries:
    s = _raw(name)
    return _ensure(s, T)


def _raw(name: str):
    if name == "eta":
        return lambda T: _eta_power(1, 1, T)
    if name == "eta2":
        return lambda T: _eta_power(1, 2, T)
    if name == "eta_half":
        return lambda T: _eta_power(1, rat(1, 2), T)
    if name == "Delta":
        return lambda T: _eta_power(24, 1, T)
    if name.startswith("G") and name[1:].isdigit():
        return lambda T: _eisenstein(int(name[1:]), T)
    if name == "theta":
        return lambda T: _theta_sum(0, 0, T)
    if name == "theta01":
        return lambda T: _theta_sum(0, 1, T)
    if name == "theta10":
        return lambda T: _theta_sum(1, 0, T)
    if name == "theta11":
        return lambda T: QSeries.zero(T)
    if name in ("e1", "e2", "e3"):
        return lambda T: _e_value(int(name[1]), T)
    if name == "f_core":
        return lambda T: (_cached("theta01", T) * _cached("theta10", T)).scale(rat(1, 2))
    if name == "f":
        return lambda T: _cached("f_core", T).scale(phase(F_PHASE))
    if name == "R":
        return lambda T: (
            (_euler_product(1, T + 24) ** 48)
            * ((_euler_product(rat(1, 2), T + 24) ** 24) * (_euler_product(2, T + 24) ** 24)).inverse()
        ).shift(rat(-1, 2))
    if name == "U_core":
        return lambda T: _cached("e3", T + 12).scale(-3) * (_cached("f_core", T + 24) ** 2).inverse()
    if name == "U":
        return lambda T: _cached("U_core", T).scale(phase(U_PHASE))
    if name == "u_core":
        # u = 1/U = 1^(-1/4)/U_core = 1^(1/4) * (-1/U_core)
        return lambda T: _cached("U_core", T + 24).inverse().scale(-1)
    if name == "u":
        return lambda T: _cached("u_core", T).scale(phase(UL_PHASE))
    if name == "G":
        return lambda T: _cached("G2", T) + _cached("e3", T).scale(rat(1, 2))
    if name == "eta2sq_over_eta4":
        return lambda T: (_euler_product(2, T) ** 2) * (_euler_product(1, T) ** 4).inverse()
    if name == "eta4_over_eta2sq":
        return lambda T: (_euler_product(1, T) ** 4) * (_euler_product(2, T) ** 2).inverse()
    if name == "Utilde":
        return lambda T: _cached("e1", T).scale(-12) * (_cached("eta2sq_over_eta4", T) ** 2)
    if name == "utilde":
        return lambda T: _cached("Utilde", T).inverse()
    if name == "fW":
        return lambda T: _cached("eta4_over_eta2sq", T).scale(rat(-1, 2))
    if name == "theta10_reduced":
        # q^(-1/8) theta_10^0 = 2 + 2q + 2q^3 + ...
        return lambda T: _cached("theta10", T + 6).shift(rat(-1, 8))
    if name == "blowup_gauss":
        # (4 G_2 + 2 e_1) eta(2 tau)^4 / eta(tau)^8
        return lambda T: (_cached("G2", T).scale(4) + _cached("e1", T).scale(2)) * (
            _cached("eta2sq_over_eta4", T) ** 2
        )
    raise KeyError(f"unknown series {name!r}")


@lru_cache(maxsize=None)
def _cached(name: str, T: int) -> QSeries:
    return _build(name, T)


ALIASES = {
    "η": "eta",
    "eta(2tau)": "eta2",
    "eta(tau/2)": "eta_half",
    "Δ": "Delta",
    "θ": "theta",
    "θ01": "theta01",
    "θ10": "theta10",
    "θ11": "theta11",
    "e₁": "e1",
    "e₂": "e2",
    "e₃": "e3",
    "Ũ": "Utilde",
    "ũ": "utilde",
    "f|W": "fW",
    "eta4/eta2^2": "eta4_over_eta2sq",
    "eta2^2/eta4": "eta2sq_over_eta4",
}

CATALOG = (
    "eta", "eta2", "eta_half", "Delta", "G2", "G4", "G6", "theta", "theta01", "theta10",
    "theta11", "f", "f_core", "R", "e1", "e2", "e3", "U", "U_core", "u", "u_core", "G",
    "Utilde", "utilde", "theta10_reduced", "eta4_over_eta2sq", "eta2sq_over_eta4", "fW",
    "blowup_gauss",
)


def named_series(name: str, qorder) -> QSeries:
    """The named series with every coefficient of exponent <= qorder known."""
    key = ALIASES.get(name, name)
    if key not in CATALOG and not (key.startswith("G") and key[1:].isdigit()):
        raise KeyError(f"unknown series {name!r}")
    return _cached(key, units(qorder) + 1)


def series_to(name: str, trunc_units: int) -> QSeries:
    """The named series known strictly below ``trunc_units`` (1/48 units)."""
    return _cached(ALIASES.get(name, name), int(trunc_units))


# ---------------------------------------------------------------------------
# two-variable theta functions


def theta_charz(mu: int, nu: int, w: FormalZ, qorder, zorder: int) -> FormalZ:
    """theta_{mu nu}(tau, w/(2 pi i)) = sum (-1)^(n nu) q^((n+mu/2)^2/2) e^((n+mu/2) w).

    The argument is passed already divided by 2 pi i, which is how every
    caller uses it (arguments of the form t/(2 pi i f)).
    """
    lo = w.lowest()
    if lo is not None and lo < 1:
        raise ValueError("theta argument must have z-valuation >= 1")
    T = units(qorder) + 1
    w = w.truncate(zorder)
    # powers w^k / k!
    powers = [FormalZ({0: QSeries.const(1)}, zorder)]
    for k in range(1, zorder + 1):
        powers.append((powers[-1] * w).scale(rat(1, k)))
    bound = isqrt(max(T, 0) // 6) + 2
    result = FormalZ({}, zorder)
    for k, wk in enumerate(powers):
        if not wk.terms:
            continue
        out: dict = {}
        for n in range(-bound, bound + 1):
            a = rat(2 * n + mu, 2)
            e = (2 * n + mu) ** 2 * 6
            if e >= T:
                continue
            c = a ** k
            if nu and n % 2:
                c = -c
            out[e] = out.get(e, ZERO) + c
        sk = QSeries(out, T)
        result = result + wk.map(lambda s, sk=sk: s * sk)
    return result


# ---------------------------------------------------------------------------
# coefficient in u


@lru_cache(maxsize=None)
def _residue_kernel(r: int, T: int) -> QSeries:
    """Rational part of (1/4) f^2 U^r R, known below T; phase 1^((r-1)/4)."""
    v = -(r + 1) * 12
    work = T - v + GRID
    fc = series_to("f_core", work + 24)
    uc = series_to("U_core", work + 12 * r + 24)
    R = series_to("R", work + 24)
    k = (fc * fc) * R
    if r:
        k = k * (uc ** r)
    return k.scale(rat(1, 4)).truncate(T)


@lru_cache(maxsize=None)
def _u_reversion(T: int) -> QSeries:
    """s = q^(1/4) as a series in w = u_core (both rescaled to integral exponents)."""
    uc = series_to("u_core", (T + 2) * 12)
    return uc.rescale(4).truncate(T * GRID).revert()


def _quarter_part(F: QSeries) -> dict:
    """{j: c} for the terms c q^(j/4) of F."""
    return {k // 12: c for k, c in F.coeffs.items() if k % 12 == 0}


def coeff_residue(F: QSeries, r: int):
    need = (r + 1) * 12
    if F.trunc <= need:
        raise OrderStarvation(from_units(need))
    vF = F.valuation()
    K = _residue_kernel(r, max(-vF + 1, 1))
    total = ZERO
    for e, c in F.coeffs.items():
        kc = K.coeffs.get(-e)
        if kc is not None:
            total = _sadd(total, _smul(kc, c))
    return simplify(_smul(total, phase(rat(r - 1, 4))))


def coeff_reversion(F: QSeries, r: int):
    need = (r + 1) * 12
    if F.trunc <= need:
        raise OrderStarvation(from_units(need))
    parts = {j: c for j, c in _quarter_part(F).items() if j <= r + 1}
    if not parts:
        return ZERO
    jmin = min(parts)
    depth = r + 3 + 2 * max(0, -jmin)
    s = _u_reversion(depth)
    target = (r + 1) * GRID
    total = ZERO
    pos = {}
    for j, c in parts.items():
        if j not in pos:
            if j >= 0:
                pos[j] = s ** j
            else:
                pos[j] = s.inverse() ** (-j)
        sj = pos[j]
        if sj.trunc <= target:
            raise RuntimeError("reversion depth too small")
        total = _sadd(total, _smul(sj.coeffs.get(target, ZERO), c))
    return simplify(_smul(total, phase(rat(-(r + 1), 4))))


class DualRouteMismatch(RuntimeError):
    pass


def coeff_in_u(F: QSeries, r: int, method: str = "both"):
    """Coefficient of u^(r+1) in F, by the residue formula and by reversion."""
    if r < 0:
        raise ValueError("r must be >= 0")
    if method == "residue":
        return coeff_residue(F, r)
    if method == "reversion":
        return coeff_reversion(F, r)
    a = coeff_residue(F, r)
    b = coeff_reversion(F, r)
    if a != b:
        raise DualRouteMismatch(f"u-coefficient routes disagree: {a} vs {b}")
    return a


def required_qorder(r: int):
    """Input must be known strictly past this exponent for coeff_in_u(., r)."""
    return rat(r + 1, 4)


# ---------------------------------------------------------------------------
# polynomial in U


class UPoly:
    """Polynomial in the symbol U: coeffs[k] multiplies U^k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = [simplify(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = c

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self == UPoly(other)
        return NotImplemented

    __hash__ = None

    def evaluate(self, x):
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = _sadd(_smul(acc, x), c)
        return simplify(acc)

    def to_qseries(self, trunc_units: int) -> QSeries:
        U = series_to("U", trunc_units + 12 * max(self.degree, 0) + GRID)
        acc = QSeries.zero()
        pw = QSeries.const(1)
        for c in self.coeffs:
            acc = acc + pw.scale(c)
            pw = pw * U
        return acc.truncate(trunc_units)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"({c})*U^{k}")
        return " + ".join(terms) if terms else "0"


def as_poly_in_U(F: QSeries) -> UPoly:
    """Rewrite F as a polynomial in U, checking the remainder vanishes."""
    if F.trunc <= 0:
        raise OrderStarvation(0)
    v = F.valuation()
    deg = max(0, -(v // 12)) if v < 0 else 0
    if v < 0 and v % 12:
        raise ValueError("not polynomial in U")
    T = F.trunc
    U = series_to("U", T + 12 * deg + GRID)
    powers = [QSeries.const(1)]
    for _ in range(deg):
        powers.append(powers[-1] * U)
    rem = F
    coeffs = [ZERO] * (deg + 1)
    for k in range(deg, -1, -1):
        lead = powers[k].coeffs[-12 * k]
        c = rem.coeffs.get(-12 * k, ZERO)
        if c:
            c = simplify(_smul(c, Cyclo8Rational.from_rational(1) / lead if isinstance(lead, Cyclo8Rational) else ONE / lead))
            coeffs[k] = c
            rem = rem - powers[k].scale(c)
    rem = rem.truncate(T)
    if not rem.is_zero():
        raise ValueError("not polynomial in U")
    return UPoly(coeffs)


# ---------------------------------------------------------------------------
# Laurent expansion in y = Ũ - 2


class YLaurent:
    """Truncated Laurent series in y = Ũ - 2: coefficients known for k < trunc."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: dict, trunc):
        self.trunc = trunc
        self.coeffs = {k: simplify(c) for k, c in coeffs.items() if k < trunc and simplify(c)}

    @classmethod
    def from_qseries(cls, s: QSeries) -> "YLaurent":
        if any(k % GRID for k in s.coeffs):
            raise ValueError("not a series in integral y")
        t = s.trunc if s.trunc == inf else -((-s.trunc) // GRID)
        return cls({k // GRID: c for k, c in s.coeffs.items()}, t)

    def __getitem__(self, k: int):
        if k >= self.trunc:
            raise IndexError(f"y^{k} beyond truncation")
        return self.coeffs.get(k, ZERO)

    def principal_part(self) -> dict:
        return {k: c for k, c in self.coeffs.items() if k < 0}

    def __eq__(self, other):
        if not isinstance(other, YLaurent):
            return NotImplemented
        t = min(self.trunc, other.trunc)
        a = {k: c for k, c in self.coeffs.items() if k < t}
        b = {k: c for k, c in other.coeffs.items() if k < t}
        return a == b

    __hash__ = None

    def to_qseries(self) -> QSeries:
        return QSeries({k * GRID: c for k, c in self.coeffs.items()}, self.trunc * GRID if self.trunc != inf else inf)

    def __repr__(self):
        return "YLaurent(" + ", ".join(f"y^{k}: {c}" for k, c in sorted(self.coeffs.items())) + f"; O(y^{self.trunc}))"


@lru_cache(maxsize=None)
def q_in_y(yorder: int) -> QSeries:
    """q as a power series in y = Ũ - 2, known below y^(yorder+1)."""
    T = (yorder + 1) * GRID
    return (series_to("Utilde", T) - 2).revert()


def expand_in_y(F: QSeries, yorder: int) -> YLaurent:
    """Substitute q = q(y) into a series with integral q-exponents."""
    if any(k % GRID for k in F.coeffs):
        raise ValueError("not a series in integral q")
    v = F.valuation() // GRID if F.coeffs else 0
    depth = yorder + 1 + max(0, -v) * 2 + 1
    qy = q_in_y(depth)
    out = F.truncate(min(F.trunc, (yorder + 1) * GRID)).substitute(qy)
    return YLaurent.from_qseries(out.truncate((yorder + 1) * GRID))


def y_series(yl: YLaurent, trunc_units: int) -> QSeries:
    """q-expansion of a YLaurent (y = Ũ - 2), known below trunc_units."""
    y = series_to("Utilde", trunc_units + GRID * (1 + max(0, -min(yl.coeffs, default=0)) * 2)) - 2
    return yl.to_qseries().truncate(max(yl.trunc, 0) * GRID if yl.trunc != inf else inf).substitute(y).truncate(trunc_units)
