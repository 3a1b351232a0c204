"""Kronecker's function, indefinite theta functions and their normalized forms.

Theta functions are evaluated at arguments of the form x*y/(2 pi i), so every
exponential e^{2 pi i xi.x} becomes e^{(xi.x) y}; the result is a Laurent
series in y (lowest power -1) with q-series coefficients.  Phases
e^{pi i xi.b} are eighth roots of unity and are accumulated per phase class
so that the inner loops stay rational.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial, inf

from .exactnum import ONE, ZERO, invert_scalar, phase, rat, root_of_unity, simplify
from .lattice import GROUPS, Lattice, SurfaceModel, basic_classes, theta_terms, vec
from .modforms import (
    as_poly_in_U,
    expand_in_y,
    series_to,
)
from .qseries import GRID, FormalZ, NumericZ, QSeries, _sadd, _smul, bernoulli, units


class ThetaUndefined(ValueError):
    pass


class StructureFailure(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# scalar Laurent kernels


def pole_kernel(u, eps: int, nmax: int) -> dict:
    """Laurent coefficients {n: c}, -1 <= n <= nmax, of 1/(1 - eps e^{u y})."""
    u = simplify(u)
    if eps == 1:
        if not u:
            raise ThetaUndefined("pole in z beyond floor")
        # 1/(1 - e^X) = -(1/X) sum B_n X^n / n!
        inv_u = invert_scalar(u)
        out = {}
        for n in range(0, nmax + 2):
            b = bernoulli(n)
            if b:
                out[n - 1] = simplify(_smul(-b * rat(1, factorial(n)), _smul(inv_u, u ** n) if n else inv_u))
        return out
    if eps != -1:
        raise ValueError("eps must be +1 or -1")
    # 1/(1 + e^{uy}) as an ordinary power series
    a = [ONE + ONE] + [simplify(_smul(u ** k, rat(1, factorial(k)))) for k in range(1, nmax + 1)]
    inv = [rat(1, 2)]
    for n in range(1, nmax + 1):
        s = ZERO
        for k in range(1, n + 1):
            s = _sadd(s, _smul(a[k], inv[n - k]))
        inv.append(simplify(_smul(s, rat(-1, 2))))
    return {n: c for n, c in enumerate(inv) if c}


def exp_coefficients(ell, nmax: int) -> list:
    """[ell^n / n!] for n = 0..nmax."""
    out = [ONE]
    for n in range(1, nmax + 1):
        out.append(simplify(_smul(out[-1], _smul(ell, rat(1, n)))))
    return out


def _kernel_z(coeffs: dict, zorder: int) -> FormalZ:
    return FormalZ({n: QSeries.const(c) for n, c in coeffs.items() if n <= zorder}, zorder)


# ---------------------------------------------------------------------------
# Kronecker function


def kronecker_F(u_lin, v_lin, qorder, zorder: int) -> FormalZ:
    """Fourier form of F(tau; u, v) at u = u_lin z, v = v_lin z."""
    u_lin, v_lin = simplify(u_lin), simplify(v_lin)
    if not u_lin or not v_lin:
        raise ThetaUndefined("pole in z beyond floor")
    trunc = units(qorder) + 1
    terms: dict = {}

    def add(n, e, c):
        if n > zorder:
            return
        d = terms.setdefault(n, {})
        d[e] = _sadd(d.get(e, ZERO), c)

    # -1/(1 - e^u) and 1/(1 - e^{-v})
    for n, c in pole_kernel(u_lin, 1, zorder).items():
        add(n, 0, _smul(c, -1))
    for n, c in pole_kernel(-v_lin, 1, zorder).items():
        add(n, 0, c)
    # -2 sum sinh(n u + m v) q^{nm}
    qmax = rat(qorder)
    n = 1
    while n <= qmax:
        m = 1
        while n * m <= qmax:
            arg = _sadd(_smul(u_lin, n), _smul(v_lin, m))
            for k, c in enumerate(exp_coefficients(arg, zorder)):
                if k % 2:
                    add(k, units(n * m), _smul(c, -2))
            m += 1
        n += 1
    return FormalZ({k: QSeries(d, trunc) for k, d in terms.items()}, zorder)


def kronecker_product_form(u_lin, v_lin, qorder, zorder: int) -> FormalZ:
    """(u+v)/(uv) exp(sum_k (2/k!)(u^k + v^k - (u+v)^k) G_k) at u = u_lin z, v = v_lin z."""
    u_lin, v_lin = simplify(u_lin), simplify(v_lin)
    if not u_lin or not v_lin:
        raise ThetaUndefined("pole in z beyond floor")
    trunc = units(qorder) + 1
    w = _sadd(u_lin, v_lin)
    expo = {}
    for k in range(2, zorder + 2, 2):
        c = _sadd(_sadd(u_lin ** k, v_lin ** k), _smul(w ** k, -1))
        c = _smul(c, rat(2, factorial(k)))
        if c:
            expo[k] = series_to(f"G{k}", trunc).scale(c)
    E = FormalZ(expo, zorder + 1).exp()
    pref = simplify(_smul(w, invert_scalar(simplify(_smul(u_lin, v_lin)))))
    return FormalZ({n - 1: c.scale(pref) for n, c in E.terms.items() if n - 1 <= zorder}, zorder)


# ---------------------------------------------------------------------------
# indefinite theta functions


def _phase_index(a) -> int:
    """k with exp(2 pi i a) = zeta^k, zeta = exp(2 pi i/8)."""
    k = rat(a) * 8
    if k.denominator != 1:
        raise ValueError("phase outside Q(ζ₈)")
    return int(k.numerator) % 8


def _combine_phases(acc: dict, trunc: int) -> QSeries:
    """sum_k zeta^k * acc[k] where acc[k] maps exponent units to rationals."""
    out: dict = {}
    for k, d in acc.items():
        z = root_of_unity(rat(k, 8))
        zs = simplify(z)
        for e, c in d.items():
            if c:
                out[e] = _sadd(out.get(e, ZERO), _smul(zs, c))
    return QSeries(out, trunc)


@dataclass
class ThetaData:
    """Theta function in y = 2 pi i (argument) / x-direction, plus group summaries."""

    series: FormalZ
    qmax: object
    counts: dict


THETA_GROUPS = ("pole_f", "pole_g", "sinh")


def theta_y(L: Lattice, c, b, f, g, x, qmax, nmax: int, engine: str = "auto", groups=THETA_GROUPS) -> ThetaData:
    """Theta_{L,c,b}^{f,g}(tau, x y/(2 pi i)) as a Laurent series in y via the three-group form.

    Coefficients of q-exponent <= qmax are exact.  ``groups`` restricts the
    sum to some of the three parts (the pole_f part alone is the theta
    function for the pair (f, f + eps g) in the limit eps -> 0+).
    """
    c, b, f, g, x = vec(c), vec(b), vec(f), vec(g), vec(x)
    trunc = units(qmax) + 1
    terms = theta_terms(L, c, f, g, qmax, funcs=[x, b], groups=tuple(groups), engine=engine)
    acc: dict = {grp: [dict() for _ in range(nmax + 2)] for grp in ("pole_f", "pole_g", "sinh")}
    counts = {grp: 0 for grp in acc}
    for (grp, Q, (lx, lb)), cnt in terms.items():
        if (Q * 8).denominator != 1:
            raise AssertionError("theta exponent off the 1/8 grid")
        e = units(Q)
        counts[grp] += cnt
        k = _phase_index(lb / 2)
        top = nmax + 1 if grp != "sinh" else nmax
        powers = exp_coefficients(lx, top)
        slots = acc[grp]
        for n in range(top + 1):
            pw = powers[n]
            if not pw:
                continue
            if grp == "sinh":
                # e^{l y} zeta^k - e^{-l y} zeta^{-k}
                d = slots[n].setdefault(k, {})
                d[e] = d.get(e, ZERO) + cnt * pw
                d = slots[n].setdefault((-k) % 8, {})
                d[e] = d.get(e, ZERO) - cnt * pw * (-1) ** n
            else:
                d = slots[n].setdefault(k, {})
                d[e] = d.get(e, ZERO) + cnt * pw
    total = FormalZ({}, nmax)
    sinh = {n: _combine_phases(acc["sinh"][n], trunc) for n in range(nmax + 1)}
    total = total + FormalZ({n: s for n, s in sinh.items() if not s.is_zero()}, nmax)
    for grp, vecd, sign in (("pole_f", f, 1), ("pole_g", g, -1)):
        sums = {n: _combine_phases(acc[grp][n], trunc) for n in range(nmax + 2)}
        if all(s.is_zero() for s in sums.values()):
            continue
        eps = 1 if int(L.dot(vecd, b)) % 2 == 0 else -1
        u = L.dot(vecd, x)
        if eps == 1 and u == 0:
            raise ThetaUndefined("undefined at this x")
        K = _kernel_z(pole_kernel(u, eps, nmax + 1), nmax + 1)
        Sg = FormalZ({n: s for n, s in sums.items() if not s.is_zero()}, nmax + 1)
        part = (K * Sg).truncate(nmax)
        total = total + (part if sign > 0 else -part)
    out = FormalZ({n: s.truncate(trunc) for n, s in total.terms.items()}, nmax)
    return ThetaData(out, rat(qmax), counts)


def theta_indef(L: Lattice, c, b, f, g, x, qorder, zorder: int, engine: str = "auto") -> FormalZ:
    """Theta_{L,c,b}^{f,g}(tau, x z/(2 pi i)) as FormalZ in z."""
    return theta_y(L, c, b, f, g, x, qorder, zorder, engine).series


def fourier_monomials(L: Lattice, c, f, g, qmax, box: int) -> dict:
    """{xi: weight} of the three-group form with geometric series expanded, inside a coordinate box."""
    from .lattice import enum_shifted_vectors

    groups = enum_shifted_vectors(L, c, f, g, qmax, groups=("pole_f", "pole_g", "sinh"))
    out: dict = {}

    def inside(v):
        return all(abs(t) <= box for t in v)

    for grp, sign, step in (("pole_f", 1, f), ("pole_g", -1, g)):
        for xi in groups[grp]:
            k = 0
            while True:
                v = tuple(a + k * rat(s) for a, s in zip(xi, step))
                if not inside(v):
                    if k > 2 * box + 2:
                        break
                else:
                    out[v] = out.get(v, 0) + sign
                k += 1
                if k > 4 * box + 4:
                    break
    for xi in groups["sinh"]:
        for v, s in ((xi, 1), (tuple(-t for t in xi), -1)):
            if inside(v):
                out[v] = out.get(v, 0) + s
    return {v: w for v, w in out.items() if w}


def definitional_monomials(L: Lattice, c, f, g, qmax, box: int) -> dict:
    """{xi: mu(xi.f) - mu(xi.g)} over the coordinate box with Q(xi) <= qmax."""
    import itertools

    out = {}
    shift = [rat(t) / 2 for t in c]
    for ks in itertools.product(range(-box - 1, box + 2), repeat=L.rank):
        xi = tuple(rat(k) + s for k, s in zip(ks, shift))
        if any(abs(t) > box for t in xi) or L.Q(xi) > qmax:
            continue
        w = (1 if L.dot(xi, f) >= 0 else 0) - (1 if L.dot(xi, g) >= 0 else 0)
        if w:
            out[xi] = w
    return out


# ---------------------------------------------------------------------------
# phi and its ingredients


def _gauss_series(coef, base: QSeries, zorder: int) -> FormalZ:
    """exp(coef * base * z^2) as FormalZ."""
    if not coef:
        return FormalZ({0: QSeries.const(1)}, zorder)
    return FormalZ({2: base.scale(coef)}, zorder).exp()


def phi_prefactor_phase(L: Lattice, c):
    """The phase 1^{-3 Q(c)/4}."""
    return phase(-3 * L.Q(vec(c)) / 4)


def phi_fn(S: SurfaceModel, C, F, G, x, qorder, zorder: int, engine: str = "auto", groups=THETA_GROUPS) -> FormalZ:
    """phi_{L,c}^{f,g}(tau, x.z) with every z^n coefficient exact through q^qorder."""
    L = S.lattice
    c = vec(C)
    nmax = zorder
    qmax = rat(qorder) + rat(nmax + 1, 8)
    T = units(qmax) + 1
    theta = theta_y(L, c, c, vec(F), vec(G), vec(x), qmax, nmax, engine, groups).series
    Gs = series_to("G", T + GRID)
    gauss = _gauss_series(2 * L.Q(vec(x)), Gs, nmax)
    body = theta * gauss
    sigma_X = S.sigma
    out_trunc = units(qorder) + 1
    margin = out_trunc + 7 * (nmax + 2) + GRID
    th = series_to("theta", margin)
    thp = th ** sigma_X if sigma_X >= 0 else th.inverse(margin) ** (-sigma_X)
    fc = series_to("f_core", margin)
    fc_inv = fc.inverse(margin)
    ph0 = phi_prefactor_phase(L, c)
    out = {}
    fpow = QSeries.const(1)
    for n in range(-1, nmax + 1):
        if n >= 0:
            fpow = fpow * fc_inv
        coef = body.terms.get(n)
        if coef is None:
            continue
        # f^{-1-n} = 1^{(1+n)/8} f_core^{-1-n}
        ph = simplify(_smul(ph0, phase(rat(1 + n, 8))))
        s = (coef * fpow * thp).scale(_smul(ph, 2)).truncate(out_trunc)
        out[n] = s
    return FormalZ(out, nmax)


def _substitute_y(series: FormalZ, scale, h: QSeries, zorder: int, trunc: int) -> FormalZ:
    """Replace y by scale * z * h(tau), keeping q-exponents below trunc."""
    vmin = min((c.valuation() for c in series.terms.values()), default=0)
    hh = series_to("eta2sq_over_eta4", trunc - min(vmin, 0) + GRID) if h is None else h
    hinv = hh.inverse(trunc - min(vmin, 0) + GRID)
    out = {}
    hp = QSeries.const(1)
    top = max(series.terms, default=-1)
    for n in range(0, min(top, zorder) + 1):
        c = series.terms.get(n)
        if c is not None:
            out[n] = (c * hp).scale(rat(scale) ** n).truncate(trunc)
        hp = hp * hh
    if -1 in series.terms:
        out[-1] = (series.terms[-1] * hinv).scale(ONE / rat(scale)).truncate(trunc)
    return FormalZ(out, zorder)


def phi_W_image(S: SurfaceModel, C, F, G, x, qorder, zorder: int, w=None, engine: str = "auto") -> FormalZ:
    """Expansion of phi at the cusp -1, exact through q^qorder (integral exponents)."""
    L = S.lattice
    c = vec(C)
    w = vec(S.canonical_characteristic() if w is None else w)
    sigma_L = L.signature
    # Theta_{w,c} needs q-order qorder + sigma_L/8 to cancel the theta_10 prefactor
    qmax = rat(qorder) + rat(sigma_L, 8)
    T = units(qorder) + 1
    margin = T + GRID
    if qmax < 0:
        theta = FormalZ({}, zorder)
        trunc_theta = units(qmax) + 1
    else:
        theta = theta_y(L, w, c, vec(F), vec(G), vec(x), qmax, zorder, engine).series
        trunc_theta = units(qmax) + 1
    h = series_to("eta2sq_over_eta4", margin + GRID * (zorder + 2))
    body = _substitute_y(theta, -2, h, zorder, trunc_theta)
    bg = series_to("blowup_gauss", margin + GRID)
    gauss = _gauss_series(2 * L.Q(vec(x)), bg, zorder)
    body = body * gauss
    t10 = series_to("theta10_reduced", margin + GRID * 2)
    # theta_10^{-sigma_L} = q^{-sigma_L/8} (q^{-1/8} theta_10)^{-sigma_L}
    t10p = t10 ** (-sigma_L) if sigma_L <= 0 else t10.inverse(margin) ** sigma_L
    pref = (t10p * h).scale(_smul(phase(L.dot(c, c) / 4), -4)).shift(rat(-sigma_L, 8))
    out = {}
    for n, s in body.terms.items():
        v = QSeries(s.coeffs, trunc_theta if s.trunc == inf else s.trunc)
        out[n] = (v * pref).truncate(T)
    return FormalZ(out, zorder)


# ---------------------------------------------------------------------------
# finite sums over basic classes


def _sign_pow(e) -> int:
    e = rat(e)
    if e.denominator != 1:
        raise ValueError("non-integral sign exponent")
    return -1 if int(e) % 2 else 1


def _class_sign(S: SurfaceModel, C, W) -> int:
    """(-1)^{C(W+C)/2}."""
    return _sign_pow((S.inter(C, W) + S.square(C)) / 2)


def omega_terms(S: SurfaceModel, C, F, G, x, zorder: int, bc=None, only_square=None) -> dict:
    """{q-exponent: NumericZ in z} for Omega_C^{X,F,G}(tau, x.z).

    The basic class W contributes with q^{-W^2/8} (the sign making A * Omega
    carry poles of order k_W) and the B_I bracket uses e^{-Wxz} in its second term.
    """
    C, F, G, x = vec(C), vec(F), vec(G), vec(x)
    bc = bc or basic_classes(S, F, G)
    out: dict = {}

    def add(e, series):
        out[e] = out[e] + series if e in out else series

    kernels = {}
    for name, group, vecd, sign in (("F", bc.B_F, F, -1), ("G", bc.B_G, G, 1)):
        if not group:
            continue
        eps = _sign_pow(S.inter(C, vecd))
        u = 2 * S.inter(vecd, x)
        if eps == 1 and u == 0:
            raise ThetaUndefined("pole condition violated")
        K = NumericZ(pole_kernel(u, eps, zorder + 1), zorder + 1)
        for W in group:
            sq = S.square(W)
            if only_square is not None and sq != only_square:
                continue
            ex = NumericZ(dict(enumerate(exp_coefficients(S.inter(W, x), zorder + 1))), zorder + 1)
            term = (ex * K).scale(sign * _class_sign(S, C, W))
            add(-sq / 8, term.truncate(zorder))
    for W in bc.B_I:
        sq = S.square(W)
        if only_square is not None and sq != only_square:
            continue
        Wm = tuple(-t for t in W)
        a = NumericZ(dict(enumerate(exp_coefficients(S.inter(W, x), zorder))), zorder).scale(_class_sign(S, C, W))
        b = NumericZ(dict(enumerate(exp_coefficients(-S.inter(W, x), zorder))), zorder).scale(_class_sign(S, C, Wm))
        add(-sq / 8, a - b)
    return out


def omega_fn(S: SurfaceModel, C, F, G, x, zorder: int, bc=None) -> FormalZ:
    """Omega_C^{X,F,G}(tau, x.z) as FormalZ with exact (finite) q-coefficients."""
    parts = omega_terms(S, C, F, G, x, zorder, bc)
    coeffs: dict = {}
    for e, nz in parts.items():
        k = units(e)
        for n, c in nz.terms.items():
            d = coeffs.setdefault(n, {})
            d[k] = _sadd(d.get(k, ZERO), c)
    return FormalZ({n: QSeries(d) for n, d in coeffs.items()}, zorder)


def oh_leading(S: SurfaceModel, C, F, G, x, zorder: int, bc=None) -> NumericZ:
    """O_C^{X,F,G}(x.z): the basic classes with W^2 = M only."""
    bc = bc or basic_classes(S, vec(F), vec(G))
    if bc.M is None:
        return NumericZ({}, zorder)
    parts = omega_terms(S, C, F, G, x, zorder, bc, only_square=bc.M)
    total = NumericZ({}, zorder)
    for nz in parts.values():
        total = total + nz
    return total


# ---------------------------------------------------------------------------
# structure extraction


def blowup_A(S: SurfaceModel, x, trunc: int, zorder: int) -> FormalZ:
    """A(tau, x.z) = theta_10^sigma (4 eta(2tau)^2/eta^4) exp(-Q(x) (4G_2+2e_1) eta(2tau)^4/eta^8 z^2)."""
    sigma = S.sigma
    t10 = series_to("theta10_reduced", trunc + GRID)
    t10p = t10 ** sigma if sigma >= 0 else t10.inverse(trunc + GRID) ** (-sigma)
    h = series_to("eta2sq_over_eta4", trunc + GRID)
    pref = (t10p * h).scale(4).shift(rat(sigma, 8))
    bg = series_to("blowup_gauss", trunc + GRID)
    gauss = _gauss_series(-S.bigQ(vec(x)), bg, zorder)
    return gauss.qmul(pref).map(lambda s: s.truncate(trunc))


def principal_parts_from_omega(S: SurfaceModel, C, F, G, x, zorder: int, bc=None) -> dict:
    """{n: {j: coefficient of y^-j}} from A(tau, x.z) Omega(tau, x z eta(2tau)^2/eta^4)."""
    bc = bc or basic_classes(S, vec(F), vec(G))
    omega = omega_fn(S, C, F, G, x, zorder, bc)
    if not omega.terms:
        return {n: {} for n in range(-1, zorder + 1)}
    vmin = min(s.valuation() for s in omega.terms.values())
    need = -vmin + 6 * abs(S.sigma) + GRID
    h = series_to("eta2sq_over_eta4", need + GRID)
    om = _substitute_y(omega, 1, h, zorder, need)
    A = blowup_A(S, x, need, zorder)
    prod = A * om
    out = {}
    for n in range(-1, zorder + 1):
        s = prod.terms.get(n)
        if s is None:
            out[n] = {}
            continue
        if s.trunc < 0:
            raise StructureFailure("principal part starved of q-order")
        s = s.truncate(0)
        if s.is_zero():
            out[n] = {}
            continue
        yl = expand_in_y(QSeries(s.coeffs, 0), -1)
        out[n] = {-k: c for k, c in yl.principal_part().items()}
    return out


def principal_parts_from_W_image(S: SurfaceModel, C, F, G, x, zorder: int, w=None) -> dict:
    """{n: {j: coefficient of y^-j}} from the cusp -1 expansion of phi."""
    img = phi_W_image(S, C, F, G, x, 0, zorder, w=w)
    out = {}
    for n in range(-1, zorder + 1):
        s = img.terms.get(n)
        if s is None:
            out[n] = {}
            continue
        if s.trunc < 0:
            raise StructureFailure("principal part starved of q-order")
        s = s.truncate(0)
        if s.is_zero():
            out[n] = {}
            continue
        yl = expand_in_y(QSeries(s.coeffs, 0), -1)
        out[n] = {-k: c for k, c in yl.principal_part().items()}
    return out


@dataclass
class StructureData:
    P: dict  # n -> {j: coefficient of t^j}
    R: dict  # n -> UPoly
    a: dict  # n -> leading coefficient (of t^k)
    m: int
    degree_bound: int


def _P_in_U(P: dict, eps, trunc: int) -> QSeries:
    """P(1/(U-2)) - eps P(-1/(U+2)) as a q-series."""
    if not P:
        return QSeries.zero(trunc)
    top = max(P)
    U = series_to("U", trunc + 12 * top + 2 * GRID)
    a = (U - 2).inverse(trunc + GRID)
    b = (U + 2).inverse(trunc + GRID).scale(-1)
    total = QSeries.zero()
    pa, pb = QSeries.const(1), QSeries.const(1)
    for j in range(1, top + 1):
        pa = pa * a
        pb = pb * b
        cj = P.get(j)
        if cj:
            total = total + (pa - pb.scale(eps)).scale(cj)
    return total.truncate(trunc)


def structure_extract(S: SurfaceModel, C, F, G, x, qorder, zorder: int, bc=None, engine: str = "auto") -> StructureData:
    """P_n, R_n and leading coefficients a_n for phi_{L,c}^{f,g}(tau, x.z)."""
    bc = bc or basic_classes(S, vec(F), vec(G))
    L = S.lattice
    sigma_L = L.signature
    m = -bc.M if bc.M is not None else sigma_L
    k = (sigma_L - m) // 8
    P_all = principal_parts_from_omega(S, C, F, G, x, zorder, bc)
    phi = phi_fn(S, C, F, G, x, qorder, zorder, engine)
    cc = L.dot(vec(C), vec(C))
    trunc = units(qorder) + 1
    R, a = {}, {}
    for n in range(-1, zorder + 1):
        P = P_all.get(n, {})
        if P and (max(P) > k or 0 in P):
            raise StructureFailure("structure-theorem consistency failure")
        # the mirror pole enters with + 1^{(c.c-1-n)/4}: tau -> tau+2 swaps the poles
        eps = -phase((cc - 1 - n) / 4)
        wn = phi.terms.get(n, QSeries.zero(trunc))
        resid = (wn - _P_in_U(P, eps, trunc)).truncate(trunc)
        try:
            R[n] = as_poly_in_U(resid)
        except ValueError as exc:
            raise StructureFailure("structure-theorem consistency failure") from exc
        if R[n].degree > (n + 1) // 2 and R[n].coeffs:
            raise StructureFailure("structure-theorem consistency failure")
        a[n] = P.get(k, ZERO) if k > 0 else ZERO
    return StructureData(P_all, R, a, m, k)


def leading_identity(S: SurfaceModel, C, F, G, x, zorder: int, bc=None) -> tuple:
    """(sum a_n z^n from the principal parts, 2^{2-(sigma_L+3m)/4} O(xz) e^{-Q(x) z^2})."""
    bc = bc or basic_classes(S, vec(F), vec(G))
    L = S.lattice
    sigma_L = L.signature
    if bc.M is None:
        return NumericZ({}, zorder), NumericZ({}, zorder)
    m = -bc.M
    k = (sigma_L - m) // 8
    P = principal_parts_from_omega(S, C, F, G, x, zorder, bc)
    lhs = NumericZ({n: P[n].get(k, ZERO) for n in P}, zorder)
    O = oh_leading(S, C, F, G, x, zorder, bc)
    qx = -L.Q(vec(x))
    gauss = NumericZ({2 * j: qx ** j / factorial(j) for j in range(zorder // 2 + 1)}, zorder)
    e2 = 2 - rat(sigma_L + 3 * m, 4)
    if e2.denominator != 1:
        raise StructureFailure("non-integral power of 2 in the leading term")
    rhs = (O * gauss).scale(rat(2) ** int(e2))
    return lhs, rhs
