"""Donaldson invariants of b+ = 1 surfaces at boundary period points.

Invariants are returned as NumericZ series in z: the z^n coefficient of
Psi(x.z, p^r) equals Phi(x^n p^r)/n!.  Every u-coefficient extraction runs
both the residue and the reversion routes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

from .exactnum import ONE, ZERO, invert_scalar, phase, rat, simplify
from .lattice import (
    LatticeError,
    SurfaceModel,
    basic_classes,
    vec,
    wall_enum,
)
from .modforms import UPoly, as_poly_in_U, coeff_in_u, series_to, theta_charz
from .qseries import GRID, FormalZ, NumericZ, QSeries, TSeries, _sadd, _smul, units
from .theta import (
    StructureFailure,
    ThetaUndefined,
    exp_coefficients,
    oh_leading,
    phi_fn,
    pole_kernel,
    principal_parts_from_omega,
    _substitute_y,
    blowup_A,
)
from .modforms import expand_in_y


class StructureMismatch(StructureFailure):
    pass


class BlowupMismatch(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# shared helpers


def _extract(series: FormalZ, r: int, zorder: int) -> NumericZ:
    """u^{r+1}-coefficient of every z^n coefficient."""
    return NumericZ({n: coeff_in_u(s, r) for n, s in series.terms.items() if n <= zorder}, zorder)


def _f_power_phase(n: int):
    """f^{-1-n} = 1^{(1+n)/8} f_core^{-1-n}."""
    return phase(rat(1 + n, 8))


def _y_to_z(poly_in_y: dict, pref: QSeries, zorder: int, trunc: int) -> FormalZ:
    """sum_n c_n (z/f)^n * pref as FormalZ in z, each coefficient a polynomial in G.

    ``poly_in_y`` maps n to a dict {j: scalar} meaning sum_j scalar * G^j.
    """
    top = max(list(poly_in_y) + [0])
    margin = trunc + 6 * (top + 2) + GRID
    fc_inv = series_to("f_core", margin + GRID).inverse(margin)
    Gs = series_to("G", margin)
    gpow = [QSeries.const(1)]
    out = {}
    fpow = QSeries.const(1)
    for n in range(-1, zorder + 1):
        if n >= 0:
            fpow = fpow * fc_inv
        terms = poly_in_y.get(n)
        if not terms:
            continue
        acc = QSeries.zero()
        for j, c in terms.items():
            while len(gpow) <= j:
                gpow.append(gpow[-1] * Gs)
            acc = acc + gpow[j].scale(c)
        s = (acc * fpow * pref).scale(_f_power_phase(n)).truncate(trunc)
        out[n] = s
    return FormalZ(out, zorder)


def _gauss_poly(coef, zorder: int) -> dict:
    """exp(coef * G * y^2) as {2j: {j: coef^j/j!}}."""
    return {2 * j: {j: simplify(_smul(rat(coef) ** j, rat(1, factorial(j))))} for j in range(zorder // 2 + 1)}


def _mul_ypoly(a: dict, b: dict, zorder: int) -> dict:
    """Product of {n: {j: c}} series (y-power n, G-power j)."""
    out: dict = {}
    for n1, d1 in a.items():
        for n2, d2 in b.items():
            n = n1 + n2
            if n > zorder:
                continue
            slot = out.setdefault(n, {})
            for j1, c1 in d1.items():
                for j2, c2 in d2.items():
                    slot[j1 + j2] = _sadd(slot.get(j1 + j2, ZERO), _smul(c1, c2))
    return out


def _scalar_series(coeffs: dict) -> dict:
    """{n: c} -> {n: {0: c}}."""
    return {n: {0: c} for n, c in coeffs.items() if c}


@dataclass
class InvariantQuery:
    """One request Psi_C^{X,F}(x.z, p^r) (minus Psi^G when G is given)."""

    surface: SurfaceModel
    C: tuple
    F: tuple
    x: tuple
    r: int = 0
    zorder: int = 8
    G: tuple | None = None

    def reference(self) -> tuple:
        return reference_cusp(self.surface, self.F) if self.G is None else tuple(int(t) for t in self.G)

    def check(self) -> None:
        """Raise ThetaUndefined if a pole group meets an x orthogonal to its cusp."""
        S, G = self.surface, self.reference()
        if self.surface.kind not in ("p2blow", "p1xp1") and self.G is None:
            raise LatticeError("a reference cusp G is required for this surface")
        bc = basic_classes(S, self.F, G)
        for members, cusp in ((bc.B_F, self.F), (bc.B_G, G)):
            if members and S.inter(self.C, cusp) % 2 == 0 and S.inter(cusp, self.x) == 0:
                raise ThetaUndefined("undefined at this x")

    def psi(self) -> NumericZ:
        return psi_boundary_diff(self.surface, self.C, self.F, self.reference(), self.x, self.r, self.zorder)


# ---------------------------------------------------------------------------
# wall-crossing terms


def delta_xi(S: SurfaceModel, xi, x, r: int, zorder: int) -> NumericZ:
    """delta_xi(e^{xz} p^r) from Delta_xi = -(4 theta^sigma/f) q^{-xi^2/2} e^{-xi x z/f} e^{-Q(x) G z^2/f^2}."""
    xi, x = vec(xi), vec(x)
    sq = S.square(xi)
    if sq >= 0:
        raise LatticeError("wall class must have negative square")
    trunc = units(rat(r + 1, 4)) + 1
    lin = exp_coefficients(-S.inter(xi, x), zorder)
    body = _mul_ypoly(_scalar_series(dict(enumerate(lin))), _gauss_poly(-S.bigQ(x), zorder), zorder)
    sigma = S.sigma
    margin = trunc + 6 * (zorder + 2) + GRID
    th = series_to("theta", margin)
    thp = th ** sigma if sigma >= 0 else th.inverse(margin) ** (-sigma)
    pref = thp.scale(-4).shift(-sq / 2)
    return _extract(_y_to_z(body, pref, zorder, trunc), r, zorder)


def _wall_sign(S: SurfaceModel, C, xi):
    """1^{C^2/8} (-1)^{(xi - C/2) C}."""
    C = vec(C)
    e = S.inter(tuple(a - rat(c) / 2 for a, c in zip(xi, C)), C)
    if rat(e).denominator != 1:
        raise LatticeError("xi is not in the coset of C/2")
    return simplify(_smul(phase(rat(S.square(C), 8)), -1 if int(e) % 2 else 1))


def wallcross_sum(S: SurfaceModel, C, x, r: int, H1, H2, zorder: int) -> NumericZ:
    """Phi^{H1} - Phi^{H2} on e^{xz} p^r: the sum over xi with xi H2 < 0 < xi H1."""
    H1, H2 = vec(H1), vec(H2)
    if H1 == H2:
        return NumericZ({}, zorder)
    cache: dict = {}
    out = {}
    for n in range(0, zorder + 1):
        d = n + 2 * r
        total = ZERO
        for xi in wall_enum(S, C, d, H2, H1):
            if xi not in cache:
                cache[xi] = delta_xi(S, xi, x, r, zorder)
            total = _sadd(total, _smul(_wall_sign(S, C, xi), cache[xi][n]))
        out[n] = simplify(total)
    return NumericZ(out, zorder)


# ---------------------------------------------------------------------------
# boundary invariants


def reference_cusp(S: SurfaceModel, F) -> tuple:
    """A cusp G with Phi^G = 0: H + E_1 on p2blow(N), the other ruling on p1xp1."""
    F = tuple(int(t) for t in F)
    if S.kind == "p2blow":
        return S.default_G(1)
    if S.kind == "p1xp1":
        return (0, 1) if F != (0, 1) else (1, 0)
    raise LatticeError("no vanishing reference chamber known for this surface")


def psi_family(S: SurfaceModel, C, F, G, x, rmax: int, zorder: int, engine: str = "auto") -> dict:
    """{r: Psi^F - Psi^G at p^r} for r = 0..rmax, sharing one phi expansion."""
    F, G = tuple(int(t) for t in F), tuple(int(t) for t in G)
    if F == G:
        return {r: NumericZ({}, zorder) for r in range(rmax + 1)}
    phi = phi_fn(S, C, F, G, x, rat(rmax + 1, 4), zorder, engine)
    return {r: _extract(phi, r, zorder) for r in range(rmax + 1)}


def psi_boundary_diff(S: SurfaceModel, C, F, G, x, r: int, zorder: int) -> NumericZ:
    """Psi_C^{X,F}(x.z, p^r) - Psi_C^{X,G}(x.z, p^r)."""
    return psi_family(S, C, F, G, x, r, zorder)[r]


def psi_rational_surface(S: SurfaceModel, C, F, x, r: int, zorder: int, G=None) -> NumericZ:
    """Psi_C^{X,F}(x.z, p^r) using a reference chamber where the invariants vanish."""
    G = reference_cusp(S, F) if G is None else G
    return psi_boundary_diff(S, C, F, G, x, r, zorder)


def psi_rational_family(S: SurfaceModel, C, F, x, rmax: int, zorder: int, G=None) -> dict:
    G = reference_cusp(S, F) if G is None else G
    return psi_family(S, C, F, G, x, rmax, zorder)


def phi_coeff(S: SurfaceModel, C, F, x, s: int, r: int, zorder: int | None = None):
    """Phi_C^{X,F}(x^s p^r) = s! times the z^s coefficient of Psi(x.z, p^r)."""
    zorder = s if zorder is None else zorder
    if s > zorder:
        from .modforms import OrderStarvation

        raise OrderStarvation(s, "z-order starvation")
    psi = psi_rational_surface(S, C, F, x, r, zorder)
    return simplify(_smul(psi[s], factorial(s)))


def assemble(psi: dict, poly: dict, zorder: int) -> NumericZ:
    """Psi(x.z, P(p)) for P = sum_r poly[r] p^r."""
    total = NumericZ({}, zorder)
    for r, c in poly.items():
        if c:
            total = total + psi[r].scale(c)
    return total


def poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, ZERO) + rat(x) * rat(y)
    return {k: v for k, v in out.items() if v}


def poly_pow(a: dict, n: int) -> dict:
    out = {0: ONE}
    for _ in range(n):
        out = poly_mul(out, a)
    return out


def gaussian(coef, zorder: int) -> NumericZ:
    """exp(coef z^2)."""
    return NumericZ({2 * j: rat(coef) ** j / factorial(j) for j in range(zorder // 2 + 1)}, zorder)


# ---------------------------------------------------------------------------
# structure theorem


@dataclass
class StructureReport:
    M: object
    k: int
    P: dict
    simple_type: bool
    leading: NumericZ
    table: list
    checks: dict = field(default_factory=dict)
    psi: dict = field(default_factory=dict)


def epsilon_W(S: SurfaceModel, F, G, W) -> int:
    """Sign table for the expansion regime Re(Fxz) < 0."""
    wf, wg = S.inter(W, F), S.inter(W, G)
    if wf > 0 >= wg:
        return 1
    if wf <= 0 < wg:
        return -1
    return 0


def mirror_phase(S: SurfaceModel, C, n: int):
    """The factor in front of P_n(-t/(1+2t)): + 1^{-(C^2+1+n)/4}."""
    return phase(-rat(S.square(vec(C)) + 1 + n, 4))


def t_matrix_entry(r: int, j: int, eps) -> object:
    """t^{r+1}-coefficient of (t/(1-2t))^j + eps (-t/(1+2t))^j."""
    if j - 1 > r:
        return ZERO
    base = comb(r, j - 1) * rat(2) ** (r + 1 - j)
    sign = -1 if (r + 1) % 2 else 1
    return simplify(_smul(base, _sadd(ONE, _smul(eps, sign))))


def psi_from_P(S: SurfaceModel, C, P: dict, rmax: int, zorder: int) -> dict:
    """{r: Psi(x.z, p^r)} generated by the polynomials P_n."""
    out = {}
    for r in range(rmax + 1):
        coeffs = {}
        for n, Pn in P.items():
            if n > zorder:
                continue
            eps = mirror_phase(S, C, n)
            acc = ZERO
            for j, c in Pn.items():
                acc = _sadd(acc, _smul(c, t_matrix_entry(r, j, eps)))
            coeffs[n] = simplify(acc)
        out[r] = NumericZ(coeffs, zorder)
    return out


def _solve_exact(rows: list, rhs: list, ncols: int) -> list | None:
    """Gauss-Jordan over exact scalars; returns a solution or None if inconsistent."""
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    row = 0
    for col in range(ncols):
        p = next((i for i in range(row, len(A)) if A[i][col]), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        inv = invert_scalar(A[row][col])
        A[row] = [simplify(_smul(v, inv)) for v in A[row]]
        for i in range(len(A)):
            if i != row and A[i][col]:
                fac = A[i][col]
                A[i] = [simplify(_sadd(a, _smul(_smul(fac, b), -1))) for a, b in zip(A[i], A[row])]
        piv_cols.append(col)
        row += 1
    for i in range(row, len(A)):
        if A[i][-1]:
            return None
    sol = [ZERO] * ncols
    for i, col in enumerate(piv_cols):
        sol[col] = A[i][-1]
    return sol


def solve_P(S: SurfaceModel, C, psi: dict, k: int, zorder: int) -> dict:
    """Fit P_n (degree <= k, no constant term) to Psi(x.z, p^r), r = 0..R.

    The rows for t-powers 1..2k determine P_n; the remaining rows must hold exactly.
    """
    R = max(psi)
    P = {}
    for n in range(-1, zorder + 1):
        eps = mirror_phase(S, C, n)
        values = [psi[r][n] for r in range(R + 1)]
        if k == 0:
            bad = [r for r, v in enumerate(values) if v]
            if bad:
                raise StructureMismatch(f"structure mismatch at n={n}, t^{bad[0] + 1}")
            P[n] = {}
            continue
        head = min(2 * k, R + 1)
        rows = [[t_matrix_entry(r, j, eps) for j in range(1, k + 1)] for r in range(head)]
        sol = _solve_exact(rows, values[:head], k)
        if sol is None:
            raise StructureMismatch(f"structure mismatch at n={n}, within t^1..t^{head}")
        for r in range(head, R + 1):
            pred = ZERO
            for j in range(1, k + 1):
                pred = _sadd(pred, _smul(sol[j - 1], t_matrix_entry(r, j, eps)))
            if simplify(pred) != values[r]:
                raise StructureMismatch(f"structure mismatch at n={n}, t^{r + 1}")
        P[n] = {j + 1: c for j, c in enumerate(sol) if c}
    return P


def simple_type_residuals(psi: dict, k: int, zorder: int) -> dict:
    """{r: sum_j C(k,j)(-4)^{k-j} Psi(p^{r+2j})} for every r with data."""
    R = max(psi)
    out = {}
    for r in range(0, R - 2 * k + 1):
        total = NumericZ({}, zorder)
        for j in range(k + 1):
            total = total + psi[r + 2 * j].scale(comb(k, j) * (-4) ** (k - j))
        out[r] = total
    return out


def leading_polynomial(k: int) -> dict:
    """(1 + p/2)(p^2 - 4)^{k-1} as {r: coefficient}."""
    return poly_mul({0: ONE, 1: rat(1, 2)}, poly_pow({0: rat(-4), 2: ONE}, k - 1))


def structure_theorem(S: SurfaceModel, C, F, x, R: int | None, zorder: int, G=None, engine: str = "auto") -> StructureReport:
    """Check simple type, agreement of both P_n routes and the leading term for (X, F) or (X, F, G)."""
    C, F, x = vec(C), tuple(int(t) for t in F), vec(x)
    G = reference_cusp(S, F) if G is None else tuple(int(t) for t in G)
    bc = basic_classes(S, F, G)
    k = bc.k
    R = 2 * k + 1 if R is None else R
    if k > 0 and R < 2 * k + 1:
        raise ValueError("R >= 2k+1 is needed to overdetermine the P_n solve")
    InvariantQuery(S, C, F, x, G=G).check()
    psi = psi_family(S, C, F, G, x, R, zorder, engine)
    checks = {}
    P_solved = solve_P(S, C, psi, k, zorder)
    P_expanded = principal_parts_from_omega(S, C, F, G, x, zorder, bc)
    for n in range(-1, zorder + 1):
        a = {j: c for j, c in P_solved.get(n, {}).items() if c}
        b = {j: c for j, c in P_expanded.get(n, {}).items() if c}
        if a != b:
            js = sorted(set(a) | set(b))
            bad = next(j for j in js if a.get(j, ZERO) != b.get(j, ZERO))
            raise StructureMismatch(f"structure mismatch at n={n}, t^{bad}")
        if any(j > k or j < 1 for j in b):
            raise StructureMismatch(f"structure mismatch at n={n}: degree bound")
    checks["P_routes_agree"] = True
    res = simple_type_residuals(psi, k, zorder) if k > 0 else {r: psi[r] for r in psi}
    simple = all(not v.terms for v in res.values())
    checks["simple_type"] = simple
    if not simple:
        r = next(r for r, v in res.items() if v.terms)
        raise StructureMismatch(f"structure mismatch: simple type fails at r={r}")
    if k > 0:
        lead = assemble(psi, leading_polynomial(k), zorder)
        O = oh_leading(S, C, F, G, x, zorder, bc)
        rhs = (O * gaussian(rat(S.bigQ(x), 2), zorder)).scale(rat(2) ** (1 + bc.M))
        if lead != rhs:
            raise StructureMismatch("structure mismatch: leading term")
        checks["leading_term"] = True
    else:
        lead = NumericZ({}, zorder)
    table = []
    for name, group in (("B_F", bc.B_F), ("B_G", bc.B_G), ("B_I", bc.B_I)):
        for W in group:
            table.append({
                "set": name,
                "W": W,
                "order": bc.order(W),
                "epsilon": epsilon_W(S, F, G, W),
                "sign": -1 if int((S.inter(C, C) + S.inter(C, W)) // 2) % 2 else 1,
            })
    return StructureReport(bc.M, k, P_solved, simple, lead, table, checks, psi)


def class_contribution(S: SurfaceModel, C, F, G, W, x, zorder: int, orbit: bool = False) -> dict:
    """Principal part {n: {j: coeff of y^-j}} of q^{-W^2/8} exp(W x z h) A(tau, x.z).

    With orbit=True the class stands for its orbit W + 2nF, n >= 0 (W F = 0),
    summed as e^{Wxz}/(1 - (-1)^{CF} e^{2Fxz}).
    """
    W, x = vec(W), vec(x)
    sq = S.square(W)
    ex = NumericZ(dict(enumerate(exp_coefficients(S.inter(W, x), zorder + 1))), zorder + 1)
    if orbit:
        eps = -1 if S.inter(C, F) % 2 else 1
        ex = ex * NumericZ(pole_kernel(2 * S.inter(F, x), eps, zorder + 1), zorder + 1)
    ex = ex.truncate(zorder)
    e = units(-rat(sq, 8))
    body = FormalZ({n: QSeries({e: c}) for n, c in ex.terms.items()}, zorder)
    need = max(-e, 0) + 6 * abs(S.sigma) + GRID
    h = series_to("eta2sq_over_eta4", need + GRID)
    body = _substitute_y(body, 1, h, zorder, need)
    prod = blowup_A(S, x, need, zorder) * body
    out = {}
    for n in range(-1, zorder + 1):
        s = prod.terms.get(n)
        if s is None or s.truncate(0).is_zero():
            out[n] = {}
            continue
        yl = expand_in_y(QSeries(s.truncate(0).coeffs, 0), -1)
        out[n] = {-j: c for j, c in yl.principal_part().items()}
    return out


# ---------------------------------------------------------------------------
# blowup formulas


@dataclass
class BlowupSeries:
    B: list
    S: list
    reading: str


def _blowup_side(which: str, max_k: int, qorder, reading: str) -> list:
    trunc = units(qorder) + 1
    margin = trunc + 6 * (max_k + 2) + 2 * GRID
    fc = series_to("f_core", margin + GRID)
    finv = fc.inverse(margin).scale(phase(rat(1, 8)))
    w = FormalZ({1: finv}, max_k)
    mu, nu = (0, 0) if which == "B" else (1, 1)
    th = theta_charz(mu, nu, w, rat(margin, GRID), max_k)
    Gs = series_to("G", margin)
    if reading == "G/f^2":
        gexp = Gs * finv * finv
    else:
        gexp = Gs * finv
    gauss = FormalZ({2: gexp}, max_k).exp()
    theta_inv = series_to("theta", margin).inverse(margin)
    total = (th * gauss).map(lambda s: s * theta_inv)
    if which == "S":
        total = total.scale(phase(rat(-1, 8)))
    polys = []
    for k in range(max_k + 1):
        s = total.terms.get(k, QSeries.zero(trunc)).truncate(trunc)
        p = as_poly_in_U(s)
        polys.append(UPoly([simplify(_smul(c, factorial(k))) for c in p.coeffs]))
    return polys


def blowup_polys(max_k: int, qorder=None, reading: str = "G/f^2") -> BlowupSeries:
    """Universal blowup polynomials B_k(U), S_k(U) for k <= max_k."""
    qorder = rat(max_k + 4, 2) if qorder is None else rat(qorder)
    return BlowupSeries(_blowup_side("B", max_k, qorder, reading), _blowup_side("S", max_k, qorder, reading), reading)


def adjudicate_gaussian(max_k: int = 6) -> dict:
    """Which Gaussian exponent reading makes every t-coefficient a polynomial in U."""
    out = {}
    for reading in ("G/f^2", "G/f"):
        try:
            blowup_polys(max_k, reading=reading)
            out[reading] = True
        except ValueError:
            out[reading] = False
    return out


def _interpolate(samples: list, values: list) -> list:
    """Coefficients of the polynomial of degree < len(samples) through the points."""
    n = len(samples)
    rows = [[rat(s) ** j for j in range(n)] for s in samples]
    sol = _solve_exact(rows, values, n)
    if sol is None:
        raise ArithmeticError("interpolation failed")
    return sol


def blowup_surface(S: SurfaceModel) -> SurfaceModel:
    from .lattice import make_surface

    if S.kind != "p2blow":
        raise LatticeError("blowup is implemented for p2blow(N)")
    return make_surface("p2blow", S.N + 1)


def blowup_verify(S: SurfaceModel, C, F, x, t_order: int, z_order: int, max_r: int = 1) -> dict:
    """Check the blowup formulas and the cosh/sinh identities on X -> X # P2bar.

    Bivariate identities in (z, t) are tested at t = lam z for t_order + z_order + 1
    rational lam and interpolated, which determines every z^i t^j coefficient
    with i + j <= t_order + z_order.
    """
    C, F, x = vec(C), tuple(int(t) for t in F), vec(x)
    Xh = blowup_surface(S)
    Fh = F + (0,)
    Ch, CEh = C + (0,), C + (1,)
    total = t_order + z_order
    bc = basic_classes(S, F)
    k = max(bc.k, 1)
    rmax = max_r + total // 2 + 2 * k
    base = psi_rational_family(S, C, F, x, rmax, total)
    blow = blowup_polys(total + 1)
    # the z^n coefficient has degree <= n + 1 in lam (a 1/z term carries no lam)
    lams = [rat(j, 3) for j in range(1, total + 3)]
    lead_poly = poly_mul({0: ONE, 1: rat(1, 2)}, poly_pow({0: ONE, 2: rat(-1, 4)}, k - 1))
    lead_X = assemble(base, lead_poly, total)
    report = {"blowup_B": True, "blowup_S": True, "cosh": True, "sinh": True}
    cosh_vals, sinh_vals, lhs_c, lhs_s = [], [], [], []
    for lam in lams:
        xh = x + (lam,)
        hat = psi_rational_family(Xh, Ch, Fh, xh, max_r + 2 * k, total)
        hatE = psi_rational_family(Xh, CEh, Fh, xh, max_r + 2 * k, total)
        for r in range(max_r + 1):
            for name, polys, got in (("blowup_B", blow.B, hat[r]), ("blowup_S", blow.S, hatE[r])):
                rhs = NumericZ({}, total)
                for kk, poly in enumerate(polys):
                    if kk > total + 1:
                        break
                    shifted = {r + j: c for j, c in enumerate(poly.coeffs) if c}
                    if not shifted or max(shifted) > rmax:
                        if shifted:
                            raise BlowupMismatch("psi family too short for the blowup polynomial")
                        continue
                    term = assemble(base, shifted, total).shift(kk).truncate(total)
                    rhs = rhs + term.scale(rat(lam) ** kk / factorial(kk))
                if got != rhs:
                    raise BlowupMismatch(f"{name} mismatch at r={r}, t = {lam} z")
        lhs_c.append(assemble(hat, lead_poly, total))
        lhs_s.append(assemble(hatE, lead_poly, total))
        top = total + 1
        ch = NumericZ({2 * j: rat(lam) ** (2 * j) / factorial(2 * j) for j in range(top // 2 + 1)}, top)
        sh = NumericZ({2 * j + 1: rat(lam) ** (2 * j + 1) / factorial(2 * j + 1) for j in range((top + 1) // 2)}, top)
        g = gaussian(-rat(lam) ** 2 / 2, top)
        cosh_vals.append(lead_X * ch * g)
        sinh_vals.append(lead_X * sh * g)
    # interpolate each z^n coefficient in lam and compare coefficient-wise
    for name, lhs, rhs in (("cosh", lhs_c, cosh_vals), ("sinh", lhs_s, sinh_vals)):
        for n in range(-1, total + 1):
            a = _interpolate(lams, [v[n] for v in lhs])
            b = _interpolate(lams, [v[n] for v in rhs])
            for j in range(min(t_order, n + 1) + 1):
                if n - j <= z_order and a[j] != b[j]:
                    raise BlowupMismatch(f"{name} identity fails at z^{n - j} t^{j}")
    return report


# ---------------------------------------------------------------------------
# P1 x P1 and the one-point blowup of P2


def _chamber_vector(S: SurfaceModel, a, b) -> tuple:
    """a F + b G on p1xp1, a Fbar + b Gbar on p2blow(1)."""
    a, b = rat(a), rat(b)
    if S.kind == "p1xp1":
        return (a, b)
    if S.kind == "p2blow" and S.N == 1:
        return (a + b, b - a)
    raise LatticeError("interior invariants are implemented for p1xp1 and p2blow:1")


def ruling_pair(S: SurfaceModel) -> tuple:
    if S.kind == "p1xp1":
        return (1, 0), (0, 1)
    if S.kind == "p2blow" and S.N == 1:
        return (1, -1), (1, 1)
    raise LatticeError("interior invariants are implemented for p1xp1 and p2blow:1")


def p1xp1_closed_forms(C_kind: str, s, t, r: int, zorder: int) -> NumericZ:
    """Phi_C^{P1xP1, F+}(e^{(s f + t g) z} p^r) for C in {0, F} from the coth / 1/sinh forms."""
    s, t = rat(s), rat(t)
    if not t:
        raise ThetaUndefined("pole in z beyond floor")
    K = pole_kernel(-t, 1, zorder + 1)  # 1/(1 - e^{-t y})
    if C_kind == "0":
        num = {n: c for n, c in enumerate(exp_coefficients(-t, zorder + 1))}
        num[0] = num[0] + 1  # 1 + e^{-ty}
    elif C_kind == "F":
        num = {n: 2 * c for n, c in enumerate(exp_coefficients(-t / 2, zorder + 1))}
    else:
        raise ValueError("C must be 0 or F")
    body = NumericZ(K, zorder + 1) * NumericZ(num, zorder + 1)
    ypoly = _mul_ypoly(_scalar_series(body.truncate(zorder).terms), _gauss_poly(-2 * s * t, zorder), zorder)
    trunc = units(rat(r + 1, 4)) + 1
    series = _y_to_z(ypoly, QSeries.const(-1), zorder, trunc)
    return _extract(series, r, zorder)


def f_plus_pole_route(S: SurfaceModel, C, x, r: int, zorder: int) -> NumericZ:
    """Phi_C^{X,F+} = Phi_C^{X,F} minus the pole-group part of the boundary theta function."""
    F, G = ruling_pair(S)
    boundary = psi_boundary_diff(S, C, F, G, x, r, zorder)
    pole = phi_fn(S, C, F, G, x, rat(r + 1, 4), zorder, groups=("pole_f",))
    return boundary - _extract(pole, r, zorder)


def f_plus_invariant(S: SurfaceModel, C, x, r: int, zorder: int) -> NumericZ:
    """Phi_C^{X,F+}(e^{xz} p^r) via the closed forms (P1xP1 and its blowup relation)."""
    C, x = vec(C), vec(x)
    F, G = ruling_pair(S)
    if S.inter(C, F) % 2:
        return NumericZ({}, zorder)
    if S.kind == "p1xp1":
        s, t = x
        if C == (0, 0):
            return p1xp1_closed_forms("0", s, t, r, zorder)
        if C == (1, 0):
            return p1xp1_closed_forms("F", s, t, r, zorder)
    else:
        # x = s fbar + t gbar
        s, t = (x[0] - x[1]) / 2, (x[0] + x[1]) / 2
        if C == (0, 0):
            return p1xp1_closed_forms("0", s, 2 * t, r, zorder)
        if C == (1, -1):
            return p1xp1_closed_forms("F", s, 2 * t, r, zorder)
    return f_plus_pole_route(S, C, x, r, zorder)


def interior_invariant(S: SurfaceModel, C, a, b, x, r: int, zorder: int) -> NumericZ:
    """Phi_C^{X, aF+bG}(e^{xz} p^r) from the F+ chamber plus the walls in between."""
    if rat(a) <= 0 or rat(b) <= 0:
        raise ValueError("a and b must be positive")
    C, x = vec(C), vec(x)
    F, G = ruling_pair(S)
    dmax = zorder + 2 * r
    eps = rat(1, 8 * (dmax + 4))
    near = tuple(rat(f) + eps * g for f, g in zip(F, G))
    target = _chamber_vector(S, a, b)
    base = f_plus_invariant(S, C, x, r, zorder)
    return base + wallcross_sum(S, C, x, r, target, near, zorder)


# ---------------------------------------------------------------------------
# Seiberg-Witten dictionary


OMEGA_TEMPLATE = (
    "Omega_C^{X,F}(tau, x) = - sum_{W in R_F} (-1)^{C(W+C)/2} q^{-W^2/8} e^{Wx} / (1 - (-1)^{CF} e^{2Fx})"
    " + sum_W q^{-W^2/8} (-1)^{C(W+C)/2} SW_{N_W}(W) e^{Wx}"
)


def sw_report(S: SurfaceModel, F) -> dict:
    """B_F as the representative system R_F, and B_I with its negatives as the SW-basic set."""
    bc = basic_classes(S, tuple(int(t) for t in F))
    sw = sorted(bc.B_I + [tuple(-w for w in W) for W in bc.B_I])
    return {
        "R_F": [{"W": W, "order": bc.order(W)} for W in bc.B_F],
        "sw_basic": [{"W": W, "order": bc.order(W)} for W in sw],
        "M": bc.M,
        "k": bc.k,
        "omega_template": OMEGA_TEMPLATE,
    }
