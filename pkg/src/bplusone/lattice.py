"""Lattices of type (r-1, 1), the surface/lattice dictionary, and exact
vector enumeration in slices of fixed (xi.f, xi.g).

Surface classes and lattice vectors share coordinates; the lattice form is
the negated intersection form, so a.b = -AB, Q(a) = -A^2/2 and the lattice
signature is minus the surface signature.

Shifted vectors xi in L + c/2 are handled through doubled integer
coordinates X = 2 xi, which keeps the hot loops in integer arithmetic.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Iterable, Sequence

from .exactnum import rat, ZERO

Vector = tuple


def vec(xs: Iterable) -> Vector:
    return tuple(rat(x) for x in xs)


def _is_int(x) -> bool:
    return rat(x).denominator == 1


def _ceil(x) -> int:
    x = rat(x)
    return -((-x.numerator) // x.denominator)


def _floor(x) -> int:
    x = rat(x)
    return x.numerator // x.denominator


def _isqrt_floor(x) -> int:
    """floor(sqrt(x)) for a nonnegative rational."""
    x = rat(x)
    if x <= 0:
        return 0
    p, q = int(x.numerator), int(x.denominator)
    return isqrt(p * q) // q


class LatticeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# lattices


class Lattice:
    """Integral lattice given by the Gram matrix of its bilinear form."""

    def __init__(self, gram: Sequence[Sequence[int]], orientation: Sequence | None = None):
        self.gram = tuple(tuple(int(v) for v in row) for row in gram)
        self.rank = len(self.gram)
        for i in range(self.rank):
            for j in range(self.rank):
                if self.gram[i][j] != self.gram[j][i]:
                    raise LatticeError("Gram matrix must be symmetric")
        self.orientation = vec(orientation) if orientation is not None else None

    def dot(self, u, v):
        g = self.gram
        s = ZERO
        for i, ui in enumerate(u):
            if ui:
                row = g[i]
                for j, vj in enumerate(v):
                    if vj and row[j]:
                        s += ui * row[j] * vj
        return rat(s)

    def Q(self, u):
        return self.dot(u, u) / 2

    def pivots(self) -> list:
        """Diagonal of a rational LDL^T decomposition (with symmetric pivoting)."""
        n = self.rank
        a = [[rat(x) for x in row] for row in self.gram]
        out = []
        idx = list(range(n))
        while idx:
            i = next((k for k in idx if a[k][k] != 0), None)
            if i is None:
                # find an off-diagonal entry and change basis u -> u + v
                k, l = next(((k, l) for k in idx for l in idx if k != l and a[k][l] != 0), (None, None))
                if k is None:
                    out.extend([ZERO] * len(idx))
                    break
                for m in range(n):
                    a[k][m] += a[l][m]
                for m in range(n):
                    a[m][k] += a[m][l]
                continue
            p = a[i][i]
            out.append(p)
            idx.remove(i)
            for k in idx:
                fk = a[k][i] / p
                for l in idx:
                    a[k][l] -= fk * a[i][l]
        return out

    def determinant(self) -> int:
        # the pivoting steps are unimodular congruences, so the pivot product is the determinant
        det = rat(1)
        for p in self.pivots():
            det *= p
        return int(det)

    def signature_pair(self) -> tuple:
        piv = self.pivots()
        return sum(1 for p in piv if p > 0), sum(1 for p in piv if p < 0)

    @property
    def signature(self) -> int:
        p, n = self.signature_pair()
        return p - n

    def is_unimodular(self) -> bool:
        return abs(self.determinant()) == 1

    def characteristic_vector(self) -> tuple:
        """Some w with w.x = x.x (mod 2) for all x, found over GF(2)."""
        n = self.rank
        rows = [[self.gram[i][j] % 2 for j in range(n)] + [self.gram[i][i] % 2] for i in range(n)]
        piv_cols = []
        r = 0
        for col in range(n):
            p = next((k for k in range(r, n) if rows[k][col]), None)
            if p is None:
                continue
            rows[r], rows[p] = rows[p], rows[r]
            for k in range(n):
                if k != r and rows[k][col]:
                    rows[k] = [(x + y) % 2 for x, y in zip(rows[k], rows[r])]
            piv_cols.append(col)
            r += 1
        if any(row[n] for row in rows[r:]):
            raise LatticeError("no characteristic vector (degenerate mod 2)")
        w = [0] * n
        for k, col in enumerate(piv_cols):
            w[col] = rows[k][n]
        return tuple(w)

    def is_characteristic(self, w) -> bool:
        return all((self.dot(w, e) - self.gram[i][i]) % 2 == 0 for i, e in enumerate(_unit_vectors(self.rank)))

    def in_cusp_set(self, f) -> bool:
        """f primitive, Q(f) = 0, f.f0 < 0."""
        if len(f) != self.rank:
            return False
        if not all(_is_int(x) for x in f) or not any(f):
            return False
        if gcd(*[int(x) for x in f]) != 1:
            return False
        if self.Q(f) != 0:
            return False
        if self.orientation is None:
            return True
        return self.dot(f, self.orientation) < 0

    def in_positive_cone(self, h) -> bool:
        return self.Q(h) < 0 and (self.orientation is None or self.dot(h, self.orientation) < 0)

    def is_diagonal_lorentzian(self) -> bool:
        g = self.gram
        return g[0][0] == -1 and all(
            g[i][j] == (1 if i == j else 0) for i in range(self.rank) for j in range(self.rank) if (i, j) != (0, 0)
        )


def _unit_vectors(n: int):
    for i in range(n):
        yield tuple(rat(1) if j == i else ZERO for j in range(n))


# ---------------------------------------------------------------------------
# surfaces


@dataclass
class SurfaceModel:
    kind: str
    N: int
    gram: tuple  # intersection form
    names: tuple
    reference: tuple  # a class with positive square in the chosen component
    lattice: Lattice = field(init=False)

    def __post_init__(self):
        neg = [[-v for v in row] for row in self.gram]
        self.lattice = Lattice(neg, orientation=self.reference)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def inter(self, a, b):
        """Intersection product AB."""
        return -self.lattice.dot(a, b)

    def square(self, a):
        return self.inter(a, a)

    def bigQ(self, x):
        """Quadratic form x^2 on H_2 (equal to -2Q)."""
        return self.square(x)

    @property
    def sigma(self) -> int:
        """Signature of the surface."""
        return -self.lattice.signature

    def canonical_characteristic(self) -> tuple:
        if self.kind in ("p2blow",):
            return tuple(1 for _ in range(self.rank))
        if self.kind == "p1xp1":
            return (0, 0)
        if self.kind == "p1xp1blow":
            return (0, 0) + tuple(1 for _ in range(self.N))
        return self.lattice.characteristic_vector()

    def is_characteristic(self, w) -> bool:
        return self.lattice.is_characteristic(w)

    def default_G(self, j: int = 1) -> tuple:
        """H + E_j, the reference cusp with vanishing invariants."""
        if self.kind != "p2blow" or not (1 <= j <= self.N):
            raise LatticeError("default G needs p2blow(N) with 1 <= j <= N")
        g = [0] * self.rank
        g[0] = 1
        g[j] = 1
        return tuple(g)

    def basis_vector(self, name: str) -> tuple:
        i = self.names.index(name)
        return tuple(1 if k == i else 0 for k in range(self.rank))

    def describe(self) -> str:
        return f"{self.kind}:{self.N}" if self.kind in ("p2blow", "p1xp1blow") else self.kind


def make_surface(kind: str, N: int = 0, gram=None) -> SurfaceModel:
    if N < 0:
        raise LatticeError("N must be >= 0")
    if kind == "p2blow":
        n = N + 1
        g = tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(n)) for i in range(n))
        names = ("H",) + tuple(f"E{i}" for i in range(1, N + 1))
        ref = (1,) + (0,) * N
        return SurfaceModel("p2blow", N, g, names, ref)
    if kind == "p1xp1":
        return SurfaceModel("p1xp1", 0, ((0, 1), (1, 0)), ("F", "G"), (1, 1))
    if kind == "p1xp1blow":
        n = N + 2
        g = [[0] * n for _ in range(n)]
        g[0][1] = g[1][0] = 1
        for i in range(2, n):
            g[i][i] = -1
        names = ("F", "G") + tuple(f"E{i}" for i in range(1, N + 1))
        return SurfaceModel("p1xp1blow", N, tuple(tuple(r) for r in g), names, (1, 1) + (0,) * N)
    if kind == "custom":
        if gram is None:
            raise LatticeError("custom surface needs a Gram matrix")
        gram = tuple(tuple(int(v) for v in row) for row in gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise LatticeError("Gram matrix must be square")
        form = Lattice(gram)
        if not form.is_unimodular():
            raise LatticeError("Gram matrix must be unimodular")
        if form.signature_pair() != (1, n - 1):
            raise LatticeError("Gram matrix must have signature (1, r - 1)")
        ref = _positive_reference(gram)
        return SurfaceModel("custom", n, gram, tuple(f"e{i}" for i in range(n)), ref)
    raise LatticeError(f"unknown surface kind {kind!r}")


def _positive_reference(gram) -> tuple:
    n = len(gram)
    for v in itertools.product(range(-2, 3), repeat=n):
        s = sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n))
        if s > 0:
            return v
    raise LatticeError("no positive class found for custom surface")


def parse_surface(spec: str) -> SurfaceModel:
    """'p2blow:9', 'p1xp1', 'p1xp1blow:2', 'custom:<path to whitespace gram>'."""
    if spec == "p1xp1":
        return make_surface("p1xp1")
    m = re.fullmatch(r"(p2blow|p1xp1blow):(\d+)", spec)
    if m:
        return make_surface(m.group(1), int(m.group(2)))
    if spec.startswith("custom:"):
        with open(spec[7:]) as fh:
            rows = [[int(t) for t in line.split()] for line in fh if line.strip()]
        return make_surface("custom", gram=rows)
    raise LatticeError(f"cannot parse surface {spec!r}")


def parse_class(text: str, rank: int | None = None) -> tuple:
    """'4,2x2,1x8' -> (4, 2, 2, 1, ..., 1); entries may be rational like 1/2."""
    out = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if "x" in part:
            value, mult = part.split("x")
            out.extend([rat(value)] * int(mult))
        else:
            out.append(rat(part))
    if rank is not None:
        if len(out) > rank:
            raise LatticeError(f"class has {len(out)} entries, surface rank is {rank}")
        out.extend([ZERO] * (rank - len(out)))
    return tuple(int(x) if x.denominator == 1 else x for x in out)


def format_class(v: Sequence) -> str:
    """Inverse of parse_class, grouping equal neighbours."""
    parts = []
    for value, grp in itertools.groupby(v):
        n = len(list(grp))
        parts.append(f"{value}x{n}" if n > 1 else f"{value}")
    return ",".join(parts)


def multiplicity_notation(v: Sequence) -> str:
    """(d0, d1^n1, ...) in multiplicity notation."""
    parts = []
    for value, grp in itertools.groupby(v):
        n = len(list(grp))
        parts.append(f"{value}^{n}" if n > 1 else f"{value}")
    return "(" + ", ".join(parts) + ")"


def is_cusp_class(S: SurfaceModel, F) -> bool:
    """F primitive, F^2 = 0, in the closure of the chosen positive component."""
    return S.lattice.in_cusp_set(vec(F))


# ---------------------------------------------------------------------------
# integer linear algebra for slices


def _column_reduce(rows: list) -> tuple:
    """Unimodular U with rows @ U = [H | 0], H lower triangular (len(rows) x len(rows))."""
    m = len(rows)
    n = len(rows[0])
    A = [list(r) for r in rows]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def colop(i, j, a, b, c, d):
        # columns (i, j) <- (a*col_i + b*col_j, c*col_i + d*col_j)
        for M in (A, U):
            for row in M:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + b * y, c * x + d * y

    for r in range(m):
        for j in range(r + 1, n):
            x, y = A[r][r], A[r][j]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            colop(r, j, s, t, -y // g, x // g)
        if A[r][r] < 0:
            for M in (A, U):
                for row in M:
                    row[r] = -row[r]
    H = [[A[i][j] for j in range(m)] for i in range(m)]
    return H, U


def _xgcd(a: int, b: int) -> tuple:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _fp_decompose(G: list) -> list:
    """Fincke-Pohst decomposition of a positive definite rational matrix."""
    n = len(G)
    q = [[rat(x) for x in row] for row in G]
    for i in range(n):
        if q[i][i] <= 0:
            raise LatticeError("form is not positive definite on the slice")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _int_range(center, radius2, weight) -> range:
    """Integers t with weight*(t - center)^2 <= radius2."""
    if radius2 < 0:
        return range(0)
    r = _isqrt_floor(radius2 / weight)
    lo = _floor(center) - r - 1
    hi = _ceil(center) + r + 1
    vals = [t for t in range(lo, hi + 1) if weight * (t - center) ** 2 <= radius2]
    return range(vals[0], vals[-1] + 1) if vals else range(0)


def short_vectors(G: list, center: Sequence, bound) -> list:
    """All integer k with (k - center)^T G (k - center) <= bound (G positive definite)."""
    n = len(G)
    if n == 0:
        return [()] if bound >= 0 else []
    q = _fp_decompose(G)
    center = [rat(c) for c in center]
    out = []
    k = [0] * n

    def rec(i, remaining):
        # shifted centre given the already fixed coordinates j > i
        c = center[i] - sum((q[i][j] * (k[j] - center[j]) for j in range(i + 1, n)), ZERO)
        for t in _int_range(c, remaining, q[i][i]):
            rest = remaining - q[i][i] * (t - c) ** 2
            k[i] = t
            if i == 0:
                out.append(tuple(k))
            else:
                rec(i - 1, rest)

    rec(n - 1, rat(bound))
    return out


def _solve_sym(G: list, b: list) -> list:
    """Exact solution of G y = b by Gaussian elimination."""
    n = len(G)
    M = [[rat(x) for x in G[i]] + [rat(b[i])] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                fct = M[r][c] / M[c][c]
                M[r] = [x - fct * y for x, y in zip(M[r], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


# ---------------------------------------------------------------------------
# sliced enumeration


GROUPS = ("pole_f", "pole_g", "sinh", "antisinh")


@dataclass(frozen=True)
class SliceSpec:
    """Enumeration request: xi in L + c/2 with region constraints on (xi.f, xi.g)."""

    c: tuple
    f: tuple
    g: tuple
    qmax: object
    strict: bool = False


def _check_pair(L: Lattice, f, g) -> int:
    if not L.in_cusp_set(f) or not L.in_cusp_set(g):
        raise LatticeError("f and g must be primitive isotropic classes in the chosen cone component")
    N = -L.dot(f, g)
    if N <= 0:
        if N == 0:
            raise LatticeError("degenerate cusp pair")
        raise LatticeError("f.g must be negative")
    return int(N)


def _q_ok(Q, qmax, strict) -> bool:
    return Q < qmax if strict else Q <= qmax


def _ab_slices(group: str, N: int, parA: int, parB: int, qmax, strict) -> Iterable:
    """Doubled (A, B) = (2 xi.f, 2 xi.g) pairs of a region, bounded via Q >= -AB/(4N)."""
    qmax = rat(qmax)
    if group == "pole_f":
        for B in range(-2 * N, 0):
            if (B - parB) % 2 == 0 and parA % 2 == 0:
                if _q_ok(ZERO, qmax, strict) or qmax >= 0:
                    yield 0, B
        return
    if group == "pole_g":
        for A in range(-2 * N, 0):
            if (A - parA) % 2 == 0 and parB % 2 == 0:
                yield A, 0
        return
    if group in ("sinh", "antisinh"):
        if qmax <= 0:
            return
        sgn = 1 if group == "sinh" else -1
        top = _floor(4 * N * qmax)
        for A in range(1, top + 1):
            if (A - parA) % 2:
                continue
            for Bm in range(1, top // A + 1):
                if (Bm - parB) % 2:
                    continue
                val = rat(A * Bm, 4 * N)
                if _q_ok(val, qmax, strict):
                    yield sgn * A, -sgn * Bm
        return
    raise LatticeError(f"unknown group {group!r}")


def _parities(L: Lattice, c, f, g) -> tuple:
    return int(L.dot(c, f)) % 2, int(L.dot(c, g)) % 2


class _SliceSolver:
    """Generic slice enumeration for any lattice (kernel coset + Fincke-Pohst)."""

    def __init__(self, L: Lattice, c, f, g):
        self.L = L
        self.c = vec(c)
        self.f = tuple(int(x) for x in f)
        self.g = tuple(int(x) for x in g)
        rows = [[sum(L.gram[i][j] * v[j] for j in range(L.rank)) for i in range(L.rank)] for v in (self.f, self.g)]
        self.H, self.U = _column_reduce(rows)
        r = L.rank
        self.K = [[self.U[i][j] for i in range(r)] for j in range(2, r)]  # kernel basis vectors
        self.GK = [[L.dot(u, v) for v in self.K] for u in self.K]
        self.cf = L.dot(self.c, self.f)
        self.cg = L.dot(self.c, self.g)

    def vectors(self, A: int, B: int, qmax, strict: bool) -> list:
        """xi in L + c/2 with 2 xi.f = A, 2 xi.g = B and Q(xi) <= qmax."""
        L = self.L
        t1 = (A - self.cf) / 2
        t2 = (B - self.cg) / 2
        if not (_is_int(t1) and _is_int(t2)):
            return []
        (h11, _), (h21, h22) = self.H
        if h11 == 0 or h22 == 0:
            raise LatticeError("f and g are linearly dependent")
        w1 = t1 / h11
        if not _is_int(w1):
            return []
        w2 = (t2 - h21 * w1) / h22
        if not _is_int(w2):
            return []
        r = L.rank
        v0 = [w1 * self.U[i][0] + w2 * self.U[i][1] for i in range(r)]
        xi0 = tuple(self.c[i] / 2 + v0[i] for i in range(r))
        if not self.K:
            return [xi0] if _q_ok(L.Q(xi0), qmax, strict) else []
        lin = [L.dot(xi0, u) for u in self.K]
        center = [-x for x in _solve_sym(self.GK, lin)]
        # Q(xi0 + K k) = Qmin + (k - center)^T GK (k - center) / 2
        qmin =L.Q(xi0) + sum((lin[i] * center[i] for i in range(len(lin))), ZERO) / 2
        budget = 2 * (rat(qmax) - qmin)
        out = []
        for k in short_vectors(self.GK, center, budget):
            xi = tuple(xi0[i] + sum((k[j] * self.K[j][i] for j in range(len(k))), ZERO) for i in range(r))
            if _q_ok(L.Q(xi), qmax, strict):
                out.append(xi)
        return out


def enum_shifted_vectors(L: Lattice, c, f, g, qmax, groups=GROUPS, strict: bool = False) -> dict:
    """{group: sorted list of xi} for xi in L + c/2 with Q(xi) <= qmax (or <).

    Regions in terms of a = xi.f, b = xi.g and N = -f.g:
    pole_f: a = 0, -N <= b < 0;  pole_g: b = 0, -N <= a < 0;
    sinh: a > 0 > b;  antisinh: a < 0 < b.
    """
    c, f, g = tuple(c), tuple(f), tuple(g)
    N = _check_pair(L, f, g)
    pa, pb = _parities(L, c, f, g)
    fast = _DiagonalEngine.applicable(L, f, g)
    out = {}
    if fast is not None:
        eng = _DiagonalEngine(L, c, f, g, fast, funcs=())
        for grp in groups:
            out[grp] = sorted(eng.explicit(grp, qmax, strict))
        return out
    solver = _SliceSolver(L, c, f, g)
    for grp in groups:
        vs = []
        for A, B in _ab_slices(grp, N, pa, pb, qmax, strict):
            vs.extend(solver.vectors(A, B, qmax, strict))
        out[grp] = sorted(vs)
    return out


def theta_terms(L: Lattice, c, f, g, qmax, funcs: Sequence, groups=GROUPS, strict: bool = False,
                engine: str = "auto") -> dict:
    """Aggregated counts {(group, Q, (xi.x for x in funcs)): multiplicity}."""
    c, f, g = tuple(c), tuple(f), tuple(g)
    N = _check_pair(L, f, g)
    funcs = [vec(x) for x in funcs]
    fast = _DiagonalEngine.applicable(L, f, g)
    if engine == "fast" and fast is None:
        raise LatticeError("fast engine needs diag(-1,1,...,1) with g = e0 + ej")
    if fast is not None and engine != "generic":
        return _DiagonalEngine(L, c, f, g, fast, funcs).aggregate(groups, qmax, strict)
    pa, pb = _parities(L, c, f, g)
    solver = _SliceSolver(L, c, f, g)
    out: dict = {}
    for grp in groups:
        for A, B in _ab_slices(grp, N, pa, pb, qmax, strict):
            for xi in solver.vectors(A, B, qmax, strict):
                key = (grp, L.Q(xi), tuple(L.dot(xi, x) for x in funcs))
                out[key] = out.get(key, 0) + 1
    return out


class _DiagonalEngine:
    """Fast slices for gram diag(-1, 1, ..., 1) and g = e0 + ej.

    With X = 2 xi, A = 2 xi.f, B = 2 xi.g and N = f0 - fj one has
    X0 = (SF + fj B - A)/N, Xj = X0 + B and
    Q = -AB/(4N) + D/(8N^2), D = sum over the other coordinates of (N Xi + B fi)^2.
    Coordinates with identical data are grouped into blocks whose contribution
    depends only on (sum Xi, sum of squares term), enumerated by a small DP.
    """

    @staticmethod
    def applicable(L: Lattice, f, g):
        if not L.is_diagonal_lorentzian():
            return None
        g = [int(x) for x in g]
        if g[0] != 1 or sum(1 for x in g if x) != 2:
            return None
        j = next(i for i in range(1, len(g)) if g[i])
        if g[j] != 1:
            return None
        return j

    def __init__(self, L: Lattice, c, f, g, j: int, funcs):
        self.L = L
        self.r = L.rank
        self.j = j
        self.f = [int(x) for x in f]
        self.c = [int(x) for x in c]
        self.N = self.f[0] - self.f[j]
        # lattice linear coefficients: xi.x = -x0 xi0 + sum xi_i x_i
        self.funcs = [vec(x) for x in funcs]
        self.lam = [[-x[0]] + list(x[1:]) for x in self.funcs]
        self.rest = [i for i in range(1, self.r) if i != j]
        blocks: dict = {}
        for i in self.rest:
            key = (self.f[i], tuple(l[i] for l in self.lam), self.c[i] % 2)
            blocks.setdefault(key, []).append(i)
        self.blocks = sorted(blocks.items())
        self._dp_cache: dict = {}

    # -- helpers ----------------------------------------------------------
    def _xrange(self, B: int, fi: int, parity: int, Dmax) -> list:
        N = self.N
        r = _isqrt_floor(Dmax)
        lo = _floor(rat(-B * fi - r, N)) - 1
        hi = _ceil(rat(-B * fi + r, N)) + 1
        return [X for X in range(lo, hi + 1) if (X - parity) % 2 == 0 and (N * X + B * fi) ** 2 <= Dmax]

    def _block_table(self, B: int, bi: int, Dmax: int) -> dict:
        key = (B, bi, Dmax)
        if key in self._dp_cache:
            return self._dp_cache[key]
        (fi, _, parity), members = self.blocks[bi]
        opts = [(X, (self.N * X + B * fi) ** 2) for X in self._xrange(B, fi, parity, Dmax)]
        table = {(0, 0): 1}
        for _ in members:
            nxt: dict = {}
            for (s, d), cnt in table.items():
                for X, dx in opts:
                    nd = d + dx
                    if nd <= Dmax:
                        k = (s + X, nd)
                        nxt[k] = nxt.get(k, 0) + cnt
            table = nxt
        self._dp_cache[key] = table
        return table

    def _merged(self, B: int, Dmax: int) -> dict:
        """{(SF, (S_lambda...), D): count} over all non-special coordinates."""
        states = {(0, tuple(ZERO for _ in self.lam), 0): 1}
        for bi, ((fi, lam, _), _members) in enumerate(self.blocks):
            table = self._block_table(B, bi, Dmax)
            nxt: dict = {}
            for (sf, sl, d), cnt in states.items():
                for (s, db), c2 in table.items():
                    nd = d + db
                    if nd > Dmax:
                        continue
                    k = (sf + fi * s, tuple(a + lv * s for a, lv in zip(sl, lam)), nd)
                    nxt[k] = nxt.get(k, 0) + cnt * c2
            states = nxt
        return states

    def _Dmax(self, qmax, strict) -> int:
        v = 8 * self.N * self.N * rat(qmax)
        return _floor(v)

    def _b_values(self, group: str, qmax) -> list:
        N = self.N
        par = (self.c[self.j] - self.c[0]) % 2
        if group == "pole_f":
            bs = range(-2 * N, 0)
        elif group == "pole_g":
            bs = [0]
        else:
            top = _floor(4 * N * rat(qmax)) if rat(qmax) > 0 else 0
            bs = range(-top, 0) if group == "sinh" else range(1, top + 1)
        return [B for B in bs if (B - par) % 2 == 0]

    def _leaves(self, group: str, B: int, SF: int, D: int, qmax, strict):
        """Yield (A, X0) for a merged state."""
        N, fj = self.N, self.f[self.j]
        c0 = self.c[0] % 2
        base = SF + fj * B  # A = base - N X0
        qmax = rat(qmax)
        dq = rat(D, 8 * N * N)
        if group == "pole_f":
            if base % N == 0:
                X0 = base // N
                if (X0 - c0) % 2 == 0 and _q_ok(dq, qmax, strict):
                    yield 0, X0
            return
        if group == "pole_g":
            if not _q_ok(dq, qmax, strict):
                return
            for A in range(-2 * N, 0):
                if (base - A) % N == 0:
                    X0 = (base - A) // N
                    if (X0 - c0) % 2 == 0:
                        yield A, X0
            return
        # sinh (A > 0 > B) or antisinh (A < 0 < B): Q = |A||B|/(4N) + dq
        Bm = abs(B)
        room = qmax - dq
        if room < 0 or (strict and room == 0):
            return
        Amax = _floor(room * 4 * N / Bm)
        if strict and rat(Amax * Bm, 4 * N) == room:
            Amax -= 1
        sgn = 1 if group == "sinh" else -1
        # A = base - N X0 with A in sgn*[1, Amax]; X0 of parity c0
        lo, hi = (1, Amax) if sgn > 0 else (-Amax, -1)
        if lo > hi:
            return
        X0_lo = _ceil(rat(base - hi, N))
        X0_hi = _floor(rat(base - lo, N))
        for X0 in range(X0_lo, X0_hi + 1):
            if (X0 - c0) % 2:
                continue
            yield base - N * X0, X0

    def _special_values(self, X0: int, B: int, SL: tuple) -> tuple:
        """Functional values xi.x from X0, Xj = X0 + B and the merged sums."""
        j = self.j
        Xj = X0 + B
        return tuple((l[0] * X0 + l[j] * Xj + s) / 2 for l, s in zip(self.lam, SL))

    # -- public -------------------------------------------------------------
    def aggregate(self, groups, qmax, strict) -> dict:
        out: dict = {}
        Dmax = self._Dmax(qmax, strict)
        N = self.N
        merged_cache: dict = {}
        for grp in groups:
            for B in self._b_values(grp, qmax):
                if B not in merged_cache:
                    merged_cache[B] = self._merged(B, Dmax)
                for (SF, SL, D), cnt in merged_cache[B].items():
                    for A, X0 in self._leaves(grp, B, SF, D, qmax, strict):
                        Q = rat(-A * B, 4 * N) + rat(D, 8 * N * N)
                        key = (grp, Q, self._special_values(X0, B, SL))
                        out[key] = out.get(key, 0) + cnt
        return out

    def explicit(self, group: str, qmax, strict) -> list:
        Dmax = self._Dmax(qmax, strict)
        N, j = self.N, self.j
        out = []
        rest = self.rest
        for B in self._b_values(group, qmax):
            opts = [
                [(X, (N * X + B * self.f[i]) ** 2) for X in self._xrange(B, self.f[i], self.c[i] % 2, Dmax)]
                for i in rest
            ]
            X = [0] * self.r

            def rec(k, SF, D):
                if k == len(rest):
                    for A, X0 in self._leaves(group, B, SF, D, qmax, strict):
                        X[0] = X0
                        X[j] = X0 + B
                        out.append(tuple(rat(x, 2) for x in X))
                    return
                i = rest[k]
                for x, dx in opts[k]:
                    if D + dx <= Dmax:
                        X[i] = x
                        rec(k + 1, SF + self.f[i] * x, D + dx)

            rec(0, 0, 0)
        return out


# ---------------------------------------------------------------------------
# basic classes


@dataclass
class BasicClassSets:
    surface: SurfaceModel
    F: tuple
    G: tuple
    B_I: list
    B_F: list
    B_G: list
    M: object
    k: int
    sigma: int

    def order(self, W) -> int:
        return int((self.surface.square(W) - self.sigma) / 8)

    @property
    def B(self) -> list:
        return self.B_I + self.B_F + self.B_G

    def all_with_orders(self) -> list:
        rows = []
        for name, group in (("B_F", self.B_F), ("B_G", self.B_G), ("B_I", self.B_I)):
            for W in group:
                rows.append((name, W, self.order(W)))
        return rows

    def max_order_classes(self) -> list:
        """Members of B_F and -B_I whose order equals k."""
        out = [W for W in self.B_F if self.order(W) == self.k]
        out += [tuple(-w for w in W) for W in self.B_I if self.order(W) == self.k]
        return out


def basic_classes(S: SurfaceModel, F, G=None, explicit: bool = True):
    """Basic classes for (X, F, G); G defaults to H + E1 on p2blow(N).

    Characteristic W correspond to xi = W/2 in L + w/2 with Q(xi) = -W^2/8 and
    W^2 > sigma(X) becomes Q(xi) < sigma(L)/8.  B_F is the lattice pole group
    for f, B_G the one for g, and B_I the region xi.f < 0 < xi.g.
    With explicit=False, returns aggregated counts {(set, order): count}.
    """
    F = tuple(int(x) for x in F)
    G = S.default_G(1) if G is None else tuple(int(x) for x in G)
    if F == G:
        raise LatticeError("degenerate cusp pair")
    L = S.lattice
    w = S.canonical_characteristic()
    sigma_X = S.sigma
    qmax = rat(-sigma_X, 8)
    names = {"pole_f": "B_F", "pole_g": "B_G", "antisinh": "B_I"}
    if not explicit:
        terms = theta_terms(L, w, F, G, qmax, funcs=(), groups=tuple(names), strict=True)
        counts: dict = {}
        for (grp, Q, _), cnt in terms.items():
            order = int((-8 * Q - sigma_X) / 8)
            key = (names[grp], order)
            counts[key] = counts.get(key, 0) + cnt
        return counts
    vs = enum_shifted_vectors(L, w, F, G, qmax, groups=tuple(names), strict=True)
    sets = {}
    for grp, name in names.items():
        sets[name] = sorted(tuple(int(2 * x) for x in xi) for xi in vs[grp])
    allW = sets["B_I"] + sets["B_F"] + sets["B_G"]
    if allW:
        M = max(S.square(W) for W in allW)
        k = int((M - sigma_X) / 8)
    else:
        M, k = None, 0
    return BasicClassSets(S, F, G, sets["B_I"], sets["B_F"], sets["B_G"], M, k, sigma_X)


def max_order(S: SurfaceModel, F, G=None) -> int:
    """k = (M - sigma)/8 from aggregated counts (0 when there are no basic classes)."""
    counts = basic_classes(S, F, G, explicit=False)
    return max((o for (_, o) in counts), default=0)


# ---------------------------------------------------------------------------
# walls


class AmbiguousChamber(LatticeError):
    pass


def _majorant(S: SurfaceModel, H) -> list:
    """Positive definite form P(v) = 2 (vH)^2 / H^2 - v^2 on the surface lattice."""
    n = S.rank
    h2 = S.square(H)
    if h2 <= 0:
        raise LatticeError("period point must have positive square")
    gH = [sum(S.gram[i][k] * rat(H[k]) for k in range(n)) for i in range(n)]
    return [[2 * gH[i] * gH[j] / h2 - S.gram[i][j] for j in range(n)] for i in range(n)]


def _coset_short(S: SurfaceModel, P: list, shift, bound) -> list:
    """v in shift + Z^n with P(v) <= bound."""
    center = [-rat(s) for s in shift]
    return [tuple(rat(k) + rat(s) for k, s in zip(ks, shift)) for ks in short_vectors(P, center, bound)]


def _type_ok(S: SurfaceModel, xi, d: int) -> bool:
    t = rat(d + 3, 4) + S.square(xi)
    return t.denominator == 1 and t >= 0


def wall_enum(S: SurfaceModel, C, d: int, H1, H2) -> list:
    """Classes xi of type (C, d) with xi^2 < 0 and xi H1 < 0 < xi H2."""
    H1, H2 = vec(H1), vec(H2)
    for H in (H1, H2):
        if S.square(H) <= 0 or S.inter(H, S.reference) <= 0:
            raise LatticeError("period points must lie in the positive cone")
    K = rat(d + 3, 4)
    shift = tuple(rat(x) / 2 for x in C)
    for H in (H1, H2):
        P = _majorant(S, H)
        for xi in _coset_short(S, P, shift, K):
            if S.inter(xi, H) == 0 and S.square(xi) < 0 and _type_ok(S, xi, d):
                raise AmbiguousChamber("ambiguous chamber")
    if H1 == H2:
        return []
    p, s, m = S.square(H1), S.square(H2), S.inter(H1, H2)
    disc = m * m - p * s
    if disc <= 0:
        return []
    # xi^2 >= -K together with the sign sandwich bounds |xi H1|^2 <= K disc / s
    u2 = K * disc / s
    bound = 2 * u2 / p + K
    P = _majorant(S, H1)
    out = []
    for xi in _coset_short(S, P, shift, bound):
        sq = S.square(xi)
        if sq < 0 and S.inter(xi, H1) < 0 < S.inter(xi, H2) and _type_ok(S, xi, d):
            out.append(xi)
    return sorted(out)


def wall_enum_box(S: SurfaceModel, C, d: int, H1, H2, radius: int) -> list:
    """Brute force over a coordinate box, for cross-checking wall_enum."""
    out = []
    shift = [rat(x) / 2 for x in C]
    for ks in itertools.product(range(-radius, radius + 1), repeat=S.rank):
        xi = tuple(rat(k) + s for k, s in zip(ks, shift))
        if S.square(xi) < 0 and _type_ok(S, xi, d) and S.inter(xi, vec(H1)) < 0 < S.inter(xi, vec(H2)):
            out.append(xi)
    return sorted(out)
