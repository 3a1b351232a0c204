"""Independent reference computations used by the tests.

Everything here works on plain ``fractions.Fraction`` lists and dicts and does not
import the package, so agreement with the package is a genuine cross-check.
"""
from __future__ import annotations

from fractions import Fraction as Fr
from math import factorial, isqrt


def divisor_sum(n: int, k: int = 1, odd_only: bool = False) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0 and (d % 2 or not odd_only))


def theta_sum(top: Fr) -> dict:
    """sum over integers n of q^{n^2/2}, exponents <= top."""
    out: dict = {}
    m = isqrt(int(2 * top)) + 1
    for n in range(-m, m + 1):
        e = Fr(n * n, 2)
        if e <= top:
            out[e] = out.get(e, 0) + 1
    return out


def eta_quotient_product(top: int, num: list, den: list) -> list:
    """Coefficients of prod_n (1-q^{an})^{e} over (a, e) in num, divided by those in den, up to q^top."""
    series = [Fr(0)] * (top + 1)
    series[0] = Fr(1)
    for factors, sign in ((num, 1), (den, -1)):
        for a, e in factors:
            for n in range(1, top // a + 1):
                for _ in range(e):
                    step = a * n
                    if sign > 0:
                        # multiply by (1 - q^step)
                        for i in range(top, step - 1, -1):
                            series[i] -= series[i - step]
                    else:
                        # divide by (1 - q^step)
                        for i in range(step, top + 1):
                            series[i] += series[i - step]
    return series


def mul(a: list, b: list, n: int) -> list:
    out = [Fr(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def inv(a: list, n: int) -> list:
    out = [Fr(1) / a[0]]
    for m in range(1, n + 1):
        s = sum(a[k] * out[m - k] for k in range(1, min(m, len(a) - 1) + 1))
        out.append(-s / a[0])
    return out


def exp_linear(c, n: int) -> list:
    """e^{c z} to z^n."""
    c = Fr(c)
    return [c**k / factorial(k) for k in range(n + 1)]


def cosh_linear(c, n: int) -> list:
    c = Fr(c)
    return [c**k / factorial(k) if k % 2 == 0 else Fr(0) for k in range(n + 1)]


def sinh_linear(c, n: int) -> list:
    c = Fr(c)
    return [c**k / factorial(k) if k % 2 else Fr(0) for k in range(n + 1)]


def gauss(c, n: int) -> list:
    """e^{c z^2} to z^n."""
    c = Fr(c)
    return [c ** (k // 2) / factorial(k // 2) if k % 2 == 0 else Fr(0) for k in range(n + 1)]


def geometric_kernel(u, n: int) -> dict:
    """1/(1 - e^{u y}) as a Laurent series in y to y^n: {power: coeff}, via Bernoulli-free inversion."""
    u = Fr(u)
    # 1 - e^{uy} = -u y (1 + u y/2 + ...); invert the bracket
    bracket = [u**k / factorial(k + 1) for k in range(n + 2)]
    b_inv = inv(bracket, n + 1)
    return {k - 1: -c / u for k, c in enumerate(b_inv)}


def _compositions(values: list, slots: int, sq_total: int):
    """Multisets {value: count} of ``slots`` entries from ``values`` with the given sum of squares."""
    counts: dict = {}

    def rec(i, left, sq_left):
        if i == len(values):
            if left == 0 and sq_left == 0:
                yield {v: n for v, n in counts.items() if n}
            return
        v = values[i]
        for n in range(left + 1):
            if n * v * v > sq_left:
                break
            counts[v] = n
            yield from rec(i + 1, left - n, sq_left - n * v * v)
        counts[v] = 0

    yield from rec(0, slots, sq_total)


def _multinomial(counts: dict) -> int:
    out = factorial(sum(counts.values()))
    for n in counts.values():
        out //= factorial(n)
    return out


def count_wf_negative_classes(f0: int, N: int, order: int, w0_max: int = 21, v_max: int = 9) -> tuple:
    """Count characteristic W on p2blow(N) with W.F < 0 < W.G for F = (f0, 1^N), G = H + E1.

    Classes of the given order satisfy w0^2 - sum w_i^2 = 8 order + 1 - N.  Returns
    (count, largest |w0| seen, largest |w_i| seen) so callers can check the search box.
    """
    target = 8 * order + 1 - N
    values = [v for v in range(-v_max, v_max + 1, 2)]
    total, top0, topv = 0, 0, 0
    for w0 in range(-w0_max, w0_max + 1, 2):
        for counts in _compositions(values, N, w0 * w0 - target):
            s = sum(v * n for v, n in counts.items())
            wf = f0 * w0 - s
            if wf >= 0:
                continue
            for w1 in counts:
                if w0 - w1 <= 0:
                    continue
                rest = dict(counts)
                rest[w1] -= 1
                m = _multinomial({v: n for v, n in rest.items() if n})
                total += m
                top0 = max(top0, abs(w0))
                topv = max(topv, max(abs(v) for v in counts))
    return total, top0, topv
