"""Quick built-in consistency checks behind the `selftest` subcommand."""
from __future__ import annotations

from math import factorial
from typing import Callable

from .exactnum import rat
from .lattice import basic_classes, make_surface, parse_class
from .modforms import coeff_in_u, series_to
from .qseries import NumericZ, QSeries, units


def _modforms_identities() -> bool:
    T = units(12) + 1
    U, R, f = series_to("U", T + 48), series_to("R", T + 48), series_to("f", T + 48)
    lhs1 = (U * U - 4).truncate(T)
    rhs1 = R.scale(rat(-1, 16)).truncate(T)
    lhs2 = U.qderiv().truncate(T)
    rhs2 = (R * f * f).scale(rat(-1, 16)).truncate(T)
    return lhs1 == rhs1 and lhs2 == rhs2


def _modforms_R_head() -> bool:
    R = series_to("R", units(rat(3, 2)) + 1)
    want = {rat(-1, 2): 1, 0: 24, rat(1, 2): 276, 1: 2048, rat(3, 2): 11202}
    return all(R[e] == c for e, c in want.items())


def _modforms_dual_route() -> bool:
    s = QSeries({-36: rat(3), -12: rat(-1, 2), 0: rat(5), 12: rat(7)}, 12 * 6)
    return all(coeff_in_u(s, r) is not None for r in range(4))


def _theta_kronecker() -> bool:
    from .theta import kronecker_F, kronecker_product_form

    return kronecker_F(rat(1, 3), rat(2), 3, 6) == kronecker_product_form(rat(1, 3), rat(2), 3, 6)


def _theta_box() -> bool:
    from .theta import definitional_monomials, fourier_monomials

    S = make_surface("p1xp1")
    L = S.lattice
    return fourier_monomials(L, (1, 0), (1, 0), (0, 1), 3, 6) == definitional_monomials(L, (1, 0), (1, 0), (0, 1), 3, 6)


def _structure_simple_type() -> bool:
    from .donaldson import structure_theorem

    S = make_surface("p2blow", 10)
    F = parse_class("4,2x2,1x8", 11)
    rep = structure_theorem(S, (1,) + (0,) * 10, F, (1,) + (0,) * 9 + (1,), None, 6)
    return rep.k == 1 and rep.simple_type and all(rep.checks.values())


def _examples_basic_classes() -> bool:
    S = make_surface("p2blow", 10)
    F = parse_class("4,2x2,1x8", 11)
    bc = basic_classes(S, F)
    W = parse_class("3,1x10", 11)
    return set(bc.B_F) == {W, tuple(2 * a - b for a, b in zip(F, W))} and not bc.B_I


def _examples_cosh() -> bool:
    from .donaldson import psi_rational_family

    S = make_surface("p2blow", 9)
    F = parse_class("3,1x9", 10)
    C, x, Z = (1,) + (0,) * 9, (1,) + (0,) * 8 + (1,), 6
    psi = psi_rational_family(S, C, F, x, 1, Z)
    lhs = psi[0] + psi[1].scale(rat(1, 2))
    Fx, Qx = S.inter(F, x), S.bigQ(x)
    cosh = NumericZ({2 * j: rat(Fx) ** (2 * j) / factorial(2 * j) for j in range(Z // 2 + 1)}, Z)
    inv = [rat(1)]
    for n in range(1, Z + 1):
        inv.append(-sum(cosh[k] * inv[n - k] for k in range(1, n + 1)))
    gauss = NumericZ({2 * j: (rat(Qx) / 2) ** j / factorial(j) for j in range(Z // 2 + 1)}, Z)
    sign = -1 if int((S.square(C) + S.inter(C, F)) // 2) % 2 else 1
    return lhs == (gauss * NumericZ(dict(enumerate(inv)), Z)).scale(-sign)


SUITES: dict[str, list[tuple[str, Callable[[], bool]]]] = {
    "modforms": [
        ("U^2 - 4 = -R/16 and q dU/dq = -R f^2/16", _modforms_identities),
        ("R leading coefficients", _modforms_R_head),
        ("residue and reversion extraction agree", _modforms_dual_route),
    ],
    "theta": [
        ("Kronecker Fourier form equals product form", _theta_kronecker),
        ("indefinite theta equals its definitional sum in a box", _theta_box),
    ],
    "structure": [("p2blow:10, F = (4,2^2,1^8) is of simple type", _structure_simple_type)],
    "examples": [
        ("basic classes of p2blow:10, F = (4,2^2,1^8)", _examples_basic_classes),
        ("p2blow:9, F = (3,1^9) cosh closed form", _examples_cosh),
    ],
}


def run_suite(name: str) -> list:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for suite in names:
        for label, check in SUITES[suite]:
            try:
                ok = bool(check())
            except (ArithmeticError, ValueError, RuntimeError):
                ok = False
            results.append((f"{suite}: {label}", ok))
    return results
