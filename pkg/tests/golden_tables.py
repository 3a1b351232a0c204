"""Printed leading terms of the named q-series, as (exponent, coefficient) lists.

Each table lists the printed terms in order; exponents not listed up to the last
printed one are zero.  The overall prefactor (phase and power of q) is kept separate.
"""
from fractions import Fraction as Fr

PRINTED = {
    # theta: the printed line reads "1 + 2q^{1/2} + 2q^2 + 2q^{3/2} + 2q^8"
    "theta": (0, 0, [(0, 1), (Fr(1, 2), 2), (2, 2), (Fr(3, 2), 2), (8, 2)]),
    "f": (Fr(-1, 8), Fr(1, 8), [
        (0, 1), (Fr(1, 2), -2), (1, 1), (Fr(3, 2), -2), (2, 2), (3, 3), (Fr(7, 2), -2),
        (Fr(9, 2), -2), (5, 2), (Fr(11, 2), -2), (6, 1), (Fr(13, 2), -2)]),
    "R": (0, 0, [
        (Fr(-1, 2), 1), (0, 24), (Fr(1, 2), 276), (1, 2048), (Fr(3, 2), 11202), (2, 49152),
        (Fr(5, 2), 184024), (3, 614400), (Fr(7, 2), 1881471), (4, 5373952), (Fr(9, 2), 14478180)]),
    "e1": (0, 0, [
        (0, Fr(-1, 6)), (1, -4), (2, -4), (3, -16), (4, -4), (5, -24), (6, -16), (7, -32), (8, -4)]),
    "e3": (0, 0, [
        (0, Fr(1, 12)), (Fr(1, 2), -2), (1, 2), (Fr(3, 2), -8), (2, 2), (Fr(5, 2), -12), (3, 8),
        (Fr(7, 2), -16), (4, 2), (Fr(9, 2), -26), (5, 12), (Fr(11, 2), -24)]),
    "U": (Fr(1, 4), Fr(-1, 4), [
        (0, Fr(-1, 4)), (Fr(1, 2), 5), (1, Fr(31, 2)), (Fr(3, 2), 54), (2, Fr(641, 4)),
        (Fr(5, 2), 409), (3, Fr(1889, 2)), (Fr(7, 2), 2062), (4, Fr(17277, 4)), (Fr(9, 2), 8666),
        (5, Fr(33439, 2)), (Fr(11, 2), 31328), (6, 57313)]),
    "u": (Fr(1, 4), Fr(1, 4), [
        (0, 4), (Fr(1, 2), 80), (1, 1848), (Fr(3, 2), 42784), (2, 990100), (Fr(5, 2), 22911600),
        (3, 530190104), (Fr(7, 2), 12268965984), (4, 283912371144)]),
    "G": (0, 0, [
        (Fr(1, 2), -1), (1, 2), (Fr(3, 2), -4), (2, 4), (Fr(5, 2), -6), (3, 8), (Fr(7, 2), -8),
        (4, 8), (Fr(9, 2), -13), (5, 12), (Fr(11, 2), -12), (6, 16)]),
    "Utilde": (0, 0, [
        (0, 2), (1, 64), (2, 512), (3, 2816), (4, 12288), (5, 45952), (6, 153600), (7, 470528),
        (8, 1343488), (9, 3619136), (10, 9280512)]),
    "theta10": (0, Fr(1, 8), [(0, 2), (1, 2), (3, 2), (6, 2), (10, 2)]),
    "eta4_over_eta2sq": (0, 0, [(0, 1), (1, -4), (2, 4), (4, 4), (5, -8), (8, 4), (9, -4), (10, 8)]),
}

# y-developments in y = Utilde - 2: name -> [(power of y, coefficient)] through y^2
Y_PRINTED = {
    "q": [(1, Fr(1, 64)), (2, Fr(-1, 512))],
    "theta10_reduced": [(0, 2), (1, Fr(1, 32)), (2, Fr(-1, 256))],
    "eta2sq_over_eta4": [(0, 1), (1, Fr(1, 16)), (2, Fr(-5, 1024))],
    "blowup_gauss": [(0, Fr(1, 2)), (1, Fr(1, 8)), (2, Fr(-1, 256))],
}
