from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from bplusone.exactnum import rat
from bplusone.qseries import GRID, NumericZ, QSeries, TruncationError, bernoulli, units

small = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def power_series(draw_list, n: int) -> QSeries:
    return QSeries({k * GRID: rat(c) for k, c in enumerate(draw_list) if c}, n * GRID)


def as_list(s: QSeries, n: int) -> list:
    return [Fr(int(s[k].numerator), int(s[k].denominator)) if s[k] else Fr(0) for k in range(n)]


lists = st.lists(small, min_size=6, max_size=6)


@given(lists, lists)
def test_product_matches_convolution(a, b):
    n = 6
    got = as_list(power_series(a, n) * power_series(b, n), n)
    assert got == oracles.mul(a, b, n - 1)


@given(lists.filter(lambda v: v[0] != 0))
def test_inverse_matches_recursive_inverse(a):
    n = 6
    got = as_list(power_series(a, n).inverse(), n)
    assert got == oracles.inv(a, n - 1)


@given(st.lists(small, min_size=5, max_size=5))
def test_log_of_exp(a):
    s = power_series([Fr(0)] + a, 6)
    assert s.exp().log() == s


@given(st.lists(small, min_size=4, max_size=4).filter(lambda v: v[0] != 0))
def test_reversion_inverts_substitution(a):
    s = power_series([Fr(0)] + a, 5)
    assert s.substitute(s.revert()) == QSeries.monomial(1, 1, 5 * GRID)


def test_fractional_exponents_and_shift():
    s = QSeries.from_terms([(rat(-1, 2), 1), (rat(1, 8), 3)], rat(2))
    t = s.shift(rat(1, 2))
    assert t[0] == 1 and t[rat(5, 8)] == 3
    assert (s * s)[-1] == 1


def test_truncation_is_enforced():
    s = QSeries({0: rat(1)}, units(1))
    with pytest.raises(TruncationError):
        s[rat(3, 2)]
    assert (s + QSeries({0: rat(1)}, units(2))).trunc == units(1)


def test_qderiv_and_rescale():
    s = QSeries({GRID: rat(2), 3 * GRID: rat(5)}, 6 * GRID)
    d = s.qderiv()
    assert d[1] == 2 and d[3] == 15
    r = s.rescale(2)
    assert r[2] == 2 and r[6] == 5


def test_bernoulli_numbers():
    assert [bernoulli(n) for n in range(7)] == [1, rat(-1, 2), rat(1, 6), 0, rat(-1, 30), 0, rat(1, 42)]


@given(st.lists(small, min_size=5, max_size=5), st.lists(small, min_size=5, max_size=5))
def test_numeric_z_product(a, b):
    x = NumericZ({i: rat(c) for i, c in enumerate(a)}, 4)
    y = NumericZ({i: rat(c) for i, c in enumerate(b)}, 4)
    got = [(x * y)[n] for n in range(5)]
    assert got == oracles.mul(a, b, 4)


@given(st.dictionaries(st.integers(-12, 60), small, max_size=8))
def test_json_round_trip(terms):
    s = QSeries({k: rat(c) for k, c in terms.items()}, 96)
    assert QSeries.from_json(s.to_json()) == s
    z = NumericZ({k % 6: rat(c) for k, c in terms.items()}, 6)
    assert NumericZ.from_json(z.to_json()) == z
