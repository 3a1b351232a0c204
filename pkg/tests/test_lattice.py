import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bplusone.exactnum import rat
from bplusone.lattice import (
    AmbiguousChamber,
    LatticeError,
    basic_classes,
    format_class,
    is_cusp_class,
    make_surface,
    max_order,
    multiplicity_notation,
    parse_class,
    parse_surface,
    short_vectors,
    wall_enum,
    wall_enum_box,
)


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=12))
def test_class_syntax_round_trip(v):
    v = tuple(v)
    assert parse_class(format_class(v)) == v


def test_class_syntax_examples():
    assert parse_class("4,2x2,1x8") == (4, 2, 2) + (1,) * 8
    assert parse_class("1,0x3", 6) == (1, 0, 0, 0, 0, 0)
    assert multiplicity_notation((5, 3, 3, 1, 1)) == "(5, 3^2, 1^2)"
    with pytest.raises(LatticeError):
        parse_class("1x5", 3)


def test_surface_parsing(tmp_path):
    S = parse_surface("p2blow:3")
    assert S.rank == 4 and S.sigma == -2
    assert parse_surface("p1xp1").sigma == 0
    gram = tmp_path / "gram.txt"
    gram.write_text("0 1\n1 0\n")
    assert parse_surface(f"custom:{gram}").rank == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("2 0\n0 -1\n")
    with pytest.raises(LatticeError):
        parse_surface(f"custom:{bad}")


@settings(max_examples=30, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(-1, 1),
    st.integers(1, 4),
    st.tuples(st.fractions(-2, 2, max_denominator=3), st.fractions(-2, 2, max_denominator=3)),
    st.integers(0, 12),
)
def test_short_vectors_match_brute_force(a, b, c, center, bound):
    if a * c - b * b <= 0:
        return
    G = [[a, b], [b, c]]
    got = sorted(short_vectors(G, [rat(t) for t in center], bound))
    want = []
    for k in itertools.product(range(-10, 11), repeat=2):
        d = [k[0] - center[0], k[1] - center[1]]
        if a * d[0] ** 2 + 2 * b * d[0] * d[1] + c * d[1] ** 2 <= bound:
            want.append(k)
    assert got == sorted(want)


def test_cusp_classes():
    S = make_surface("p2blow", 9)
    assert is_cusp_class(S, (3,) + (1,) * 9)
    assert not is_cusp_class(S, (6,) + (2,) * 9)
    assert not is_cusp_class(S, (3,) + (1,) * 8 + (0,))


@pytest.mark.parametrize(
    "F, N",
    [((4, 2, 2) + (1,) * 8, 10), ((4, 2) + (1,) * 12, 13), ((5,) + (2,) * 5 + (1,) * 5, 10), ((5, 3) + (1,) * 16, 17)],
)
def test_pole_set_is_closed_under_reflection(F, N):
    bc = basic_classes(make_surface("p2blow", N), F)
    B_F = set(bc.B_F)
    assert {tuple(2 * f - w for f, w in zip(F, W)) for W in B_F} == B_F
    assert all(all(t % 2 for t in W) for W in bc.B)


def test_example_seven_lists():
    N, F = 16, (4,) + (1,) * 16
    unit = [tuple(1 if j == i else 0 for j in range(N + 1)) for i in range(N + 1)]
    W1 = (3,) + (1,) * 16

    def comb(*terms):
        return tuple(sum(c * v[k] for c, v in terms) for k in range(N + 1))

    idx = range(1, 17)
    W1i = {comb((1, W1), (-2, unit[i])) for i in idx}
    W1ij = {comb((1, W1), (-2, unit[i]), (-2, unit[j])) for i in idx for j in idx if i < j}
    W2ij = {comb((1, W1), (2, unit[0]), (2, unit[i]), (2, unit[j])) for i in idx for j in idx if i < j}
    bc = basic_classes(make_surface("p2blow", N), F)
    assert set(bc.B_F) == W1ij | W2ij
    assert {tuple(-t for t in W) for W in bc.B_I} == {W1} | W1i
    assert bc.k == 1


@pytest.mark.parametrize(
    "text, order",
    [
        ("3,1x9", 1), ("4,1x16", 1), ("4,2,1x12", 1), ("5,3x2,1x7", 1), ("5,2x5,1x5", 1), ("6,3x3,1x9", 1),
        ("5,3,1x16", 2), ("5,2x2,1x17", 2), ("6,4,1x20", 2), ("5,2,1x21", 2),
        ("5,1x25", 3), ("6,3,1x27", 3), ("6,2x3,1x24", 3),
    ],
)
def test_order_classification_sample(text, order):
    F = parse_class(text)
    assert max_order(make_surface("p2blow", len(F) - 1), F) == order


@pytest.mark.parametrize("F", [(2, 1, 1, 1, 1, 0, 0, 0, 0), (3, 2, 1, 1, 1, 1, 1, 0, 0), (3, 2, 2, 1, 0, 0, 0, 0, 0)])
def test_no_basic_classes_below_nine_points(F):
    assert max_order(make_surface("p2blow", 8), F) == 0


def test_class_counts_against_combinatorial_count():
    # search box |w0| <= 15, |w_i| <= 9 for the oracle; both counts are of W.F < 0 < W.G classes
    counts = basic_classes(make_surface("p2blow", 16), (4,) + (1,) * 16, explicit=False)
    assert counts.get(("B_I", 1), 0) == oracles.count_wf_negative_classes(4, 16, 1, 15, 9)[0]
    counts = basic_classes(make_surface("p2blow", 25), (5,) + (1,) * 25, explicit=False)
    for order in (1, 2):
        want, _, _ = oracles.count_wf_negative_classes(5, 25, order, 15, 9)
        assert counts.get(("B_I", order), 0) == want


def test_family_outside_the_printed_order_three_list():
    S = make_surface("p2blow", 25)
    F, G = (5,) + (1,) * 25, S.default_G(1)
    for i in range(1, 26):
        W = tuple(15 if k == 0 else (5 if k == i else 3) for k in range(26))
        assert (S.square(W) - S.sigma) / 8 == 1
        assert S.inter(W, F) < 0 < S.inter(W, G)


def test_wall_enumeration_matches_box():
    S = make_surface("p2blow", 2)
    H1, H2 = (3, rat(27, 11), rat(1, 7)), (3, rat(1, 13), rat(26, 11))
    total = 0
    for C in [(1, 0, 0), (0, 1, 1), (1, 1, 0), (0, 0, 0)]:
        for d in range(9):
            got = wall_enum(S, C, d, H1, H2)
            assert got == wall_enum_box(S, C, d, H1, H2, 8)
            assert wall_enum(S, C, d, H1, H1) == []
            total += len(got)
    assert total > 20


def test_wall_enumeration_rejects_bad_period_points():
    S = make_surface("p2blow", 1)
    with pytest.raises(LatticeError):
        wall_enum(S, (1, 0), 0, (0, 1), (2, 1))
    with pytest.raises(AmbiguousChamber):
        wall_enum(S, (1, 0), 0, (1, 0), (rat(4, 3), rat(-2, 3)))
