import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bforge.errors import PcpSyntaxError, ShapeError
from bforge.pc import (
    Collector,
    PcpFile,
    consistency_check,
    make_presentation,
    parse_pcp,
    parse_presentation,
    print_pcp,
    print_presentation,
)


def heisenberg(q):
    return make_presentation("heis", ["x", "y", "z"], [q, q, q], None, {(1, 0): [(2, 1)]})


def case_ii(k):
    q = 3**k
    return make_presentation(
        "cii", ["x", "y", "z", "t", "w"], [q] * 5,
        None, {(1, 0): [(2, 1)], (2, 0): [(3, 1)], (2, 1): [(4, 1)]},
    )


def case_iii(k):
    q, s = 2**k, 2 ** (k - 1)
    return make_presentation(
        "ciii", ["x", "y", "z", "t", "w"], [q, q, s, s, s],
        None, {(1, 0): [(2, 1)], (2, 0): [(3, 1)], (2, 1): [(4, 1)]},
    )


# -- parsing ------------------------------------------------------------------

HEIS_TEXT = """\
pcgroup heis
gen x order 5
gen y order 5
gen z order 5
comm y x = z
"""


def test_parse_heisenberg():
    p = parse_presentation(HEIS_TEXT)
    assert p.names == ("x", "y", "z")
    assert p.orders == (5, 5, 5)
    assert p.comm_tails == {(1, 0): ((2, 1),)}


def test_parse_empty_generators_rejected():
    with pytest.raises(PcpSyntaxError):
        parse_presentation("pcgroup g\n")


def test_parse_comm_earlier_generator_rejected():
    text = "pcgroup g\ngen x order 5\ngen y order 5\ngen z order 5\ncomm z x = y\n"
    with pytest.raises(PcpSyntaxError):
        parse_presentation(text)


def test_parse_non_prime_power_order_rejected():
    with pytest.raises(PcpSyntaxError):
        parse_presentation("pcgroup g\ngen x order 6\n")
    with pytest.raises(ShapeError):
        make_presentation("g", ["x"], [12])


def test_syntax_error_carries_line_number():
    text = "pcgroup g\ngen x order 5\nbogus line here\n"
    with pytest.raises(PcpSyntaxError) as exc:
        parse_presentation(text)
    assert exc.value.line == 3


def test_parse_unknown_generator_in_comm():
    text = "pcgroup g\ngen x order 5\ngen y order 5\ncomm y q = 1\n"
    with pytest.raises(PcpSyntaxError):
        parse_presentation(text)


def test_parse_bad_power_clause():
    with pytest.raises(PcpSyntaxError):
        parse_presentation("pcgroup g\ngen x order 5 power\n")
    with pytest.raises(PcpSyntaxError):
        parse_presentation("pcgroup g\ngen x order 4 power x^2\n")  # tail not later


def test_parse_comments_and_blank_lines():
    text = "# header\npcgroup g\n\ngen x order 5  # five\ngen y order 5\ncomm y x = 1\n"
    p = parse_presentation(text)
    assert p.names == ("x", "y")
    assert p.comm_tails == {}


def test_roundtrip_byte_for_byte():
    for pres in (heisenberg(5), case_ii(1), case_iii(2)):
        text = print_presentation(pres)
        again = parse_presentation(text)
        assert again == pres
        assert print_presentation(again) == text


def test_roundtrip_with_stanzas():
    pf = parse_pcp(HEIS_TEXT)
    pf.family = "case-i"
    pf.params = {"p": 5, "k": 1}
    pf.distinguished = {"x": ((0, 1),), "y": ((1, 1),)}
    pf.theta = {"x": ((0, 4),), "y": ((1, 4),), "z": ((2, 1),)}
    text = print_pcp(pf)
    again = parse_pcp(text)
    assert print_pcp(again) == text
    assert again.params == pf.params
    assert again.theta == pf.theta


# -- collection ---------------------------------------------------------------


def test_collect_yx_is_xyz():
    coll = Collector(heisenberg(5))
    assert coll.collect([(1, 1), (0, 1)]) == (1, 1, 1)


def test_collect_commutator_power_identity_2group():
    # [y, x^i] = z^i t^C(i,2), reduced mod the relative orders
    coll = Collector(case_iii(2))
    x, y = coll.gen_vec(0), coll.gen_vec(1)
    i = 3
    got = coll.comm(y, coll.power(x, i))
    assert got == (0, 0, i % 2, comb(i, 2) % 2, 0)
    assert got == (0, 0, 1, 1, 0)  # z * t


def test_collect_xy_cubed_case_ii():
    # (xy)^3 = t w^2 when all relative orders are 3
    coll = Collector(case_ii(1))
    xy = coll.mul(coll.gen_vec(0), coll.gen_vec(1))
    assert coll.power(xy, 3) == (0, 0, 0, 1, 2)


def test_nontrivial_power_tail_chain():
    # g0^2 = g1, g1^2 = 1 presents C4
    pres = make_presentation("c4", ["a", "b"], [2, 2], {0: [(1, 1)]})
    coll = Collector(pres)
    a = coll.gen_vec(0)
    assert coll.power(a, 2) == (0, 1)
    assert coll.power(a, 4) == (0, 0)
    assert coll.inv(a) == (1, 1)  # a^-1 = a^3 = a * b


def test_deep_power_tail_chain_is_cyclic_16():
    # a^2 = b, b^2 = c, c^2 = d, d^2 = 1: every tail nontrivial, and
    # inversion walks the whole chain with negative exponents
    pres = make_presentation(
        "c16", ["a", "b", "c", "d"], [2, 2, 2, 2],
        {0: [(1, 1)], 1: [(2, 1)], 2: [(3, 1)]},
    )
    assert consistency_check(pres) is None
    coll = Collector(pres)
    a = coll.gen_vec(0)
    seen = set()
    x = coll.identity
    for n in range(16):
        assert x == coll.power(a, n)
        seen.add(x)
        x = coll.mul(x, a)
    assert x == coll.identity and len(seen) == 16
    for n in range(16):
        v = coll.power(a, n)
        assert coll.mul(v, coll.inv(v)) == coll.identity
        assert coll.power(a, -n) == coll.inv(v)


def test_multi_term_commutator_tail():
    # [y, x] = z t with everything of order 3: consistent, and collection
    # stays multiplicative
    pres = make_presentation(
        "zt", ["x", "y", "z", "t"], [3, 3, 3, 3], None, {(1, 0): [(2, 1), (3, 1)]}
    )
    assert consistency_check(pres) is None
    coll = Collector(pres)
    rng = random.Random(71)
    for _ in range(2000):
        u = tuple(rng.randrange(3) for _ in range(4))
        v = tuple(rng.randrange(3) for _ in range(4))
        w = tuple(rng.randrange(3) for _ in range(4))
        assert coll.mul(coll.mul(u, v), w) == coll.mul(u, coll.mul(v, w))
    y, x = coll.gen_vec(1), coll.gen_vec(0)
    assert coll.comm(y, x) == (0, 0, 1, 1)


def test_inverse_and_negative_exponents():
    coll = Collector(heisenberg(5))
    rng = random.Random(7)
    for _ in range(200):
        u = tuple(rng.randrange(5) for _ in range(3))
        assert coll.mul(u, coll.inv(u)) == coll.identity
        assert coll.power(u, -1) == coll.inv(u)


# -- consistency --------------------------------------------------------------


def test_consistency_paper_presentations_pass():
    for pres in (heisenberg(5), heisenberg(7), case_ii(1), case_ii(2), case_iii(2), case_iii(3)):
        assert consistency_check(pres) is None


def test_consistency_violation_reported():
    # z forced to order 2 under [y,x] = z with x, y of order 5: y x^5 collects
    # two different ways
    bad = make_presentation("bad", ["x", "y", "z"], [5, 5, 2], None, {(1, 0): [(2, 1)]})
    v = consistency_check(bad)
    assert v is not None
    assert v.lhs != v.rhs


def test_consistency_abelian_trivial_tails():
    pres = make_presentation("ab", ["a", "b", "c"], [4, 9, 25])
    assert consistency_check(pres) is None


# -- normal form uniqueness ---------------------------------------------------


def random_word(rng, ngens, orders, length):
    return [
        (g, rng.randrange(-2 * orders[g], 2 * orders[g] + 1))
        for g in (rng.randrange(ngens) for _ in range(length))
    ]


@pytest.mark.parametrize("pres_fn", [lambda: heisenberg(5), lambda: case_ii(1), lambda: case_iii(2)])
def test_collect_is_multiplicative_bulk(pres_fn):
    # collect(u) * collect(v) = collect(uv) on 10^5 random word pairs
    pres = pres_fn()
    coll = Collector(pres)
    rng = random.Random(12345)
    n, orders = pres.ngens, pres.orders
    for _ in range(100_000):
        u = random_word(rng, n, orders, rng.randrange(1, 4))
        v = random_word(rng, n, orders, rng.randrange(1, 4))
        assert coll.mul(coll.collect(u), coll.collect(v)) == coll.collect(u + v)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_collect_is_multiplicative_hypothesis(data):
    pres = case_iii(2)
    coll = Collector(pres)
    token = st.tuples(st.integers(0, pres.ngens - 1), st.integers(-8, 8))
    u = data.draw(st.lists(token, max_size=6))
    v = data.draw(st.lists(token, max_size=6))
    assert coll.mul(coll.collect(u), coll.collect(v)) == coll.collect(u + v)


def test_power_by_repeated_squaring_matches_iteration():
    coll = Collector(case_ii(1))
    xy = coll.mul(coll.gen_vec(0), coll.gen_vec(1))
    acc = coll.identity
    for n in range(0, 30):
        assert coll.power(xy, n) == acc
        acc = coll.mul(acc, xy)
