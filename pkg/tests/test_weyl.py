import pytest
from hypothesis import given, strategies as st

from stellar.errors import CapExceeded, ConfigurationError, NotAnInversionSet
from stellar.root_system import build
from stellar.weyl import (bits_to_list, bruhat_leq, element_from_inversion_set, enumerate_group,
                          from_one_line, from_word, identity, inverse, inversion_set,
                          is_biconvex, longest_element, max_parabolic_below, min_coset_reps,
                          multiply, order_of, parabolic_decompose, reflection,
                          simple_reflection, to_one_line)

from conftest import SMALL_TYPES


def words(rank, max_len=12):
    return st.lists(st.integers(1, rank), max_size=max_len)


def test_from_word_examples():
    a3 = build("A", 3)
    assert from_word(a3, [2, 1, 3, 2]).length == 4
    assert from_word(a3, []).is_identity()
    assert from_word(build("B", 2), [2, 1, 2, 2, 1, 2]).is_identity()
    with pytest.raises(ConfigurationError):
        from_word(a3, [4])


def test_multiply_inverse_examples():
    a3 = build("A", 3)
    w = from_word(a3, [2, 1, 3, 2])
    assert multiply(w, identity(a3)) == w
    s1 = simple_reflection(a3, 1)
    assert multiply(s1, s1).is_identity()
    assert inverse(w) == from_word(a3, [2, 3, 1, 2])
    with pytest.raises(ConfigurationError):
        multiply(w, identity(build("B", 3)))


@pytest.mark.parametrize("key", SMALL_TYPES + [("F", 4)])
@given(data=st.data())
def test_group_axioms(key, data):
    rs = build(*key)
    x = from_word(rs, data.draw(words(rs.rank)))
    y = from_word(rs, data.draw(words(rs.rank)))
    z = from_word(rs, data.draw(words(rs.rank)))
    assert (x * y) * z == x * (y * z)
    assert (x * inverse(x)).is_identity()
    assert inverse(x).length == x.length
    assert (x * y).length <= x.length + y.length


@pytest.mark.parametrize("key", SMALL_TYPES)
@given(data=st.data())
def test_length_of_word(key, data):
    rs = build(*key)
    word = data.draw(words(rs.rank))
    w = from_word(rs, word)
    assert w.length <= len(word)
    red = w.reduced_word()
    assert len(red) == w.length and from_word(rs, red) == w


def test_inversion_set_examples():
    a3 = build("A", 3)
    for i in range(1, 4):
        assert bits_to_list(inversion_set(simple_reflection(a3, i))) == [a3.simple_index[i - 1]]
    assert inversion_set(longest_element(a3)) == (1 << a3.num_positive) - 1
    got = {tuple(a3.coefficients[i]) for i in bits_to_list(inversion_set(from_word(a3, [2, 1, 3, 2])))}
    assert got == {(0, 1, 0), (1, 1, 0), (0, 1, 1), (1, 1, 1)}


def _inversion_characterisations(w):
    rs = w.system
    n = rs.num_positive
    direct = {w.apply(rs.neg(i)) for i in range(n) if w.apply(rs.neg(i)) < n}
    by_reflection = {a for a in range(n) if (reflection(rs, a) * w).length < w.length}
    prefix = set()
    word = w.reduced_word()
    for k, a in enumerate(word):
        prefix.add(from_word(rs, word[:k]).apply(rs.simple_index[a - 1]))
    return direct, by_reflection, prefix


@pytest.mark.parametrize("key", SMALL_TYPES + [("F", 4), ("B", 4)])
def test_three_inversion_characterisations(key):
    rs = build(*key)
    for w in enumerate_group(rs):
        direct, by_reflection, prefix = _inversion_characterisations(w)
        bits = set(bits_to_list(inversion_set(w)))
        assert direct == by_reflection == prefix == bits


@pytest.mark.parametrize("key", SMALL_TYPES + [("F", 4), ("B", 4), ("D", 5)])
def test_biconvex_and_round_trip(key):
    rs = build(*key)
    seen = set()
    for w in enumerate_group(rs):
        bits = inversion_set(w)
        assert is_biconvex(rs, bits)
        assert element_from_inversion_set(rs, bits) == w
        seen.add(bits)
    assert len(seen) == order_of(rs)


@given(st.integers(0, (1 << 9) - 1))
def test_non_inversion_sets_rejected(bits):
    rs = build("B", 3)
    if is_biconvex(rs, bits):
        assert inversion_set(element_from_inversion_set(rs, bits)) == bits
    else:
        with pytest.raises(NotAnInversionSet):
            element_from_inversion_set(rs, bits)


def test_element_from_inversion_set_examples():
    b2 = build("B", 2)
    assert element_from_inversion_set(b2, 0).is_identity()
    assert element_from_inversion_set(b2, 0b1111) == longest_element(b2)
    bits = sum(1 << b2.from_coefficients(c) for c in ((0, 1), (1, 1), (1, 2)))
    assert element_from_inversion_set(b2, bits).reduced_word() == (2, 1, 2)


@pytest.mark.parametrize("key,size", [(("A", 3), 24), (("F", 4), 1152), (("D", 4), 192), (("G", 2), 12)])
def test_enumerate(key, size):
    els = list(enumerate_group(build(*key)))
    assert len(els) == size == len(set(els))
    lengths = [w.length for w in els]
    assert lengths == sorted(lengths)


def test_enumerate_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_group(build("E", 6), cap=1000))


@pytest.mark.parametrize("key,length", [(("B", 2), 4), (("G", 2), 6), (("A", 3), 6), (("E", 8), 120)])
def test_longest(key, length):
    rs = build(*key)
    wo = longest_element(rs)
    assert wo.length == length
    assert (wo * wo).is_identity()


def test_longest_a3_word():
    a3 = build("A", 3)
    assert longest_element(a3) == from_word(a3, [1, 2, 1, 3, 2, 1])


def _subword_leq(x, w):
    # brute-force subword criterion on one reduced word
    import itertools
    word = w.reduced_word()
    rs = w.system
    for r in range(len(word) + 1):
        for idx in itertools.combinations(range(len(word)), r):
            if from_word(rs, [word[i] for i in idx]) == x:
                return True
    return False


@pytest.mark.parametrize("key", [("A", 3), ("B", 3), ("G", 2)])
def test_bruhat_against_subwords(key):
    rs = build(*key)
    els = list(enumerate_group(rs))
    for w in els[:: max(1, len(els) // 12)]:
        for x in els:
            assert bruhat_leq(x, w) == _subword_leq(x, w)


@pytest.mark.parametrize("key", [("B", 2), ("A", 3), ("G", 2)])
def test_bruhat_partial_order(key):
    rs = build(*key)
    els = list(enumerate_group(rs))
    leq = {(x, w): bruhat_leq(x, w) for x in els for w in els}
    for x in els:
        assert leq[(identity(rs), x)] and leq[(x, x)]
        for w in els:
            if leq[(x, w)]:
                assert x.length <= w.length
                if leq[(w, x)]:
                    assert x == w
    for x in els:
        for y in els:
            if leq[(x, y)]:
                for z in els:
                    if leq[(y, z)]:
                        assert leq[(x, z)]
    wo = longest_element(rs)
    assert sum(leq[(x, wo)] for x in els) == len(els)


def test_bruhat_example():
    b2 = build("B", 2)
    assert bruhat_leq(simple_reflection(b2, 1), from_word(b2, [2, 1, 2]))


@pytest.mark.parametrize("key", [("A", 3), ("B", 3), ("D", 4)])
@given(data=st.data())
def test_parabolic_decomposition(key, data):
    rs = build(*key)
    w = from_word(rs, data.draw(words(rs.rank)))
    J = data.draw(st.sets(st.integers(1, rs.rank)))
    u, v = parabolic_decompose(w, J)
    assert u * v == w
    assert u.length + v.length == w.length
    assert u.support() <= J
    assert not any(v.has_left_descent(j) for j in J)


def test_parabolic_examples():
    a2 = build("A", 2)
    s1, s2 = simple_reflection(a2, 1), simple_reflection(a2, 2)
    assert parabolic_decompose(s1 * s2, {1}) == (s1, s2)
    assert parabolic_decompose(s1, {1}) == (s1, identity(a2))
    assert parabolic_decompose(s2 * s1, {1}) == (identity(a2), s2 * s1)


def test_min_coset_reps():
    a2 = build("A", 2)
    assert len(min_coset_reps(a2, {1})) == 3
    assert len(min_coset_reps(a2, set())) == 6
    b3 = build("B", 3)
    reps = min_coset_reps(b3, {1, 2})
    assert len(reps) == 48 // 6
    assert all(not v.has_left_descent(j) for v in reps for j in (1, 2))


def test_e8_quotient():
    reps = min_coset_reps(build("E", 8), {2, 3, 4, 5, 6, 7, 8})
    assert len(reps) == 2160
    assert len(set(reps)) == 2160


def test_max_parabolic_below():
    a2 = build("A", 2)
    s1, s2 = simple_reflection(a2, 1), simple_reflection(a2, 2)
    assert max_parabolic_below(identity(a2), {1}).is_identity()
    assert max_parabolic_below(s2 * s1, {1}) == s1
    b3 = build("B", 3)
    assert max_parabolic_below(longest_element(b3), {2, 3}) == longest_element(b3, {2, 3})


@pytest.mark.parametrize("key", [("B", 3), ("C", 3), ("D", 4), ("A", 3)])
def test_one_line_round_trip(key):
    rs = build(*key)
    for w in enumerate_group(rs):
        assert from_one_line(rs, to_one_line(w)) == w


def test_one_line_invalid():
    with pytest.raises(ConfigurationError):
        from_one_line(build("D", 3), [-1, 2, 3])
    with pytest.raises(ConfigurationError):
        from_one_line(build("B", 3), [1, 1, 3])
