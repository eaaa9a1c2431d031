import numpy as np
import pytest

from stellar.criteria import palindromic_vector
from stellar.errors import ConfigurationError
from stellar.group import weyl_group
from stellar.poincare import (ONE, PoincarePolynomial, asymmetry_depth, bruhat_graph_check,
                              chains_factorize, factor_trace, graph_violations, is_palindromic,
                              poincare, poincare_ends, quotient_poincare, recursive_factor,
                              truncated_asymmetry)
from stellar.root_system import build
from stellar.weyl import (enumerate_group, from_word, identity, longest_element,
                          max_parabolic_below, parabolic_decompose, simple_reflection)


def P(*c):
    return PoincarePolynomial.of(c)


def test_polynomial_forms():
    p = PoincarePolynomial.parse("1,2,2,1")
    assert p == P(1, 2, 2, 1) == PoincarePolynomial.parse('{"coeffs": [1, 2, 2, 1]}')
    assert str(p) == "1,2,2,1"
    assert p.to_json() == {"coeffs": [1, 2, 2, 1]}
    assert p.degree == 3 and p(1) == 6
    assert P(1, 1) * P(1, 1, 1) == P(1, 2, 2, 1)


def test_poincare_examples():
    b2 = build("B", 2)
    assert poincare(simple_reflection(b2, 1)) == P(1, 1)
    assert poincare(from_word(b2, [2, 1, 2])) == P(1, 2, 2, 1)
    assert poincare(longest_element(b2))(1) == 8
    assert poincare(longest_element(build("F", 4)))(1) == 1152


def test_palindromy_examples():
    assert is_palindromic(P(1, 2, 2, 1)) and is_palindromic(P(1, 1))
    p = poincare(from_word(build("A", 3), [2, 1, 3, 2]))
    assert p == P(1, 3, 5, 4, 1)
    assert not is_palindromic(p) and asymmetry_depth(p) == 1
    assert asymmetry_depth(P(1, 2, 1)) is None


@pytest.mark.parametrize("key", [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4)])
def test_poincare_invariants(key):
    rs = build(*key)
    G = weyl_group(rs)
    for i in range(0, G.size, max(1, G.size // 200)):
        w = G[i]
        p = poincare(w)
        assert p.coeffs[0] == 1 and p.coeffs[-1] == 1 and p.degree == w.length
        if w.length:
            assert p.coeffs[1] == len(w.support())
        assert p(1) == int(G.ideal[i].sum())


@pytest.mark.parametrize("key", [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("B", 4), ("F", 4)])
def test_carrell_peterson(key):
    G = weyl_group(build(*key))
    assert np.array_equal(graph_violations(G) < 0, palindromic_vector(G))


def test_bruhat_graph_examples():
    a3 = build("A", 3)
    assert bruhat_graph_check(simple_reflection(a3, 2)) is None
    assert bruhat_graph_check(longest_element(a3)) is None
    w = from_word(a3, [2, 1, 3, 2])
    x = bruhat_graph_check(w)
    assert x is not None and x.length < w.length


def test_quotient_poincare():
    a2 = build("A", 2)
    assert quotient_poincare(identity(a2), {1}) == ONE
    assert quotient_poincare(from_word(a2, [2, 1]), {1}) == P(1, 1, 1)
    assert quotient_poincare(simple_reflection(a2, 2), {1}) == P(1, 1)
    with pytest.raises(ConfigurationError):
        quotient_poincare(simple_reflection(a2, 1), {1})


def test_chains_examples():
    b3 = build("B", 3)
    w = from_word(b3, [2, 3])
    pu, pv = chains_factorize(w, {2, 3})
    assert pu == poincare(w) and pv == ONE
    wo = longest_element(b3)
    for J in ({1}, {2}, {1, 3}, {2, 3}):
        pu, pv = chains_factorize(wo, J)
        assert pu * pv == poincare(wo)
    b2 = build("B", 2)
    w = from_word(b2, [2, 1, 2])
    u, _ = parabolic_decompose(w, {2})
    got = chains_factorize(w, {2})
    if u == max_parabolic_below(w, {2}):
        assert got[0] * got[1] == poincare(w)
    else:
        assert got is None


@pytest.mark.parametrize("key", [("A", 3), ("B", 3), ("G", 2)])
def test_chains_soundness(key):
    rs = build(*key)
    subsets = [set(), {1}, {2}, set(range(1, rs.rank))]
    for w in enumerate_group(rs):
        for J in subsets:
            got = chains_factorize(w, J)
            u, _ = parabolic_decompose(w, J)
            assert (got is not None) == (u == max_parabolic_below(w, J))
            if got is not None:
                assert got[0] * got[1] == poincare(w)


@pytest.mark.parametrize("key", [("A", 3), ("B", 3), ("D", 4)])
def test_parabolic_part_singular_propagates(key):
    rs = build(*key)
    for w in enumerate_group(rs):
        for J in ({1, 2}, {2, 3}, set(range(2, rs.rank + 1))):
            u, _ = parabolic_decompose(w, J)
            if not is_palindromic(poincare(u)):
                assert not is_palindromic(poincare(w))


def test_recursive_factor_examples():
    a3 = build("A", 3)
    assert recursive_factor(identity(a3)) == []
    wo = longest_element(a3)
    factors = recursive_factor(wo)
    prod = ONE
    for f in factors:
        assert is_palindromic(f)
        prod = prod * f
    assert prod == poincare(wo)
    assert recursive_factor(from_word(a3, [2, 1, 3, 2])) is None
    steps = factor_trace(wo)
    assert all(isinstance(s.removed_node, int) for s in steps)


def test_poincare_ends_small_group():
    for w in enumerate_group(build("B", 3)):
        p = poincare(w)
        lo, hi = poincare_ends(w, 3)
        k = min(3, p.degree)
        assert lo[:k + 1] == list(p.coeffs[:k + 1])
        assert hi[:k + 1] == list(p.coeffs[::-1][:k + 1])
        d = asymmetry_depth(p)
        got = truncated_asymmetry(w, 3)
        assert got == (d if d is not None and d <= 3 else None)


def test_truncated_asymmetry_e8():
    w = from_word(build("E", 8), [4, 3, 5, 4])
    assert truncated_asymmetry(w, 2) == 1
