import pytest

from stellar.commutative import (braid_order, is_abelian, is_abelian_embedded,
                                 is_fully_commutative, is_fully_commutative_oracle)
from stellar.root_system import build
from stellar.weyl import enumerate_group, identity, longest_element


def test_braid_orders():
    assert braid_order(build("A", 3), 1, 2) == 3
    assert braid_order(build("A", 3), 1, 3) == 2
    assert braid_order(build("B", 2), 1, 2) == 4
    assert braid_order(build("G", 2), 1, 2) == 6


@pytest.mark.parametrize("key,fc,ab", [(("A", 3), 14, 14), (("B", 3), 24, 18), (("D", 4), 48, 48)])
def test_counts_and_agreement(key, fc, ab):
    rs = build(*key)
    els = list(enumerate_group(rs))
    pattern = [is_fully_commutative(w) for w in els]
    oracle = [is_fully_commutative_oracle(w) for w in els]
    assert pattern == oracle
    assert sum(pattern) == fc
    abelian = [is_abelian(w) for w in els]
    assert abelian == [is_abelian_embedded(w) for w in els]
    assert sum(abelian) == ab
    if rs.simply_laced:
        assert abelian == pattern


@pytest.mark.parametrize("key", [("A", 2), ("B", 2), ("G", 2), ("A", 4), ("F", 4)])
def test_trivial_cases(key):
    rs = build(*key)
    assert is_fully_commutative(identity(rs)) and is_abelian(identity(rs))
    assert not is_fully_commutative(longest_element(rs))
    assert not is_abelian(longest_element(rs))
