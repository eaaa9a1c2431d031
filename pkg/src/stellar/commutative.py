"""
Fully commutative and abelian elements.
"""

from __future__ import annotations

import functools

from .embeddings import _enumerate as _embeddings
from .errors import CapExceeded
from .root_system import RootSystem
from .subsystems import enumerate_subsystems, flatten
from .weyl import WeylElement, inversion_set

__all__ = ["braid_order", "is_fully_commutative", "is_fully_commutative_oracle",
           "is_abelian", "is_abelian_embedded"]


def braid_order(rs: RootSystem, i: int, j: int) -> int:
    """Order of ``s_i s_j`` (1-based nodes)."""
    if i == j:
        return 1
    p = int(rs.cartan[i - 1, j - 1] * rs.cartan[j - 1, i - 1])
    return {0: 2, 1: 3, 2: 4, 3: 6}[p]


@functools.lru_cache(maxsize=None)
def _rank_two(rs: RootSystem):
    return tuple(d for d in enumerate_subsystems(rs, 2, irreducible=True) if d.rank == 2)


def is_fully_commutative(w: WeylElement) -> bool:
    """No irreducible rank-2 subsystem flattens ``w`` to its longest element."""
    for delta in _rank_two(w.system):
        sigma = flatten(w, delta)
        if sigma.length == sigma.system.num_positive:
            return False
    return True


def _has_braid(word: tuple[int, ...], rs: RootSystem) -> bool:
    for start in range(len(word) - 1):
        a, b = word[start], word[start + 1]
        if a == b:
            continue
        m = braid_order(rs, a, b)
        if m < 3 or start + m > len(word):
            continue
        if all(word[start + t] == (a if t % 2 == 0 else b) for t in range(m)):
            return True
    return False


def is_fully_commutative_oracle(w: WeylElement, cap: int = 1_000_000) -> bool:
    """Explore the commutation class of one reduced word.

    The class is all of ``R(w)`` exactly when no braid move ever applies, so
    ``w`` is fully commutative iff no word in the class has a braid factor.
    """
    rs = w.system
    start = w.reduced_word()
    seen = {start}
    stack = [start]
    while stack:
        word = stack.pop()
        if _has_braid(word, rs):
            return False
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if a != b and braid_order(rs, a, b) == 2:
                nxt = word[:i] + (b, a) + word[i + 2:]
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise CapExceeded("commutation class too large")
                    stack.append(nxt)
    return True


def is_abelian(w: WeylElement) -> bool:
    """No ``alpha, beta, alpha + beta`` all in ``I(w)``."""
    rs = w.system
    bits = inversion_set(w)
    inv = [i for i in range(rs.num_positive) if bits >> i & 1]
    S = rs.sums
    for x in inv:
        for y in inv:
            s = S[x, y]
            if s >= 0 and bits >> int(s) & 1:
                return False
    return True


def is_abelian_embedded(w: WeylElement) -> bool:
    """No A2-embedding flattens ``w`` to the longest element of ``W(A2)``."""
    bits = inversion_set(w)
    for e in _embeddings(w.system, "A2"):
        if all(bits >> int(i) & 1 for i in e.roots_map):
            return False
    return True

