"""
Signed-permutation patterns for the classical types.

An element of ``W(A_{n-1})``, ``W(B_n)``, ``W(C_n)`` or ``W(D_n)`` is written
in one-line notation ``w_1 .. w_n`` with ``w(e_j) = sign(w_j) e_|w_j|``.  The
flattening of a subsequence keeps signs and the relative order of absolute
values.  A subsequence pattern is forbidden when the inversion set it induces
on the rank ``k`` system spanned by its coordinates is that of a singular
element there; those tables are computed from the oracles.
"""

from __future__ import annotations

import functools
import itertools
from typing import Sequence

import numpy as np

from .criteria import palindromic_vector, smooth_vector
from .errors import ConfigurationError
from .group import weyl_group
from .root_system import RootSystem, classical_system
from .weyl import element_from_inversion_set

__all__ = ["classical_flatten", "classical_pattern_test", "one_line_inversions",
           "signed_permutations", "classical_count", "pattern_table", "validate_one_line"]


def classical_flatten(seq: Sequence[float]) -> tuple[int, ...]:
    """Signed permutation with the signs of ``seq`` and the order of ``|seq|``."""
    mags = [abs(x) for x in seq]
    if any(m == 0 for m in mags) or len(set(mags)) != len(mags):
        raise ConfigurationError("classical flattening needs distinct nonzero entries")
    rank = {m: i + 1 for i, m in enumerate(sorted(mags))}
    return tuple(rank[abs(x)] if x > 0 else -rank[abs(x)] for x in seq)


def validate_one_line(seq: Sequence[int], letter: str) -> tuple[int, ...]:
    seq = tuple(int(x) for x in seq)
    n = len(seq)
    if sorted(abs(x) for x in seq) != list(range(1, n + 1)):
        raise ConfigurationError(f"{seq} is not a signed permutation of 1..{n}")
    negatives = sum(1 for x in seq if x < 0)
    if letter == "A" and negatives:
        raise ConfigurationError("type A one-line notation has no negative entries")
    if letter == "D" and negatives % 2:
        raise ConfigurationError("type D one-line notation needs an even number of signs")
    if letter not in "ABCD":
        raise ConfigurationError(f"no one-line notation for type {letter}")
    return seq


def _system(letter: str, k: int) -> RootSystem | None:
    """Rank ``k`` system on ``e_1..e_k``; None when every element is smooth."""
    if letter == "A":
        return classical_system("A", k - 1) if k >= 2 else None
    if k == 1 or (letter == "D" and k == 2):
        return None
    return classical_system(letter, k)


def one_line_inversions(seq: Sequence[int], rs: RootSystem) -> int:
    """Inversion bitmask of the signed permutation on ``rs`` (coordinates ``e_1..e_k``)."""
    n = rs.num_positive
    bits = 0
    for i in range(n):
        g = rs.roots[i]
        # (w^-1 g)_j = sign(w_j) g_|w_j|
        img = tuple((1 if x > 0 else -1) * g[abs(x) - 1] for x in seq)
        j = rs.index_of(img)
        if j < 0:
            raise ConfigurationError("one-line element does not preserve the root system")
        if j >= n:
            bits |= 1 << i
    return bits


def signed_permutations(k: int, letter: str):
    for perm in itertools.permutations(range(1, k + 1)):
        if letter == "A":
            yield perm
            continue
        for signs in itertools.product((1, -1), repeat=k):
            yield tuple(s * p for s, p in zip(signs, perm))


def _code(seq: Sequence[int]) -> int:
    k = len(seq)
    order = sorted(range(k), key=lambda i: abs(seq[i]))
    ranks = [0] * k
    for r, i in enumerate(order):
        ranks[i] = r
    code = sum(r * k ** i for i, r in enumerate(ranks))
    signs = sum(1 << i for i, x in enumerate(seq) if x < 0)
    return signs * k ** k + code


@functools.lru_cache(maxsize=None)
def pattern_table(letter: str, k: int, rational: bool = False) -> np.ndarray:
    """``table[code]`` is True when the flattened pattern is forbidden.

    Every signed pattern of length ``k`` is checked, including sign patterns
    outside ``W(D_k)``: those still induce an inversion set of ``D_k``.
    """
    table = np.zeros((2 ** k) * k ** k, dtype=bool)
    rs = _system(letter, k)
    if rs is None:
        return table
    G = weyl_group(rs)
    good = palindromic_vector(G) if rational else smooth_vector(G)
    for b in signed_permutations(k, "A" if letter == "A" else "B"):
        sigma = element_from_inversion_set(rs, one_line_inversions(b, rs))
        table[_code(b)] = not good[G.index(sigma)]
    return table


def classical_pattern_test(one_line: Sequence[int], letter: str, rational: bool = False) -> bool:
    """True when every length-``min(4, n)`` subsequence flattens to a smooth pattern."""
    seq = validate_one_line(one_line, letter)
    k = min(4, len(seq))
    table = pattern_table(letter, k, rational)
    for idx in itertools.combinations(range(len(seq)), k):
        if table[_code([seq[i] for i in idx])]:
            return False
    return True


def _all_elements(letter: str, n: int) -> np.ndarray:
    perms = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int8)
    if letter == "A":
        return perms
    signs = np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int8)
    if letter == "D":
        signs = signs[(signs < 0).sum(axis=1) % 2 == 0]
    return (perms[:, None, :] * signs[None, :, :]).reshape(-1, n)


def smooth_mask(letter: str, n: int, rational: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """All one-line elements of the group and a mask of the smooth ones."""
    W = _all_elements(letter, n)
    k = min(4, n)
    table = pattern_table(letter, k, rational)
    ok = np.ones(len(W), dtype=bool)
    A = np.abs(W)
    for idx in itertools.combinations(range(n), k):
        sub = A[:, idx]
        ranks = np.argsort(np.argsort(sub, axis=1), axis=1)
        code = (ranks * (k ** np.arange(k))).sum(axis=1)
        signs = ((W[:, idx] < 0) * (1 << np.arange(k))).sum(axis=1)
        ok &= ~table[signs * k ** k + code]
    return W, ok


def classical_count(letter: str, n: int, rational: bool = False) -> int:
    """Number of (rationally) smooth elements by the classical pattern test."""
    return int(smooth_mask(letter, n, rational)[1].sum())
