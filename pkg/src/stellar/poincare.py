"""
Poincare polynomials of lower Bruhat intervals, palindromy, Bruhat-graph
regularity, parabolic factorisation ``P_w = P_u * P^J_v`` when ``u = m(w, J)``,
and the leaf-peeling recursive factoriser.

Everything here works on :class:`~stellar.group.WeylGroup` tables, except
:func:`poincare_ends`, which computes only the outer coefficients and is meant
for groups too large to enumerate (E8).
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ConfigurationError, SelfCheckError
from .group import WeylGroup, weyl_group
from .root_system import RootSystem
from .weyl import WeylElement

__all__ = [
    "PoincarePolynomial", "poincare", "is_palindromic", "asymmetry_depth",
    "bruhat_graph_check", "graph_violations", "quotient_poincare",
    "chains_factorize", "recursive_factor", "factor_trace", "FactorStep",
    "poincare_ends", "truncated_asymmetry", "leaves",
]


@dataclass(frozen=True)
class PoincarePolynomial:
    """Coefficients low to high: ``coeffs[k] = #{v <= w : l(v) = k}``."""

    coeffs: tuple[int, ...]

    @classmethod
    def of(cls, coeffs: Iterable[int]) -> "PoincarePolynomial":
        c = [int(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        return cls(tuple(c))

    @classmethod
    def parse(cls, text: str) -> "PoincarePolynomial":
        text = text.strip()
        if text.startswith("{"):
            return cls.of(json.loads(text)["coeffs"])
        return cls.of(int(t) for t in text.split(","))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        return PoincarePolynomial.of(np.convolve(
            np.array(self.coeffs, dtype=object), np.array(other.coeffs, dtype=object)))

    def __call__(self, t):
        return sum(c * t ** k for k, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        return ",".join(map(str, self.coeffs))

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs)}

    def pretty(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            terms.append(str(c) if k == 0 else (mono if c == 1 else f"{c}{mono}"))
        return " + ".join(terms) or "0"


ONE = PoincarePolynomial((1,))


def is_palindromic(p: PoincarePolynomial) -> bool:
    return p.coeffs == p.coeffs[::-1]


def asymmetry_depth(p: PoincarePolynomial) -> int | None:
    """Least ``k >= 1`` with ``coeffs[k] != coeffs[deg - k]``; None if palindromic."""
    c, d = p.coeffs, p.degree
    for k in range(1, d // 2 + 1):
        if c[k] != c[d - k]:
            return k
    return None


def _group(w: WeylElement, cap: int | None) -> WeylGroup:
    return weyl_group(w.system) if cap is None else weyl_group(w.system, cap)


def poincare(w: WeylElement, cap: int | None = None) -> PoincarePolynomial:
    G = _group(w, cap)
    return PoincarePolynomial.of(G.poincare_coeffs(G.index(w)))


# -- Bruhat graph ---------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _ascent_mask(G: WeylGroup) -> np.ndarray:
    L = G.left_reflection
    return G.lengths[L] > G.lengths[None, :]


def _violators(G: WeylGroup, w: int) -> np.ndarray:
    m = G.ideal[w]
    L = G.left_reflection
    up = (m[L] & _ascent_mask(G)).sum(axis=0)
    return np.flatnonzero(m & (up > G.lengths[w] - G.lengths))


def graph_violations(G: WeylGroup) -> np.ndarray:
    """For each element, the first violating vertex of its Bruhat graph or -1."""
    out = np.full(G.size, -1, dtype=np.int64)
    for w in range(G.size):
        bad = _violators(G, w)
        if len(bad):
            out[w] = bad[0]
    return out


def bruhat_graph_check(w: WeylElement, cap: int | None = None) -> WeylElement | None:
    """A vertex ``x < w`` of degree above ``l(w)`` in the Bruhat graph, if any.

    ``deg(x) = l(x) + #{alpha > 0 : x < s_alpha x <= w}``; the graph is regular
    exactly when no such ``x`` exists.
    """
    G = _group(w, cap)
    bad = _violators(G, G.index(w))
    return G[int(bad[0])] if len(bad) else None


# -- parabolic pieces -----------------------------------------------------

def _support_masks(G: WeylGroup) -> np.ndarray:
    cached = getattr(G, "_support", None)
    if cached is None:
        sup = np.zeros(G.size, dtype=np.int64)
        for w in range(1, G.size):
            for s in range(G.system.rank):
                ws = G.right[s, w]
                if G.lengths[ws] < G.lengths[w]:
                    sup[w] = sup[ws] | (1 << s)
                    break
        G._support = cached = sup
    return cached


def _jmask(J: Iterable[int]) -> int:
    return sum(1 << (a - 1) for a in set(J))


def _quotient_mask(G: WeylGroup, J: Iterable[int]) -> np.ndarray:
    """Elements with no left descent in J (minimal in their ``W_J`` coset)."""
    keep = np.ones(G.size, dtype=bool)
    for a in set(J):
        keep &= G.lengths[G.left[a - 1]] > G.lengths
    return keep


def _max_below(G: WeylGroup, w: int, J: Iterable[int]) -> int:
    jm = _jmask(J)
    cand = np.flatnonzero(G.ideal[w] & ((_support_masks(G) & ~jm) == 0))
    top = int(cand[np.argmax(G.lengths[cand])])
    if not G.ideal[top, cand].all():
        raise SelfCheckError("W_J has no unique maximal element below w")
    return top


def _decompose(G: WeylGroup, w: int, J: Iterable[int]) -> tuple[int, int]:
    J = sorted(set(J))
    u, v = 0, w
    while True:
        for a in J:
            sv = G.left[a - 1, v]
            if G.lengths[sv] < G.lengths[v]:
                v = int(sv)
                u = int(G.right[a - 1, u])
                break
        else:
            return u, v


def _quotient_poly(G: WeylGroup, v: int, J: Iterable[int]) -> PoincarePolynomial:
    sel = G.ideal[v] & _quotient_mask(G, J)
    return PoincarePolynomial.of(np.bincount(G.lengths[sel], minlength=int(G.lengths[v]) + 1))


def quotient_poincare(v: WeylElement, J: Iterable[int],
                      cap: int | None = None) -> PoincarePolynomial:
    """``sum t^l(z)`` over ``z <= v`` minimal in their ``W_J`` coset."""
    G = _group(v, cap)
    i = G.index(v)
    if not _quotient_mask(G, J)[i]:
        raise ConfigurationError(f"{v} is not a minimal coset representative")
    return _quotient_poly(G, i, J)


def _chains(G: WeylGroup, w: int, J: Iterable[int]):
    u, v = _decompose(G, w, J)
    if u != _max_below(G, w, J):
        return None
    pu = PoincarePolynomial.of(G.poincare_coeffs(u))
    pv = _quotient_poly(G, v, J)
    if pu * pv != PoincarePolynomial.of(G.poincare_coeffs(w)):
        raise SelfCheckError("parabolic factorisation does not multiply out")
    return u, v, pu, pv


def chains_factorize(w: WeylElement, J: Iterable[int], cap: int | None = None
                     ) -> tuple[PoincarePolynomial, PoincarePolynomial] | None:
    """``(P_u, P^J_v)`` when ``w = u v`` has ``u = m(w, J)``, else None.

    The product is checked against ``P_w`` before returning.
    """
    G = _group(w, cap)
    out = _chains(G, G.index(w), J)
    return None if out is None else (out[2], out[3])


class FactorStep(NamedTuple):
    removed_node: int
    inverted: bool
    factor: PoincarePolynomial


def leaves(rs: RootSystem, nodes: Iterable[int]) -> list[int]:
    """Nodes of the induced Dynkin subdiagram with at most one neighbour."""
    S = set(nodes)
    return sorted(a for a in S if sum(1 for b in rs.neighbours(a) if b in S) <= 1)


def _factor(G: WeylGroup, w: int, S: frozenset, memo: dict) -> list[FactorStep] | None:
    key = (w, S)
    if key in memo:
        return memo[key]
    memo[key] = None
    if w == 0:
        memo[key] = []
        return []
    for leaf in leaves(G.system, S):
        J = S - {leaf}
        for inverted, x in ((False, w), (True, int(G.inverse[w]))):
            out = _chains(G, x, J)
            if out is None:
                continue
            u, _, _, pv = out
            if not is_palindromic(pv):
                continue
            rest = _factor(G, u, frozenset(J), memo)
            if rest is not None:
                steps = [FactorStep(leaf, inverted, pv)] if pv != ONE else []
                memo[key] = steps + rest
                return memo[key]
    return None


def factor_trace(w: WeylElement, cap: int | None = None) -> list[FactorStep] | None:
    """Leaf-peeling factorisation with the node removed and w/w^-1 at each step."""
    G = _group(w, cap)
    memo = getattr(G, "_factor_memo", None)
    if memo is None:
        G._factor_memo = memo = {}
    full = frozenset(range(1, G.system.rank + 1))
    return _factor(G, G.index(w), full, memo)


def recursive_factor(w: WeylElement, cap: int | None = None) -> list[PoincarePolynomial] | None:
    """Palindromic factors of ``P_w`` by peeling one Dynkin leaf at a time.

    At each level the leaves are tried in node order, ``w`` before ``w^-1``;
    the first branch that factors completely wins.  None if no branch works.
    """
    steps = factor_trace(w, cap)
    return None if steps is None else [s.factor for s in steps]


# -- outer coefficients without enumerating W ------------------------------

class _Walker:
    """Batch Bruhat tests and covers on raw action tables (numpy)."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.n = rs.num_positive
        self.refl = np.array([rs.reflection_perm(b) for b in range(self.n)])
        self.simple = [np.array(rs.simple_perm(a)) for a in range(1, rs.rank + 1)]

    def lengths(self, X: np.ndarray) -> np.ndarray:
        return (X[:, :self.n] >= self.n).sum(axis=1)

    def right_neighbours(self, x: np.ndarray) -> np.ndarray:
        """All ``x s_beta`` for positive ``beta`` as rows."""
        return x[self.refl]

    def leq_batch(self, X: np.ndarray, w: WeylElement) -> np.ndarray:
        X = X.copy()
        word = w.reduced_word()
        idx = self.rs.simple_index
        for a in reversed(word):
            desc = X[:, idx[a - 1]] >= self.n
            if desc.any():
                X[desc] = X[desc][:, self.simple[a - 1]]
        return self.lengths(X) == 0


def _unique_rows(X: np.ndarray) -> np.ndarray:
    if len(X) == 0:
        return X
    return np.unique(X, axis=0)


@functools.lru_cache(maxsize=None)
def _walker(rs: RootSystem) -> _Walker:
    return _Walker(rs)


def poincare_ends(w: WeylElement, depth: int) -> tuple[list[int], list[int]]:
    """``([c_0..c_depth], [c_l, c_(l-1), .., c_(l-depth)])`` of ``P_w``.

    Low levels grow upward from the identity along Bruhat covers inside
    ``[e, w]``; high levels descend from ``w`` along lower covers.
    """
    low, high = [], []
    for k, (lo, hi) in enumerate(_levels(w)):
        if k > depth:
            break
        low.append(lo)
        high.append(hi)
    return low, high


def _levels(w: WeylElement):
    walker = _walker(w.system)
    lw = w.length
    up = np.array([list(range(w.system.num_roots))])
    down = np.array([w.perm])
    k = 0
    while True:
        yield len(up), len(down)
        k += 1
        if k > lw:
            return
        cand = _unique_rows(np.concatenate([walker.right_neighbours(x) for x in up]))
        cand = cand[walker.lengths(cand) == k]
        up = cand[walker.leq_batch(cand, w)] if len(cand) else cand
        cand = _unique_rows(np.concatenate([walker.right_neighbours(x) for x in down]))
        down = cand[walker.lengths(cand) == lw - k]


def truncated_asymmetry(w: WeylElement, depth: int) -> int | None:
    """Least ``k <= depth`` where ``c_k != c_(l-k)``; None if none found.

    Stops at the first asymmetry, so the common case (``k = 1``) is cheap.
    """
    lw = w.length
    for k, (lo, hi) in enumerate(_levels(w)):
        if k == 0:
            continue
        if k > depth or 2 * k > lw:
            return None
        if lo != hi:
            return k
    return None

