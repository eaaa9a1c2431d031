"""
Smoothness oracles and pattern classifiers.

Oracles
    * smoothness: Kumar's nil-Hecke values ``K_{w_o, v}`` evaluated at the
      height functional, compared with the product of ``alpha(r)`` over
      ``Z(w_o, v) = {alpha > 0 : v not <= s_alpha w_o}`` for ``v = w w_o``,
      after the degree test ``#{alpha > 0 : s_alpha <= w} = l(w)``;
    * rational smoothness: palindromy of the Poincare polynomial.

Classifiers
    * stellar-subsystem patterns, with forbidden sets bootstrapped from the
      oracles on the six stellar groups and cross-checked against hard-coded
      counts and word lists;
    * embedded patterns (primal B2/A3/D4 and dual A3/D4).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .embeddings import embedding_hits, has_dual_embedded_pattern, has_embedded_pattern
from .errors import ConfigurationError, SelfCheckError
from .group import WeylGroup, weyl_group
from .poincare import graph_violations
from .root_system import RegularPoint, RootSystem
from .subsystems import (STELLAR_TYPES, PatternWitness, canonical, element_of_signature,
                         signatures, stellar_subsystems)
from .weyl import WeylElement, bruhat_leq, from_word, inversion_set

__all__ = [
    "KumarTable", "kumar_row", "kumar_value", "z_set", "is_smooth_oracle",
    "is_rationally_smooth_oracle", "BadPatternTable", "build_bad_tables",
    "expand_words", "pattern_smooth", "pattern_rationally_smooth",
    "embedded_smooth", "embedded_rationally_smooth", "Sweep", "sweep",
    "STELLAR_COUNTS", "SMOOTH_WORDS", "RATIONAL_WORDS",
]

# (non-smooth, non-rationally-smooth) element counts of the stellar groups.
# D4 is 84: Kumar, palindromy and a subword-built Bruhat order all agree on it.
STELLAR_COUNTS = {"B2": (1, 0), "G2": (5, 0), "A3": (2, 2),
                  "B3": (20, 14), "C3": (20, 14), "D4": (84, 84)}

# minimal forbidden lists; "[a,b]x" means the words x, ax, bx
SMOOTH_WORDS = {
    "B2": ["212"],
    "G2": ["[2]121[2]", "12121"],
    "A3": ["2132", "12321"],
    "B3": ["2132", "12321[3,32,23,232]"],
    "C3": ["[3]2132[3]", "32123", "12321323"],
    "D4": ["21342"],
}
RATIONAL_WORDS = {
    "A3": ["2132", "12321"],
    "B3": ["[3]2132[3]", "[2]32123[2]", "12321[3,23,32,232,323]"],
    "C3": ["[3]2132[3]", "[2]32123[2]", "12321[3,23,32,232,323]"],
    "D4": ["21342"],
}


ROW_BLOCK = 2048   # rows per vectorised pattern batch


# -- Kumar's criterion --------------------------------------------------------

def _root_values(rs: RootSystem, r: RegularPoint | None) -> list[int]:
    if r is None:
        return [int(h) for h in rs.heights]
    return [r.value(i) for i in range(rs.num_positive)]


def _kumar_row(G: WeylGroup, word: tuple[int, ...], values: list[int]) -> np.ndarray:
    rs = G.system
    n = rs.num_positive
    row = np.zeros(G.size, dtype=object)
    row[0] = 1
    x = list(range(rs.num_roots))
    asc_cache = {}
    for a in word:
        right = G.right[a - 1]
        if a not in asc_cache:
            asc_cache[a] = np.flatnonzero(G.lengths[right] < G.lengths)
        down = asc_cache[a]
        # x s_a > x, and x(alpha_a) is the positive root scaling the new term
        img = x[rs.simple_index[a - 1]]
        if img >= n:
            raise SelfCheckError("Kumar recursion left a reduced word")
        new = row.copy()
        new[down] = row[down] + values[img] * row[right[down]]
        row = new
        sa = rs.simple_perm(a)
        x = [x[k] for k in sa]
    return row


@functools.lru_cache(maxsize=None)
def _row_cached(G: WeylGroup, w: int) -> np.ndarray:
    return _kumar_row(G, G[w].reduced_word(), _root_values(G.system, None))


def kumar_row(G: WeylGroup, w: int, r: RegularPoint | None = None,
              word: Iterable[int] | None = None) -> np.ndarray:
    """``[K_{w,v}(r) for v in G]`` as Python integers (zero when ``v`` is not below ``w``).

    Built along a reduced word of ``w``: each letter ``s`` extends ``x`` to
    ``xs`` and adds ``(x alpha_s)(r) K_{x, vs}`` at every ``v`` with ``vs < v``.
    Any reduced word gives the same row.
    """
    if r is None and word is None:
        return _row_cached(G, w)
    word = tuple(G[w].reduced_word() if word is None else word)
    if from_word(G.system, word) != G[w] or len(word) != G.lengths[w]:
        raise ConfigurationError("word is not a reduced word of w")
    return _kumar_row(G, word, _root_values(G.system, r))


def kumar_value(rs: RootSystem, w: WeylElement, v: WeylElement,
                r: RegularPoint | None = None) -> int:
    if not bruhat_leq(v, w):
        raise ConfigurationError(f"{v} is not below {w}")
    G = weyl_group(rs)
    return int(kumar_row(G, G.index(w), r)[G.index(v)])


@dataclass
class KumarTable:
    """Memoised ``K_{w,v}(r)`` for one system and one regular point."""

    system: RootSystem
    point: RegularPoint | None = None
    values: dict[tuple[int, int], int] = field(default_factory=dict)

    def __call__(self, w: WeylElement, v: WeylElement) -> int:
        G = weyl_group(self.system)
        key = (G.index(w), G.index(v))
        if key not in self.values:
            if not G.leq(key[1], key[0]):
                raise ConfigurationError(f"{v} is not below {w}")
            row = kumar_row(G, key[0], self.point)
            for x in np.flatnonzero(G.ideal[key[0]]):
                self.values.setdefault((key[0], int(x)), int(row[x]))
        return self.values[key]


def z_set(w: WeylElement, v: WeylElement) -> list[int]:
    """Positive roots ``alpha`` with ``v`` not below ``s_alpha w``."""
    rs = w.system
    G = weyl_group(rs)
    L = G.left_reflection[:, G.index(w)]
    return [a for a in range(rs.num_positive) if not G.ideal[L[a], G.index(v)]]


def _smooth_vector(G: WeylGroup) -> np.ndarray:
    rs = G.system
    lo = G.longest
    refl = G.left_reflection[:, 0]
    degree_ok = G.ideal[:, refl].sum(axis=1) == G.lengths
    v_of = G.lookup(G.perms[:, G.perms[lo]])       # w -> w w_o
    K = _row_cached(G, lo)
    below = G.ideal[G.left_reflection[:, lo]]       # below[a, v]: v <= s_a w_o
    heights = [int(h) for h in rs.heights]
    out = np.zeros(G.size, dtype=bool)
    for w in np.flatnonzero(degree_ok):
        v = v_of[w]
        z = np.flatnonzero(~below[:, v])
        if len(z) != G.lengths[v]:
            raise SelfCheckError("degree tests disagree")
        prod = 1
        for a in z:
            prod *= heights[a]
        out[w] = K[v] == prod
    return out


@functools.lru_cache(maxsize=None)
def smooth_vector(G: WeylGroup) -> np.ndarray:
    """Kumar verdict for every element of ``G``."""
    return _smooth_vector(G)


@functools.lru_cache(maxsize=None)
def palindromic_vector(G: WeylGroup) -> np.ndarray:
    out = np.zeros(G.size, dtype=bool)
    lens = G.lengths
    ideal = G.ideal
    for w in range(G.size):
        c = np.bincount(lens[ideal[w]], minlength=int(lens[w]) + 1)
        out[w] = (c == c[::-1]).all()
    return out


def is_smooth_oracle(w: WeylElement) -> bool:
    G = weyl_group(w.system)
    return bool(smooth_vector(G)[G.index(w)])


def is_rationally_smooth_oracle(w: WeylElement) -> bool:
    G = weyl_group(w.system)
    return bool(palindromic_vector(G)[G.index(w)])


# -- forbidden tables -----------------------------------------------------------

def expand_words(pattern: str) -> list[tuple[int, ...]]:
    """Expand ``"[3]2132[3]"`` style shorthand into explicit words.

    A bracket ``[a,b,...]`` stands for the alternatives empty, a, b, ...;
    digits outside brackets are literal generators.
    """
    parts: list[list[tuple[int, ...]]] = []
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if ch == "[":
            j = pattern.index("]", i)
            alts = [()] + [tuple(int(c) for c in tok.strip()) for tok in pattern[i + 1:j].split(",")]
            parts.append(alts)
            i = j + 1
        elif ch.isdigit():
            parts.append([(int(ch),)])
            i += 1
        elif ch in " s_":
            i += 1
        else:
            raise ConfigurationError(f"bad character {ch!r} in word list")
    return [tuple(itertools.chain.from_iterable(p)) for p in itertools.product(*parts)]


@dataclass
class BadPatternTable:
    """Forbidden inversion signatures per stellar type.

    ``smooth_bad`` / ``rational_bad`` hold every failing element;
    ``smooth_min`` / ``rational_min`` only those containing no forbidden
    pattern in a smaller stellar subsystem.
    """

    smooth_bad: dict[str, frozenset[int]] = field(default_factory=dict)
    rational_bad: dict[str, frozenset[int]] = field(default_factory=dict)
    smooth_min: dict[str, frozenset[int]] = field(default_factory=dict)
    rational_min: dict[str, frozenset[int]] = field(default_factory=dict)

    def words(self, type_label: str, rational: bool = False, minimal: bool = True) -> list[tuple[int, ...]]:
        src = (self.rational_min if minimal else self.rational_bad) if rational else \
              (self.smooth_min if minimal else self.smooth_bad)
        return sorted((element_of_signature(type_label, s).reduced_word()
                       for s in src.get(type_label, ())), key=lambda w: (len(w), w))


def _codes(G: WeylGroup) -> np.ndarray:
    weights = np.int64(1) << np.arange(G.system.num_positive, dtype=np.int64)
    return G.inv_matrix.astype(np.int64) @ weights


def _minimal(t: str, bad: frozenset[int], lower: dict[str, frozenset[int]], skip: set[str]) -> frozenset[int]:
    rs = canonical(t)
    G = weyl_group(rs)
    codes = _codes(G)
    hit = np.zeros(G.size, dtype=bool)
    for delta in stellar_subsystems(rs):
        if delta.type_label in skip or delta.rank == rs.rank:
            continue
        sigs = signatures(G.inv_matrix, delta)
        hit |= np.isin(sigs, list(lower[delta.type_label]))
    return frozenset(int(c) for c in codes[~hit] if int(c) in bad)


@functools.lru_cache(maxsize=None)
def build_bad_tables(check: bool = True) -> BadPatternTable:
    """Bootstrap the forbidden tables from the oracles and self-check them.

    Checks: failure counts per type, the irredundant lists against the
    hard-coded minimal word lists, and ``rational_bad <= smooth_bad``.
    """
    table = BadPatternTable()
    order = sorted(STELLAR_TYPES, key=lambda t: (int(t[1:]), t))
    for t in order:
        G = weyl_group(canonical(t))
        codes = _codes(G)
        table.smooth_bad[t] = frozenset(int(c) for c in codes[~smooth_vector(G)])
        table.rational_bad[t] = frozenset(int(c) for c in codes[~palindromic_vector(G)])
    for t in order:
        table.smooth_min[t] = _minimal(t, table.smooth_bad[t], table.smooth_bad, set())
        table.rational_min[t] = _minimal(t, table.rational_bad[t], table.rational_bad, {"B2", "G2"})
    if check:
        _self_check(table)
    return table


def _self_check(table: BadPatternTable) -> None:
    for t, (ns, nr) in STELLAR_COUNTS.items():
        got = (len(table.smooth_bad[t]), len(table.rational_bad[t]))
        if got != (ns, nr):
            raise SelfCheckError(f"{t}: failure counts {got}, expected {(ns, nr)}")
        if not table.rational_bad[t] <= table.smooth_bad[t]:
            raise SelfCheckError(f"{t}: rational failures not contained in smooth failures")
    for words, got in ((SMOOTH_WORDS, table.smooth_min), (RATIONAL_WORDS, table.rational_min)):
        for t in STELLAR_TYPES:
            rs = canonical(t)
            expected = frozenset(inversion_set(from_word(rs, w))
                                 for pattern in words.get(t, []) for w in expand_words(pattern))
            if expected != got[t]:
                raise SelfCheckError(f"{t}: minimal forbidden list does not match the word list")


# -- pattern classifiers --------------------------------------------------------

def _scan(w: WeylElement, rational: bool, minimal: bool) -> PatternWitness | None:
    table = build_bad_tables()
    src = (table.rational_min if minimal else table.rational_bad) if rational else \
          (table.smooth_min if minimal else table.smooth_bad)
    bits = inversion_set(w)
    for delta in stellar_subsystems(w.system):
        t = delta.type_label
        if rational and t in ("B2", "G2"):
            continue
        sig = sum(1 << i for i, a in enumerate(delta.pattern_map.tolist()) if bits >> a & 1)
        if sig in src[t]:
            sigma = element_of_signature(t, sig)
            return PatternWitness("stellar-pattern", t, delta.simple_coords,
                                  list(sigma.reduced_word()),
                                  "rationally-singular" if rational else "singular")
    return None


def pattern_smooth(w: WeylElement, minimal: bool = True) -> PatternWitness | None:
    """Witness of a forbidden stellar pattern for smoothness, or None."""
    return _scan(w, False, minimal)


def pattern_rationally_smooth(w: WeylElement, minimal: bool = True) -> PatternWitness | None:
    return _scan(w, True, minimal)


def embedded_smooth(w: WeylElement) -> PatternWitness | None:
    return (has_embedded_pattern(w, ("B2", "A3", "D4"))
            or has_dual_embedded_pattern(w, ("A3", "D4")))


def embedded_rationally_smooth(w: WeylElement) -> PatternWitness | None:
    return (has_embedded_pattern(w, ("A3", "D4"), verdict="rationally-singular")
            or has_dual_embedded_pattern(w, ("A3", "D4"), verdict="rationally-singular"))


def pattern_hits(inv: np.ndarray, rs: RootSystem, rational: bool, minimal: bool = True) -> np.ndarray:
    """Vectorised pattern verdicts: True where a forbidden pattern occurs."""
    if len(inv) > ROW_BLOCK:
        return np.concatenate([pattern_hits(inv[i:i + ROW_BLOCK], rs, rational, minimal)
                               for i in range(0, len(inv), ROW_BLOCK)])
    table = build_bad_tables()
    src = (table.rational_min if minimal else table.rational_bad) if rational else \
          (table.smooth_min if minimal else table.smooth_bad)
    hit = np.zeros(len(inv), dtype=bool)
    by_type: dict[str, list] = {}
    for delta in stellar_subsystems(rs):
        if rational and delta.type_label in ("B2", "G2"):
            continue
        by_type.setdefault(delta.type_label, []).append(delta.pattern_map)
    for t, maps in by_type.items():
        M = np.array(maps)
        weights = np.int64(1) << np.arange(M.shape[1], dtype=np.int64)
        bad = np.array(sorted(src[t]), dtype=np.int64)
        for chunk in range(0, len(M), 512):
            sub = inv[:, M[chunk:chunk + 512]].astype(np.int64)   # rows x subsystems x k
            hit |= np.isin(sub @ weights, bad).any(axis=1)
    return hit


# -- whole-group sweeps -------------------------------------------------------

@dataclass
class Sweep:
    group: WeylGroup
    kumar: np.ndarray
    palindromic: np.ndarray
    graph_regular: np.ndarray
    pattern_smooth: np.ndarray
    pattern_rational: np.ndarray
    embedded_smooth: np.ndarray
    embedded_rational: np.ndarray

    def disagreements(self) -> list[tuple[int, str]]:
        """Indices where some method disagrees with its oracle, with a reason."""
        out = []
        smooth = [("pattern", self.pattern_smooth), ("embedded", self.embedded_smooth)]
        rational = [("pattern", self.pattern_rational), ("embedded", self.embedded_rational),
                    ("bruhat-graph", self.graph_regular)]
        for name, vec in smooth:
            for i in np.flatnonzero(vec != self.kumar):
                out.append((int(i), f"{name} smoothness vs Kumar"))
        for name, vec in rational:
            for i in np.flatnonzero(vec != self.palindromic):
                out.append((int(i), f"{name} rational smoothness vs palindromy"))
        return sorted(out)


def sweep(rs: RootSystem) -> Sweep:
    """Every method on every element of ``W(rs)``; True means (rationally) smooth."""
    G = weyl_group(rs)
    inv = G.inv_matrix
    emb_s = ~(embedding_hits(inv, rs, ("B2", "A3", "D4"))
              | embedding_hits(inv, rs, ("A3", "D4"), on_dual=True))
    emb_r = ~(embedding_hits(inv, rs, ("A3", "D4"))
              | embedding_hits(inv, rs, ("A3", "D4"), on_dual=True))
    return Sweep(G, smooth_vector(G), palindromic_vector(G), graph_violations(G) < 0,
                 ~pattern_hits(inv, rs, False), ~pattern_hits(inv, rs, True), emb_s, emb_r)
