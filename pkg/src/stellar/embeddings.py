"""
B2, A3 and D4 embeddings: ordered tuples of positive roots that are the images
of the simple roots of a small root system under an injective linear map
sending its positive roots to positive roots.

Each embedding stores the image of every positive root of the small system
(``roots_map``, indexed like the canonical system), so flattening an element
along it is a bit gather, and the half-plane shortcuts are a few bit tests.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, SelfCheckError
from .group import WeylGroup
from .root_system import RootSystem, dual
from .subsystems import (PatternWitness, Subsystem, _complement, canonical,
                         element_of_signature, span_closure)
from .weyl import WeylElement, from_word, inversion_set

KINDS = ("B2", "A3", "D4")

# designated forbidden flattenings (Bourbaki labels, node 2 central)
FORBIDDEN_WORDS = {
    "B2": ((2, 1, 2),),
    "A3": ((1, 2, 3, 2, 1), (2, 1, 3, 2)),
    "D4": ((2, 1, 3, 4, 2),),
}

# half-plane shortcuts as (coefficients inside I(w), coefficients outside I(w))
SHORTCUTS = {
    "B2": [([(1, 1)], [(1, 0)])],
    "A3": [([(1, 1, 1)], [(1, 0, 0), (0, 0, 1)]),
           ([(1, 1, 0), (0, 1, 1)], [(0, 1, 0)])],
    "D4": [([(1, 2, 1, 1)], [(1, 1, 1, 0), (1, 1, 0, 1), (0, 1, 1, 1)])],
}

__all__ = [
    "Embedding", "KINDS", "FORBIDDEN_WORDS", "enumerate_embeddings", "is_proper",
    "flatten_embedding", "shortcut_fires", "has_embedded_pattern",
    "has_dual_embedded_pattern", "proper_embeddings", "embedding_classes", "coroot_map",
    "forbidden_signatures", "embedding_hits", "transport_to_dual",
]


@dataclass(frozen=True, eq=False)
class Embedding:
    kind: str
    ambient: RootSystem
    images: tuple[int, ...]
    roots_map: np.ndarray

    @functools.cached_property
    def span(self) -> Subsystem:
        return span_closure(self.ambient, self.images)

    @property
    def span_type(self) -> str:
        return self.span.type_label

    @property
    def image_set(self) -> frozenset[int]:
        return frozenset(int(i) for i in self.roots_map)

    def image_coords(self) -> list[list[int]]:
        return [list(self.ambient.roots[i]) for i in self.images]

    def __repr__(self) -> str:
        return f"Embedding({self.kind}, {list(self.images)})"


def _chains(can: RootSystem) -> list[tuple[int, int, int]]:
    """For each non-simple canonical root: ``(root, smaller root, node)``."""
    out = []
    coeffs = can.coefficients.tolist()
    index = {tuple(c): i for i, c in enumerate(coeffs)}
    for i, c in enumerate(coeffs):
        if sum(c) == 1:
            continue
        for a in range(can.rank):
            if c[a]:
                d = list(c)
                d[a] -= 1
                j = index.get(tuple(d))
                if j is not None:
                    out.append((i, j, a))
                    break
    return out


def enumerate_embeddings(rs: RootSystem, kind: str) -> list[Embedding]:
    """Every ordered tuple of positive roots giving an embedding of ``kind``.

    Nodes are assigned one at a time; after each assignment every canonical
    root supported on the assigned nodes must land on a positive root.  The
    extension step is vectorised over all candidate roots.
    """
    if kind not in KINDS:
        raise ConfigurationError(f"unknown embedding kind {kind}")
    return list(_enumerate(rs, kind))


@functools.lru_cache(maxsize=None)
def _enumerate(rs: RootSystem, kind: str) -> tuple[Embedding, ...]:
    can = canonical(kind)
    k, m, n = can.rank, can.num_positive, rs.num_positive
    S = rs.sums
    supports = [set(np.flatnonzero(c).tolist()) for c in can.coefficients]
    chains = _chains(can)
    simple_pos = [can.simple_index[a] for a in range(k)]
    # image table: rows = partial embeddings, columns = canonical roots (-1 unknown)
    table = np.full((1, m), -1, dtype=np.int64)
    for a in range(k):
        rows = np.repeat(table, n, axis=0)
        rows[:, simple_pos[a]] = np.tile(np.arange(n), len(table))
        ok = np.ones(len(rows), dtype=bool)
        done = set(range(a + 1))
        for i, j, b in chains:
            if not supports[i] <= done or a not in supports[i]:
                continue
            src, step = rows[:, j], rows[:, simple_pos[b]]
            img = np.where(ok, S[np.maximum(src, 0), np.maximum(step, 0)], -1)
            rows[:, i] = img
            ok &= img >= 0
        table = rows[ok]
        # images of distinct canonical roots must be distinct
        assigned = table[:, [i for i in range(m) if supports[i] <= done]]
        srt = np.sort(assigned, axis=1)
        table = table[(np.diff(srt, axis=1) != 0).all(axis=1)]
    out = []
    for row in table:
        images = tuple(int(row[p]) for p in simple_pos)
        vecs = rs.root_array[list(images)]
        if len(_complement(vecs, rs.ambient_dim)) != rs.ambient_dim - k:
            continue
        out.append(Embedding(kind, rs, images, row.copy()))
    return tuple(out)


def _b2_in(rs: RootSystem, roots: frozenset[int]) -> list[Embedding]:
    return [e for e in _enumerate(rs, "B2") if e.image_set <= roots]


def is_proper(e: Embedding) -> bool:
    """Properness: automatic unless the span has type B3 or C3.

    Otherwise some B2-embedding into the span must send ``b1+b2`` to one of
    ``e``'s simple images and meet ``e``'s image in exactly its three roots
    ``b1+b2, b1+2b2, b2``.
    """
    if e.span_type not in ("B3", "C3"):
        return True
    can = canonical("B2")
    want = [can.from_coefficients(c) for c in ((1, 1), (1, 2), (0, 1))]
    mine = e.image_set
    for eps in _b2_in(e.ambient, frozenset(e.span.positive)):
        three = {int(eps.roots_map[i]) for i in want}
        if int(eps.roots_map[want[0]]) in e.images and eps.image_set & mine == three:
            return True
    return False


@functools.lru_cache(maxsize=None)
def proper_embeddings(rs: RootSystem, kind: str, proper: bool = True) -> tuple[Embedding, ...]:
    return tuple(e for e in _enumerate(rs, kind) if not proper or is_proper(e))


def embedding_classes(rs: RootSystem, kind: str, proper: bool = False) -> int:
    """Embeddings counted up to symmetries of the small diagram (same image)."""
    return len({e.image_set for e in proper_embeddings(rs, kind, proper)})


@functools.lru_cache(maxsize=None)
def forbidden_signatures(kind: str) -> frozenset[int]:
    can = canonical(kind)
    out = set()
    for word in FORBIDDEN_WORDS[kind]:
        out.add(inversion_set(from_word(can, word)))
    return frozenset(out)


def _signature(bits: int, e: Embedding) -> int:
    return sum(1 << i for i, a in enumerate(e.roots_map.tolist()) if bits >> a & 1)


def flatten_embedding(w: WeylElement, e: Embedding) -> WeylElement:
    """The element of the small group whose inversion set is ``e^-1(I(w))``."""
    if w.system is not e.ambient:
        raise ConfigurationError("element and embedding live in different systems")
    return element_of_signature(e.kind, _signature(inversion_set(w), e))


@functools.lru_cache(maxsize=None)
def _shortcut_indices(kind: str) -> list[tuple[list[int], list[int]]]:
    can = canonical(kind)
    return [([can.from_coefficients(c) for c in ins], [can.from_coefficients(c) for c in outs])
            for ins, outs in SHORTCUTS[kind]]


def shortcut_fires(bits: int, e: Embedding) -> bool:
    rm = e.roots_map
    for ins, outs in _shortcut_indices(e.kind):
        if all(bits >> int(rm[i]) & 1 for i in ins) and not any(bits >> int(rm[o]) & 1 for o in outs):
            return True
    return False


def _witness(e: Embedding, bits: int, is_dual: bool, verdict: str) -> PatternWitness:
    sig = _signature(bits, e)
    if sig not in forbidden_signatures(e.kind):
        raise SelfCheckError("half-plane shortcut disagrees with flattening")
    sigma = element_of_signature(e.kind, sig)
    return PatternWitness("embedded-pattern", e.span_type, e.span.simple_coords,
                          list(sigma.reduced_word()), verdict, embedding_kind=e.kind,
                          images=e.image_coords(), dual=is_dual, proper=is_proper(e))


def has_embedded_pattern(w: WeylElement, kinds: Iterable[str] = KINDS, proper: bool = True,
                         verdict: str = "singular", _dual: bool = False) -> PatternWitness | None:
    """First (proper) embedding of the given kinds flattening ``w`` to a forbidden element."""
    bits = inversion_set(w)
    for kind in kinds:
        for e in proper_embeddings(w.system, kind, proper):
            if shortcut_fires(bits, e):
                return _witness(e, bits, _dual, verdict)
    return None


def transport_to_dual(w: WeylElement) -> WeylElement:
    """Same word, read in the Weyl group of the dual system."""
    return from_word(dual(w.system), w.reduced_word())


def has_dual_embedded_pattern(w: WeylElement, kinds: Iterable[str] = ("A3", "D4"),
                              verdict: str = "singular") -> PatternWitness | None:
    return has_embedded_pattern(transport_to_dual(w), kinds, verdict=verdict, _dual=True)


# -- whole-group evaluation ---------------------------------------------------

@functools.lru_cache(maxsize=None)
def coroot_map(rs: RootSystem) -> np.ndarray:
    """``coroot_map[i]`` = index in ``dual(rs)`` of the coroot of positive root ``i``."""
    d = dual(rs)
    m = int(rs.norms.max())
    out = []
    for i in range(rs.num_positive):
        v = rs.roots[i]
        out.append(d.index_of(tuple(x * (m // int(rs.norms[i])) for x in v)))
    out = np.array(out)
    if (out < 0).any() or len(set(out.tolist())) != len(out):
        raise SelfCheckError("coroots do not match the dual system")
    return out


def embedding_hits(inv: np.ndarray, rs: RootSystem, kinds: Sequence[str],
                   proper: bool = True, on_dual: bool = False) -> np.ndarray:
    """Boolean per row of ``inv``: some embedding shortcut fires.

    ``inv`` is an inversion matrix over ``rs``'s positive roots.  With
    ``on_dual`` the rows are carried to the dual system through coroots
    (inversion sets correspond root by root) and the dual embeddings are used.
    """
    if len(inv) > 2048:
        return np.concatenate([embedding_hits(inv[i:i + 2048], rs, kinds, proper, on_dual)
                               for i in range(0, len(inv), 2048)])
    target = rs
    if on_dual:
        target = dual(rs)
        moved = np.zeros_like(inv)
        moved[:, coroot_map(rs)] = inv
        inv = moved
    hit = np.zeros(len(inv), dtype=bool)
    for kind in kinds:
        embs = proper_embeddings(target, kind, proper)
        if not embs:
            continue
        R = np.array([e.roots_map for e in embs])
        for ins, outs in _shortcut_indices(kind):
            cond = np.ones((len(inv), len(embs)), dtype=bool)
            for i in ins:
                cond &= inv[:, R[:, i]]
            for o in outs:
                cond &= ~inv[:, R[:, o]]
            hit |= cond.any(axis=1)
    return hit


def group_embedding_hits(G: WeylGroup, kinds: Sequence[str], proper: bool = True,
                         on_dual: bool = False) -> np.ndarray:
    return embedding_hits(G.inv_matrix, G.system, kinds, proper, on_dual)
