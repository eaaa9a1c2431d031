"""
Whole-group tables for fully enumerated Weyl groups.

Every element gets an integer index (BFS order: by length, lexicographic on the
action table within a length, identity first).  Multiplication by simple
reflections and by reflections, inversion sets and the Bruhat order are stored
as numpy arrays so that whole-group sweeps are vectorised.

The Bruhat order is the ``|W| x |W|`` boolean matrix ``ideal[w, x] = x <= w``,
built bottom-up from ``[e, w] = [e, ws] u [e, ws] s`` for a right descent ``s``.
"""

from __future__ import annotations

import functools
import os
from pathlib import Path

import numpy as np

from . import __version__
from .errors import CapExceeded
from .root_system import RootSystem
from .weyl import WeylElement, enumerate_group, order_of

TABLE_CAP = 12_000

__all__ = ["WeylGroup", "weyl_group", "TABLE_CAP"]


class WeylGroup:
    def __init__(self, rs: RootSystem, cap: int = TABLE_CAP):
        size = order_of(rs)
        if size > cap:
            raise CapExceeded(f"|W({rs.name})| = {size} exceeds table cap {cap}")
        self.system = rs
        self.elements: list[WeylElement] = list(enumerate_group(rs))
        self.size = len(self.elements)
        n = rs.num_positive
        dtype = np.int16 if rs.num_roots < 2 ** 15 else np.int32
        self.perms = np.array([w.perm for w in self.elements], dtype=dtype)
        self._index = {row.tobytes(): i for i, row in enumerate(self.perms)}
        self.lengths = (self.perms[:, :n] >= n).sum(axis=1)
        self.right = np.array([self.lookup(self.perms[:, np.array(rs.simple_perm(a))])
                               for a in range(1, rs.rank + 1)])
        self.left = np.array([self.lookup(np.array(rs.simple_perm(a), dtype=dtype)[self.perms])
                              for a in range(1, rs.rank + 1)])
        inv = np.argsort(self.perms, axis=1)
        # beta in I(w) iff w^{-1}(beta) < 0
        self.inv_matrix = inv[:, :n] >= n
        self.inverse = self.lookup(inv.astype(dtype))
        self.longest = int(np.argmax(self.lengths))
        self._left_refl: np.ndarray | None = None
        self._ideal: np.ndarray | None = None

    def lookup(self, perms: np.ndarray) -> np.ndarray:
        """Indices of a stack of action tables."""
        perms = np.ascontiguousarray(perms, dtype=self.perms.dtype)
        return np.fromiter((self._index[row.tobytes()] for row in perms),
                           dtype=np.int64, count=len(perms))

    def index(self, w: WeylElement) -> int:
        return self._index[np.asarray(w.perm, dtype=self.perms.dtype).tobytes()]

    def __getitem__(self, i: int) -> WeylElement:
        return self.elements[i]

    def __len__(self) -> int:
        return self.size

    @property
    def left_reflection(self) -> np.ndarray:
        """``left_reflection[beta, x]`` is the index of ``s_beta x``."""
        if self._left_refl is None:
            rs = self.system
            rows = []
            for beta in range(rs.num_positive):
                s = np.array(rs.reflection_perm(beta), dtype=self.perms.dtype)
                rows.append(self.lookup(s[self.perms]))
            self._left_refl = np.array(rows)
        return self._left_refl

    def right_reflection(self, beta: int) -> np.ndarray:
        s = np.array(self.system.reflection_perm(beta))
        return self.lookup(self.perms[:, s])

    @property
    def ideal(self) -> np.ndarray:
        if self._ideal is None:
            cached = _load_cached(self)
            self._ideal = cached if cached is not None else self._build_ideal()
            _store_cached(self, self._ideal)
        return self._ideal

    def _build_ideal(self) -> np.ndarray:
        size = self.size
        ideal = np.zeros((size, size), dtype=bool)
        ideal[0, 0] = True
        for w in range(1, size):
            for s in range(self.system.rank):
                ws = self.right[s, w]
                if self.lengths[ws] < self.lengths[w]:
                    break
            row = ideal[ws]
            ideal[w] = row | row[self.right[s]]
        return ideal

    def leq(self, x: int, w: int) -> bool:
        return bool(self.ideal[w, x])

    def poincare_coeffs(self, w: int) -> list[int]:
        counts = np.bincount(self.lengths[self.ideal[w]],
                             minlength=int(self.lengths[w]) + 1)
        return counts.tolist()

    def all_poincare(self) -> list[list[int]]:
        return [self.poincare_coeffs(w) for w in range(self.size)]


_CACHE_DIR: Path | None = None


def set_cache_dir(path: str | os.PathLike | None) -> None:
    """Opt-in on-disk cache for Bruhat matrices keyed by system and version."""
    global _CACHE_DIR
    _CACHE_DIR = Path(path) if path else None


def _cache_file(group: WeylGroup) -> Path | None:
    if _CACHE_DIR is None:
        return None
    return _CACHE_DIR / f"bruhat-{group.system.name}-v{__version__}.npz"


def _load_cached(group: WeylGroup) -> np.ndarray | None:
    f = _cache_file(group)
    if f is None or not f.exists():
        return None
    packed = np.load(f)["ideal"]
    return np.unpackbits(packed, axis=1, count=group.size).astype(bool)


def _store_cached(group: WeylGroup, ideal: np.ndarray) -> None:
    f = _cache_file(group)
    if f is None or f.exists():
        return
    f.parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(f, ideal=np.packbits(ideal, axis=1))


@functools.lru_cache(maxsize=None)
def _weyl_group(rs: RootSystem) -> WeylGroup:
    return WeylGroup(rs, cap=order_of(rs))


def weyl_group(rs: RootSystem, cap: int = TABLE_CAP) -> WeylGroup:
    """Cached table for ``rs``; raises :class:`CapExceeded` above ``cap``."""
    size = order_of(rs)
    if size > cap:
        raise CapExceeded(f"|W({rs.name})| = {size} exceeds table cap {cap}")
    return _weyl_group(rs)
