"""
Finite crystallographic root systems with exact integer coordinates.

Roots are stored in a scaled integer lattice (E and F coordinates are doubled),
so every computation downstream is integer arithmetic.  Simple roots follow
Bourbaki's node numbering; for the classical types the coordinates are chosen
so that ``e_1`` is the special node, i.e. for ``B_n`` the simple roots are
``e_1, e_2 - e_1, ..., e_n - e_{n-1}`` with ``alpha_n = e_1`` and
``alpha_1 = e_n - e_{n-1}``.  Positive roots are then ``e_k +- e_j`` (k > j)
plus the short/long roots on single coordinates, which matches the usual
signed-permutation action ``w(e_j) = sign(w_j) e_{|w_j|}``.

Index convention: positive roots occupy ``0..N-1`` ordered by height, then
lexicographically on coordinates; the negative of root ``i`` is ``i + N``.

>>> rs = build("A", 3)
>>> rs.name, rs.num_positive
('A3', 6)
>>> rs.height(rs.index_of((-1, 0, 0, 1)))
3
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from .errors import ConfigurationError

Vector = tuple[int, ...]

__all__ = [
    "RootSystem", "RegularPoint", "build", "dual", "regular_point",
    "classify_cartan", "group_order", "match_cartan",
]


def _unit(dim: int, pos: int, scale: int = 1) -> list[int]:
    v = [0] * dim
    v[pos] = scale
    return v


def _classical_simples(letter: str, n: int) -> list[list[int]]:
    """Simple roots ``alpha_1..alpha_n`` for B, C, D in R^n (e_1 = coordinate 0)."""
    simples = []
    for i in range(1, n):
        # alpha_i = e_{n+1-i} - e_{n-i}
        v = [0] * n
        v[n - i] = 1
        v[n - i - 1] = -1
        simples.append(v)
    if letter == "B":
        simples.append(_unit(n, 0))
    elif letter == "C":
        simples.append(_unit(n, 0, 2))
    else:
        v = [0] * n
        v[0] = v[1] = 1
        simples.append(v)
    return simples


_E8_SIMPLES = [
    [1, -1, -1, -1, -1, -1, -1, 1],
    [2, 2, 0, 0, 0, 0, 0, 0],
    [-2, 2, 0, 0, 0, 0, 0, 0],
    [0, -2, 2, 0, 0, 0, 0, 0],
    [0, 0, -2, 2, 0, 0, 0, 0],
    [0, 0, 0, -2, 2, 0, 0, 0],
    [0, 0, 0, 0, -2, 2, 0, 0],
    [0, 0, 0, 0, 0, -2, 2, 0],
]

_F4_SIMPLES = [
    [0, 2, -2, 0],
    [0, 0, 2, -2],
    [0, 0, 0, 2],
    [1, -1, -1, -1],
]

_G2_SIMPLES = [
    [1, -1, 0],
    [-2, 1, 1],
]


def _check_type(letter: str, rank: int) -> None:
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 3,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }
    if letter not in ok or not ok[letter]:
        raise ConfigurationError(f"no finite root system of type {letter}{rank}")


def _simple_roots(letter: str, rank: int) -> list[list[int]]:
    if letter == "A":
        out = []
        for i in range(rank):
            v = [0] * (rank + 1)
            v[i], v[i + 1] = -1, 1
            out.append(v)
        return out
    if letter in "BCD":
        return _classical_simples(letter, rank)
    if letter == "E":
        return [list(v) for v in _E8_SIMPLES[:rank]]
    if letter == "F":
        return [list(v) for v in _F4_SIMPLES]
    return [list(v) for v in _G2_SIMPLES]


def group_order(letter: str, rank: int) -> int:
    """Order of the Weyl group of an irreducible type."""
    if letter == "A":
        return factorial(rank + 1)
    if letter in "BC":
        return 2 ** rank * factorial(rank)
    if letter == "D":
        return 2 ** (rank - 1) * factorial(rank)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[letter, rank]


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


class RootSystem:
    """Immutable root data for one finite root system.

    Attributes
    ----------
    type_label, rank, name
        e.g. ``"B"``, ``3``, ``"B3"``.  Reducible or relabelled systems
        (duals) get their ``name`` from Cartan-matrix classification.
    simple_roots
        coordinates of ``alpha_1..alpha_rank`` in node order.
    roots
        all ``2N`` roots; ``roots[i + N] == -roots[i]``.
    simple_index
        ``simple_index[a]`` is the root index of ``alpha_{a+1}``.
    coefficients
        ``N x rank`` array of simple-root coefficients of the positive roots.
    """

    def __init__(self, simple_roots: Sequence[Sequence[int]], type_label: str,
                 name: str | None = None):
        simples = [tuple(int(x) for x in v) for v in simple_roots]
        self.rank = len(simples)
        self.ambient_dim = len(simples[0])
        self.simple_roots: tuple[Vector, ...] = tuple(simples)
        self.type_label = type_label
        self.pairing = np.array([[_dot(a, b) for b in simples] for a in simples],
                                dtype=np.int64)
        self.cartan = np.array(
            [[2 * _dot(a, b) // _dot(b, b) for b in simples] for a in simples],
            dtype=np.int64)

        found: dict[Vector, tuple[int, ...]] = {}
        frontier = []
        for i, v in enumerate(simples):
            coeff = tuple(1 if j == i else 0 for j in range(self.rank))
            found[v] = coeff
            frontier.append(v)
        norms = [_dot(a, a) for a in simples]
        while frontier:
            nxt = []
            for beta in frontier:
                cb = found[beta]
                for i, a in enumerate(simples):
                    n = 2 * _dot(beta, a) // norms[i]
                    if n == 0:
                        continue
                    img = tuple(x - n * y for x, y in zip(beta, a))
                    if img not in found:
                        found[img] = tuple(c - (n if j == i else 0)
                                           for j, c in enumerate(cb))
                        nxt.append(img)
            frontier = nxt

        positive = [(v, c) for v, c in found.items() if all(x >= 0 for x in c)]
        positive.sort(key=lambda vc: (sum(vc[1]), vc[0]))
        n_pos = len(positive)
        if 2 * n_pos != len(found):
            raise ConfigurationError("simple roots do not generate a root system")
        self.num_positive = n_pos
        pos_coords = [v for v, _ in positive]
        self.roots: tuple[Vector, ...] = tuple(
            pos_coords + [tuple(-x for x in v) for v in pos_coords])
        self.coefficients = np.array([c for _, c in positive], dtype=np.int64)
        self.heights = self.coefficients.sum(axis=1)
        self._index = {v: i for i, v in enumerate(self.roots)}
        self.simple_index = tuple(self._index[v] for v in simples)
        self.root_array = np.array(self.roots, dtype=np.int64)
        self.norms = (self.root_array[:n_pos] ** 2).sum(axis=1)

        if name is None:
            comps = classify_cartan(self.cartan)
            name = "x".join(c[0] for c in comps)
        self.name = name
        self._reflections: list[tuple[int, ...]] | None = None
        self._sums: np.ndarray | None = None
        self._dual: RootSystem | None = None

    # -- root lookup -----------------------------------------------------
    def index_of(self, coords: Sequence[int]) -> int:
        """Root index of a coordinate vector; -1 if it is not a root."""
        return self._index.get(tuple(coords), -1)

    def neg(self, i: int) -> int:
        n = self.num_positive
        return i + n if i < n else i - n

    def is_positive(self, i: int) -> bool:
        return i < self.num_positive

    def height(self, i: int) -> int:
        n = self.num_positive
        return int(self.heights[i]) if i < n else -int(self.heights[i - n])

    def root(self, i: int) -> Vector:
        return self.roots[i]

    @property
    def num_roots(self) -> int:
        return 2 * self.num_positive

    @property
    def simply_laced(self) -> bool:
        return len(set(self.norms.tolist())) == 1

    def is_long(self, i: int) -> bool:
        return int(self.norms[i % self.num_positive]) == int(self.norms.max())

    # -- reflections -----------------------------------------------------
    def reflect(self, alpha: int, v: Sequence[int]) -> Vector:
        """Apply ``s_alpha`` to a coordinate vector (root index ``alpha``)."""
        a = self.roots[alpha]
        n2 = _dot(a, a)
        num = 2 * _dot(v, a)
        if num % n2:
            # general vectors need not stay in the lattice
            c = Fraction(num, n2)
            return tuple(x - c * y for x, y in zip(v, a))  # type: ignore[misc]
        c = num // n2
        return tuple(x - c * y for x, y in zip(v, a))

    def reflection_perm(self, alpha: int) -> tuple[int, ...]:
        """``s_alpha`` as a permutation of all root indices."""
        if self._reflections is None:
            self._reflections = [self._make_reflection(i)
                                 for i in range(self.num_positive)]
        return self._reflections[alpha % self.num_positive]

    def _make_reflection(self, alpha: int) -> tuple[int, ...]:
        R = self.root_array
        a = R[alpha]
        n2 = int(a @ a)
        coef = (2 * (R @ a)) // n2
        imgs = R - np.outer(coef, a)
        return tuple(self._index[tuple(row)] for row in imgs.tolist())

    def simple_perm(self, node: int) -> tuple[int, ...]:
        """``s_node`` (1-based Bourbaki node) as a permutation of root indices."""
        return self.reflection_perm(self.simple_index[node - 1])

    # -- root addition ---------------------------------------------------
    @property
    def sums(self) -> np.ndarray:
        """``sums[i, j]`` is the positive-root index of roots[i]+roots[j], or -1."""
        if self._sums is None:
            n = self.num_positive
            R = self.root_array[:n]
            S = np.full((n, n), -1, dtype=np.int64)
            for i in range(n):
                tot = R[i] + R
                for j, row in enumerate(tot.tolist()):
                    k = self._index.get(tuple(row), -1)
                    if 0 <= k < n:
                        S[i, j] = k
            self._sums = S
        return self._sums

    def add(self, i: int, j: int) -> int:
        return self.index_of(tuple(x + y for x, y in zip(self.roots[i], self.roots[j])))

    def from_coefficients(self, coeffs: Sequence[int]) -> int:
        """Root index of ``sum c_i alpha_i``, or -1."""
        v = [0] * self.ambient_dim
        for c, a in zip(coeffs, self.simple_roots):
            if c:
                for k, x in enumerate(a):
                    v[k] += c * x
        return self.index_of(v)

    # -- diagram ---------------------------------------------------------
    def neighbours(self, node: int) -> list[int]:
        """1-based Dynkin neighbours of a 1-based node."""
        row = self.cartan[node - 1]
        return [j + 1 for j in range(self.rank) if j != node - 1 and row[j] != 0]

    def to_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in self.roots[i])
                         for i in range(self.num_positive))

    def __repr__(self) -> str:
        return f"RootSystem({self.name})"


@functools.lru_cache(maxsize=None)
def build(type_label: str, rank: int) -> RootSystem:
    """Build the root system of an irreducible finite type.

    ``C2`` is the same system as ``B2`` and is returned as such.
    """
    letter = str(type_label).upper()
    _check_type(letter, rank)
    if letter == "C" and rank == 2:
        return build("B", 2)
    return RootSystem(_simple_roots(letter, rank), letter, f"{letter}{rank}")


@functools.lru_cache(maxsize=None)
def classical_system(letter: str, n: int) -> RootSystem:
    """Like :func:`build` but keeps genuine ``C2`` coordinates (long root 2e_1).

    Used for one-line notation, where C2 and B2 act on different roots.
    """
    if letter == "C" and n == 2:
        return RootSystem(_classical_simples("C", 2), "C", "C2")
    return build(letter, n)


def dual(rs: RootSystem) -> RootSystem:
    """The dual root system, with ``alpha_i`` sent to the coroot of ``alpha_i``.

    Coroots ``2 alpha / (alpha, alpha)`` are rescaled by the largest squared
    length so coordinates stay integral.
    """
    if rs._dual is None:
        m = int(rs.norms.max())
        simples = []
        for a in rs.simple_roots:
            n2 = _dot(a, a)
            simples.append([x * (m // n2) for x in a])
        letter = {"B": "C", "C": "B"}.get(rs.type_label, rs.type_label)
        d = RootSystem(simples, letter)
        d._dual = rs
        rs._dual = d
    return rs._dual


@dataclass(frozen=True)
class RegularPoint:
    """A point ``r`` with ``alpha_i(r) = 1`` for every simple root.

    ``coords`` live in the span of the simple roots and may be rational in the
    scaled lattice; ``value`` is always an integer (the height).
    """

    system: RootSystem
    coords: tuple[Fraction, ...]

    def value(self, root: int) -> int:
        v = sum(Fraction(x) * y for x, y in zip(self.system.roots[root], self.coords))
        if v.denominator != 1:
            raise ArithmeticError("non-integral root value at regular point")
        return int(v)


def _solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(matrix)
    M = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def regular_point(rs: RootSystem) -> RegularPoint:
    G = [[Fraction(int(x)) for x in row] for row in rs.pairing]
    c = _solve(G, [Fraction(1)] * rs.rank)
    coords = [Fraction(0)] * rs.ambient_dim
    for ci, a in zip(c, rs.simple_roots):
        for k, x in enumerate(a):
            coords[k] += ci * x
    return RegularPoint(rs, tuple(coords))


# -- classification -----------------------------------------------------

def match_cartan(target: np.ndarray, pattern: np.ndarray) -> list[int] | None:
    """Find ``p`` with ``target[p[i], p[j]] == pattern[i, j]`` for all i, j.

    Backtracking search; returns the first match in lexicographic order.
    """
    k = len(pattern)
    if len(target) != k:
        return None
    target = np.asarray(target)
    pattern = np.asarray(pattern)
    assign: list[int] = []
    used = [False] * k

    def extend() -> bool:
        i = len(assign)
        if i == k:
            return True
        for c in range(k):
            if used[c] or target[c, c] != pattern[i, i]:
                continue
            if all(target[assign[j], c] == pattern[j, i]
                   and target[c, assign[j]] == pattern[i, j] for j in range(i)):
                used[c] = True
                assign.append(c)
                if extend():
                    return True
                assign.pop()
                used[c] = False
        return False

    return list(assign) if extend() else None


def _candidates(k: int) -> list[tuple[str, int]]:
    out = [("A", k)]
    if k >= 2:
        out.append(("B", k))
    if k >= 3:
        out.append(("C", k))
    if k >= 4:
        out.append(("D", k))
    if k in (6, 7, 8):
        out.append(("E", k))
    if k == 4:
        out.append(("F", 4))
    if k == 2:
        out.append(("G", 2))
    return out


def _components(cartan: np.ndarray) -> list[list[int]]:
    k = len(cartan)
    seen = [False] * k
    comps = []
    for s in range(k):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in range(k):
                if not seen[b] and cartan[a, b] != 0:
                    seen[b] = True
                    stack.append(b)
        comps.append(sorted(comp))
    return comps


@functools.lru_cache(maxsize=None)
def _canonical_cartan(letter: str, k: int) -> np.ndarray:
    return build(letter, k).cartan


def classify_cartan(cartan: np.ndarray) -> list[tuple[str, list[int]]]:
    """Split a Cartan matrix into irreducible components and name each one.

    Returns ``[(name, nodes), ...]`` where ``nodes[i]`` is the row of
    ``cartan`` playing the role of Bourbaki node ``i+1`` of that component.
    Components are sorted by name, then by their node lists.
    """
    cartan = np.asarray(cartan)
    out = []
    for comp in _components(cartan):
        sub = cartan[np.ix_(comp, comp)]
        for letter, k in _candidates(len(comp)):
            p = match_cartan(sub, _canonical_cartan(letter, k))
            if p is not None:
                out.append((f"{letter}{k}", [comp[i] for i in p]))
                break
        else:  # pragma: no cover - every finite Cartan matrix is listed
            raise ConfigurationError("unrecognised Cartan matrix")
    out.sort(key=lambda t: (t[0], t[1]))
    return out

