"""
Weyl group elements as signed permutations of the root index set.

An element stores the image of every root index (``perm[k]`` is the index of
``w(root_k)``), so composition is a table lookup and the inversion set is read
off directly.  Words are read left to right: ``from_word(rs, [2, 1])`` is
``s_2 s_1`` acting on the left, so the inversion set of ``s_a1 ... s_ap`` is
``{s_a1 ... s_a(j-1) alpha_aj}``.

>>> rs = build("A", 3)
>>> w = from_word(rs, [2, 1, 3, 2])
>>> w.length, w.reduced_word()
(4, (2, 1, 3, 2))
>>> inverse(w) == from_word(rs, [2, 3, 1, 2])
True
"""

from __future__ import annotations

import functools
from fractions import Fraction
from math import lcm, prod
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, ConfigurationError, NotAnInversionSet, SelfCheckError
from .root_system import RootSystem, build, classify_cartan, group_order

DEFAULT_CAP = 10 ** 7

__all__ = [
    "WeylElement", "identity", "simple_reflection", "from_word", "multiply",
    "inverse", "inversion_set", "element_from_inversion_set", "enumerate_group",
    "longest_element", "bruhat_leq", "parabolic_decompose", "min_coset_reps",
    "max_parabolic_below", "parabolic_subgroup", "order_of", "is_biconvex",
    "from_one_line", "to_one_line", "reflection", "parse_word", "bits_to_list",
    "DEFAULT_CAP",
]


class WeylElement:
    __slots__ = ("system", "perm", "_length", "_invset", "_hash")

    def __init__(self, system: RootSystem, perm: Sequence[int]):
        self.system = system
        self.perm: tuple[int, ...] = tuple(perm)
        self._length: int | None = None
        self._invset: int | None = None
        self._hash: int | None = None

    @property
    def length(self) -> int:
        if self._length is None:
            n = self.system.num_positive
            self._length = sum(1 for k in self.perm[:n] if k >= n)
        return self._length

    def __len__(self) -> int:
        return self.length

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return multiply(self, other)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, WeylElement) and other.system is self.system
                and other.perm == self.perm)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.perm)
        return self._hash

    def __lt__(self, other: "WeylElement") -> bool:
        return (self.length, self.perm) < (other.length, other.perm)

    def apply(self, root: int) -> int:
        return self.perm[root]

    def is_identity(self) -> bool:
        n = self.system.num_positive
        return all(k == i for i, k in enumerate(self.perm[:n]))

    def has_right_descent(self, node: int) -> bool:
        """``w s_node < w``, i.e. ``w(alpha_node) < 0``."""
        return self.perm[self.system.simple_index[node - 1]] >= self.system.num_positive

    def has_left_descent(self, node: int) -> bool:
        """``s_node w < w``, i.e. ``alpha_node`` is an inversion of ``w``."""
        return bool(inversion_set(self) >> self.system.simple_index[node - 1] & 1)

    def right_descents(self) -> list[int]:
        return [a for a in range(1, self.system.rank + 1) if self.has_right_descent(a)]

    def left_descents(self) -> list[int]:
        return [a for a in range(1, self.system.rank + 1) if self.has_left_descent(a)]

    def reduced_word(self) -> tuple[int, ...]:
        """Lexicographically smallest reduced word."""
        return _reduced_word(self.system, self.perm)

    def support(self) -> set[int]:
        return set(self.reduced_word())

    def __repr__(self) -> str:
        word = ",".join(map(str, self.reduced_word())) or "id"
        return f"<{self.system.name} {word}>"


@functools.lru_cache(maxsize=1 << 16)
def _reduced_word(rs: RootSystem, perm: tuple[int, ...]) -> tuple[int, ...]:
    w = WeylElement(rs, perm)
    word = []
    while True:
        descents = w.left_descents()
        if not descents:
            return tuple(word)
        a = descents[0]
        word.append(a)
        w = multiply(simple_reflection(rs, a), w)


def identity(rs: RootSystem) -> WeylElement:
    return WeylElement(rs, range(rs.num_roots))


def simple_reflection(rs: RootSystem, node: int) -> WeylElement:
    if not 1 <= node <= rs.rank:
        raise ConfigurationError(f"node {node} out of range 1..{rs.rank} for {rs.name}")
    return WeylElement(rs, rs.simple_perm(node))


def reflection(rs: RootSystem, root: int) -> WeylElement:
    return WeylElement(rs, rs.reflection_perm(root))


def multiply(x: WeylElement, y: WeylElement) -> WeylElement:
    if x.system is not y.system:
        raise ConfigurationError("cannot multiply elements of different root systems")
    xp = x.perm
    return WeylElement(x.system, [xp[k] for k in y.perm])


def inverse(x: WeylElement) -> WeylElement:
    out = [0] * len(x.perm)
    for k, img in enumerate(x.perm):
        out[img] = k
    w = WeylElement(x.system, out)
    w._length = x._length
    return w


def from_word(rs: RootSystem, word: Iterable[int]) -> WeylElement:
    perm = list(range(rs.num_roots))
    for a in word:
        if not 1 <= a <= rs.rank:
            raise ConfigurationError(f"node {a} out of range 1..{rs.rank} for {rs.name}")
        s = rs.simple_perm(a)
        perm = [perm[k] for k in s]
    return WeylElement(rs, perm)


def parse_word(text: str) -> list[int]:
    text = text.strip()
    if text in ("", "id", "e"):
        return []
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise ConfigurationError(f"malformed word {text!r}") from exc


def inversion_set(w: WeylElement) -> int:
    """Bitset of positive-root indices in ``Phi_+ cap w(Phi_-)``."""
    if w._invset is None:
        n = w.system.num_positive
        bits = 0
        # beta is an inversion iff w^{-1}(beta) is negative
        for k, img in enumerate(w.perm):
            if k >= n and img < n:
                bits |= 1 << img
        w._invset = bits
    return w._invset


def bits_to_list(bits: int) -> list[int]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


def is_biconvex(rs: RootSystem, bits: int) -> bool:
    """Closed and co-closed under root addition within ``Phi_+``."""
    n = rs.num_positive
    S = rs.sums
    for i in range(n):
        for j in range(i + 1, n):
            k = S[i, j]
            if k < 0:
                continue
            a, b, c = bits >> i & 1, bits >> j & 1, bits >> int(k) & 1
            if a and b and not c:
                return False
            if not a and not b and c:
                return False
    return True


def element_from_inversion_set(rs: RootSystem, bits: int) -> WeylElement:
    """The unique ``w`` with ``I(w) == bits``, found by peeling simple roots."""
    n = rs.num_positive
    if bits >> n:
        raise NotAnInversionSet("bitset has positions outside Phi_+")
    word = []
    current = bits
    while current:
        for a in range(1, rs.rank + 1):
            si = rs.simple_index[a - 1]
            if current >> si & 1:
                break
        else:
            raise NotAnInversionSet("nonempty set contains no simple root")
        s = rs.simple_perm(a)
        nxt = 0
        rest = current & ~(1 << si)
        for k in bits_to_list(rest):
            img = s[k]
            if img >= n:
                raise NotAnInversionSet("peeling produced a negative root")
            nxt |= 1 << img
        word.append(a)
        current = nxt
    w = from_word(rs, word)
    if inversion_set(w) != bits:
        raise NotAnInversionSet("set is not biconvex")
    return w


def order_of(rs: RootSystem, nodes: Iterable[int] | None = None) -> int:
    """Order of ``W`` or of the parabolic subgroup ``W_J`` (1-based nodes)."""
    if nodes is None:
        nodes = range(1, rs.rank + 1)
    idx = [a - 1 for a in nodes]
    if not idx:
        return 1
    sub = rs.cartan[idx][:, idx]
    return prod(group_order(name[0], int(name[1:])) for name, _ in classify_cartan(sub))


def enumerate_group(rs: RootSystem, cap: int = DEFAULT_CAP,
                    nodes: Iterable[int] | None = None) -> Iterator[WeylElement]:
    """All elements of ``W`` (or ``W_J``), by length, lexicographic within a length."""
    nodes = sorted(range(1, rs.rank + 1) if nodes is None else nodes)
    size = order_of(rs, nodes)
    if size > cap:
        raise CapExceeded(f"|W| = {size} exceeds cap {cap} for {rs.name}")
    gens = [rs.simple_perm(a) for a in nodes]
    n = rs.num_positive
    level = [tuple(range(rs.num_roots))]
    while level:
        for p in level:
            yield WeylElement(rs, p)
        nxt = set()
        for p in level:
            for s in gens:
                nxt.add(tuple(p[k] for k in s))
        length = sum(1 for k in level[0][:n] if k >= n) + 1
        level = sorted(q for q in nxt if sum(1 for k in q[:n] if k >= n) == length)


def parabolic_subgroup(rs: RootSystem, nodes: Iterable[int],
                       cap: int = DEFAULT_CAP) -> list[WeylElement]:
    return list(enumerate_group(rs, cap, nodes))


def longest_element(rs: RootSystem, nodes: Iterable[int] | None = None) -> WeylElement:
    """Longest element of ``W`` (or ``W_J``), built by climbing right ascents."""
    nodes = sorted(range(1, rs.rank + 1) if nodes is None else nodes)
    w = identity(rs)
    while True:
        for a in nodes:
            if not w.has_right_descent(a):
                w = multiply(w, simple_reflection(rs, a))
                break
        else:
            return w


@functools.lru_cache(maxsize=1 << 20)
def _leq(rs: RootSystem, xperm: tuple[int, ...], wperm: tuple[int, ...]) -> bool:
    n = rs.num_positive
    x, w = list(xperm), list(wperm)
    lx = sum(1 for k in x[:n] if k >= n)
    lw = sum(1 for k in w[:n] if k >= n)
    if lx > lw:
        return False
    simple = rs.simple_index
    while lw:
        for a, si in enumerate(simple):
            if w[si] >= n:
                break
        s = rs.simple_perm(a + 1)
        w = [w[k] for k in s]
        lw -= 1
        if x[si] >= n:
            x = [x[k] for k in s]
            lx -= 1
        if lx > lw:
            return False
    return lx == 0


def bruhat_leq(x: WeylElement, w: WeylElement) -> bool:
    """Bruhat order ``x <= w`` by the descent recursion (lifting property).

    For a right descent ``s`` of ``w``: if ``xs < x`` then ``x <= w`` iff
    ``xs <= ws``, otherwise ``x <= w`` iff ``x <= ws``.  Memoized per system.
    """
    if x.system is not w.system:
        raise ConfigurationError("elements of different root systems")
    return _leq(x.system, x.perm, w.perm)


def parabolic_decompose(w: WeylElement, J: Iterable[int]) -> tuple[WeylElement, WeylElement]:
    """``w = u v`` with ``u`` in ``W_J`` and ``v`` without left descents in ``J``."""
    J = sorted(set(J))
    rs = w.system
    u_word: list[int] = []
    v = w
    while True:
        for a in J:
            if v.has_left_descent(a):
                u_word.append(a)
                v = multiply(simple_reflection(rs, a), v)
                break
        else:
            return from_word(rs, u_word), v


def _orbit_vector(rs: RootSystem, J: set[int]) -> tuple[int, ...]:
    """Integer vector fixed exactly by ``W_J``: coroot pairings 0 on J, 1 elsewhere."""
    from .root_system import _solve

    G = [[Fraction(2 * int(rs.pairing[i, j]), int(rs.pairing[j, j]))
          for j in range(rs.rank)] for i in range(rs.rank)]
    # lambda = sum c_i alpha_i with <lambda, alpha_j^vee> = target_j
    target = [Fraction(0 if j + 1 in J else 1) for j in range(rs.rank)]
    GT = [[G[i][j] for i in range(rs.rank)] for j in range(rs.rank)]
    c = _solve(GT, target)
    coords = [Fraction(0)] * rs.ambient_dim
    for ci, a in zip(c, rs.simple_roots):
        for k, x in enumerate(a):
            coords[k] += ci * x
    scale = lcm(*(x.denominator for x in coords))
    return tuple(int(x * scale) for x in coords)


def min_coset_reps(rs: RootSystem, J: Iterable[int],
                   cap: int = DEFAULT_CAP) -> list[WeylElement]:
    """Minimal length representatives of ``W_J \\ W`` (no left descents in J).

    Computed as the orbit of a vector with stabiliser ``W_J``, so ``W`` itself
    is never enumerated.  Returned by length, then lexicographically.
    """
    J = set(J)
    size = order_of(rs) // order_of(rs, J)
    if size > cap:
        raise CapExceeded(f"|W_J \\ W| = {size} exceeds cap {cap}")
    lam = _orbit_vector(rs, J)
    seen = {lam: identity(rs)}
    frontier = [lam]
    result = [identity(rs)]
    while frontier:
        nxt = []
        for mu in frontier:
            x = seen[mu]
            for a in range(1, rs.rank + 1):
                alpha = rs.simple_roots[a - 1]
                if sum(p * q for p, q in zip(mu, alpha)) <= 0:
                    continue
                nu = rs.reflect(rs.simple_index[a - 1], mu)
                if nu not in seen:
                    y = multiply(simple_reflection(rs, a), x)
                    seen[nu] = y
                    nxt.append(nu)
        level = sorted(inverse(seen[nu]) for nu in nxt)
        result.extend(level)
        frontier = nxt
    if len(result) != size:
        raise SelfCheckError(f"orbit has {len(result)} points, expected {size}")
    return result


def max_parabolic_below(w: WeylElement, J: Iterable[int],
                        cap: int = 100_000) -> WeylElement:
    """The unique Bruhat-maximal ``m(w, J)`` in ``W_J`` below ``w``."""
    below = [u for u in parabolic_subgroup(w.system, J, cap) if bruhat_leq(u, w)]
    top = max(below)
    if not all(bruhat_leq(u, top) for u in below):
        raise SelfCheckError("no unique maximal element of W_J below w")
    return top


# -- classical one-line notation -----------------------------------------

def _classical(rs: RootSystem) -> str:
    if rs.type_label not in "ABCD" or rs.name[0] not in "ABCD":
        raise ConfigurationError(f"one-line notation needs a classical type, not {rs.name}")
    return rs.type_label


def from_one_line(rs: RootSystem, one_line: Sequence[int]) -> WeylElement:
    """Element acting by ``e_j -> sign(w_j) e_|w_j|``.

    Type ``A_n`` takes a permutation of ``1..n+1``; types B, C, D take signed
    permutations of ``1..n`` (D needs an even number of negative entries).
    """
    letter = _classical(rs)
    seq = [int(x) for x in one_line]
    dim = rs.ambient_dim
    if len(seq) != dim or sorted(abs(x) for x in seq) != list(range(1, dim + 1)):
        raise ConfigurationError(f"{seq} is not a signed permutation of 1..{dim}")
    if letter == "A" and any(x < 0 for x in seq):
        raise ConfigurationError("type A one-line notation has no negative entries")
    if letter == "D" and sum(1 for x in seq if x < 0) % 2:
        raise ConfigurationError("type D needs an even number of negative entries")
    perm = []
    for v in rs.roots:
        img = [0] * dim
        for j, c in enumerate(v):
            if c:
                t = abs(seq[j]) - 1
                img[t] += c if seq[j] > 0 else -c
        perm.append(rs.index_of(img))
    return WeylElement(rs, perm)


def to_one_line(w: WeylElement) -> tuple[int, ...]:
    rs = w.system
    letter = _classical(rs)
    dim = rs.ambient_dim
    out = []
    for j in range(dim):
        if letter in "BC":
            unit = [0] * dim
            unit[j] = 1 if letter == "B" else 2
            img = rs.roots[w.perm[rs.index_of(unit)]]
            t = next(i for i, c in enumerate(img) if c)
            out.append((t + 1) if img[t] > 0 else -(t + 1))
            continue
        k = (j + 1) % dim
        diff = [0] * dim
        diff[j], diff[k] = 1, -1
        a = rs.roots[w.perm[rs.index_of(diff)]]
        if letter == "A":
            t = a.index(1)
            out.append(t + 1)
            continue
        plus = [0] * dim
        plus[j], plus[k] = 1, 1
        b = rs.roots[w.perm[rs.index_of(plus)]]
        img = [x + y for x, y in zip(a, b)]
        t = next(i for i, c in enumerate(img) if c)
        out.append((t + 1) if img[t] > 0 else -(t + 1))
    return tuple(out)
