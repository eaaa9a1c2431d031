"""
Root subsystems ``Delta = span ∩ Phi``, their simple roots and types, and the
flattening map onto the Weyl group of ``Delta``.

A subsystem of rank ``k`` carries an integer basis ``C`` of the orthogonal
complement of its span.  A root ``g`` lies in the span iff ``C g = 0``, and the
rank ``k+1`` subsystems containing ``Delta`` are exactly the classes of the
remaining roots under "``C g`` is parallel to ``C b``".  Growth therefore needs
one integer matrix product per subsystem and no elimination.

Flattening goes through the canonical system of the subsystem's type: each
canonical positive root is matched with the ambient root having the same
simple-root coefficients, so an inversion set restricted to ``Delta`` becomes
an inversion bitmask of the canonical group (a *signature*).
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, ConfigurationError, SelfCheckError
from .group import weyl_group
from .root_system import RootSystem, build, classify_cartan
from .weyl import WeylElement, element_from_inversion_set, inversion_set

STELLAR_TYPES = ("B2", "G2", "A3", "B3", "C3", "D4")
DEFAULT_BUDGET = 2_000_000

__all__ = [
    "Subsystem", "PatternWitness", "STELLAR_TYPES", "span_closure",
    "enumerate_subsystems", "stellar_subsystems", "is_stellar", "canonical",
    "signature", "signatures", "flatten", "flatten_by_peeling",
    "contains_pattern", "element_of_signature",
]


def _primitive(v: np.ndarray) -> tuple[int, ...]:
    """Primitive integer vector on the line of ``v`` with first nonzero entry > 0."""
    g = 0
    for x in v.tolist():
        g = math.gcd(g, int(x))
    w = [int(x) // g for x in v.tolist()]
    for x in w:
        if x:
            return tuple(w) if x > 0 else tuple(-y for y in w)
    return tuple(w)


def _complement(vectors: np.ndarray, dim: int) -> np.ndarray:
    """Integer basis of the orthogonal complement of the rows (exact)."""
    rows = [list(map(int, r)) for r in np.atleast_2d(vectors)]
    # fraction-free row echelon form
    pivots: list[int] = []
    m = [r[:] for r in rows]
    r = 0
    for c in range(dim):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                a, b = m[r][c], m[i][c]
                m[i] = [a * x - b * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    m = m[:r]
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for f in free:
        # scale so every pivot division is exact
        lcm = 1
        for i, c in enumerate(pivots):
            lcm = lcm * abs(m[i][c]) // math.gcd(lcm, abs(m[i][c]))
        v = [0] * dim
        v[f] = lcm
        for i, c in enumerate(pivots):
            v[c] = -m[i][f] * lcm // m[i][c]
        basis.append(_primitive(np.array(v)))
    return np.array(basis, dtype=np.int64).reshape(len(basis), dim)


@dataclass(frozen=True, eq=False)
class Subsystem:
    """``Delta = span ∩ Phi`` inside ``ambient``.

    ``simples`` are ambient positive-root indices in Bourbaki node order when
    ``Delta`` is irreducible (components concatenated otherwise).
    """

    ambient: RootSystem
    delta_plus: int
    simples: tuple[int, ...]
    type_label: str
    complement: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.simples)

    @property
    def positive(self) -> list[int]:
        b, out, i = self.delta_plus, [], 0
        while b:
            if b & 1:
                out.append(i)
            b >>= 1
            i += 1
        return out

    @property
    def roots(self) -> list[int]:
        n = self.ambient.num_positive
        pos = self.positive
        return sorted(pos + [i + n for i in pos])

    @property
    def irreducible(self) -> bool:
        return "x" not in self.type_label

    @property
    def simple_coords(self) -> list[list[int]]:
        return [list(self.ambient.roots[i]) for i in self.simples]

    @functools.cached_property
    def pattern_map(self) -> np.ndarray:
        """``pattern_map[i]`` = ambient index of canonical positive root ``i``."""
        if not self.irreducible:
            raise ConfigurationError(f"{self.type_label} is reducible")
        can = canonical(self.type_label)
        S = np.array(self.simple_coords, dtype=np.int64)
        coords = can.coefficients @ S
        idx = np.array([self.ambient.index_of(tuple(r)) for r in coords.tolist()])
        if (idx < 0).any() or len(idx) != bin(self.delta_plus).count("1"):
            raise SelfCheckError(f"{self.type_label} does not match its canonical system")
        return idx

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Subsystem) and other.ambient is self.ambient
                and other.delta_plus == self.delta_plus)

    def __hash__(self) -> int:
        return hash((id(self.ambient), self.delta_plus))

    def __repr__(self) -> str:
        return f"Subsystem({self.type_label}, simples={list(self.simples)})"


def canonical(type_label: str) -> RootSystem:
    return build(type_label[0], int(type_label[1:]))


def is_stellar(delta: Subsystem | str) -> bool:
    label = delta if isinstance(delta, str) else delta.type_label
    return label in STELLAR_TYPES


def _make(rs: RootSystem, mask: np.ndarray, comp: np.ndarray) -> Subsystem:
    idx = np.flatnonzero(mask)
    S = rs.sums[np.ix_(idx, idx)]
    decomposable = np.zeros(rs.num_positive, dtype=bool)
    decomposable[S[S >= 0]] = True
    simples = [int(i) for i in idx if not decomposable[i]]
    P = rs.root_array[simples]
    gram = P @ P.T
    cartan = 2 * gram // np.diag(gram)[None, :]
    comps = classify_cartan(cartan)
    order = [simples[j] for _, nodes in comps for j in nodes]
    label = "x".join(name for name, _ in comps)
    bits = int(sum(1 << int(i) for i in idx))
    return Subsystem(rs, bits, tuple(order), label, comp)


def span_closure(rs: RootSystem, seeds: Iterable[int]) -> Subsystem:
    """The subsystem cut out of ``rs`` by the span of the seed roots."""
    n = rs.num_positive
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ConfigurationError("span_closure needs at least one root")
    comp = _complement(rs.root_array[seeds], rs.ambient_dim)
    R = rs.root_array[:n]
    mask = (R @ comp.T == 0).all(axis=1) if len(comp) else np.ones(n, dtype=bool)
    return _make(rs, mask, comp)


def _extensions(rs: RootSystem, sub: Subsystem, irreducible: bool = False,
                need_complement: bool = True):
    """``(mask, complement)`` for every subsystem of rank one more containing ``sub``."""
    n = rs.num_positive
    R = rs.root_array[:n]
    C = sub.complement
    P = R @ C.T
    inside = np.zeros(n, dtype=bool)
    inside[sub.positive] = True
    outside = np.flatnonzero(~inside)
    # normalise each projection to a primitive direction, then group rows
    Q = P[outside]
    g = np.gcd.reduce(np.abs(Q), axis=1)
    Q = Q // g[:, None]
    first = Q[np.arange(len(Q)), (Q != 0).argmax(axis=1)]
    Q = Q * np.sign(first)[:, None]
    dirs, labels = np.unique(Q, axis=0, return_inverse=True)
    labels = labels.reshape(-1)
    for d in range(len(dirs)):
        members = outside[labels == d]
        # an irreducible Delta gains an orthogonal A1 exactly when the class is one root
        if irreducible and len(members) == 1:
            continue
        mask = inside.copy()
        mask[members] = True
        if not need_complement:
            yield mask, None
            continue
        p = dirs[d]
        piv = int(np.flatnonzero(p)[0])
        Y = np.zeros((len(p) - 1, len(p)), dtype=np.int64)
        for r, j in enumerate(j for j in range(len(p)) if j != piv):
            Y[r, j], Y[r, piv] = p[piv], -p[j]
        newC = Y @ C
        if len(newC):
            newC = newC // np.gcd.reduce(np.abs(newC), axis=1)[:, None]
        yield mask, newC


_SIZES = {"B2": 4, "G2": 6, "A3": 6, "B3": 9, "C3": 9, "D4": 12}


def enumerate_subsystems(rs: RootSystem, max_rank: int = 4, irreducible: bool = False,
                         budget: int = DEFAULT_BUDGET,
                         types: Iterable[str] | None = None) -> list[Subsystem]:
    """All subsystems of rank ``<= max_rank``, each once, ordered by rank then roots.

    With ``irreducible=True`` only irreducible ones are produced (every
    irreducible subsystem grows from an irreducible one of rank one less).
    ``types`` keeps only the listed labels in the result; growth still passes
    through every intermediate subsystem.  ``budget`` caps the number of
    candidate closures.
    """
    if max_rank > 4:
        raise ConfigurationError("subsystem enumeration is limited to rank 4")
    wanted = set(types) if types is not None else None
    top = min(max_rank, rs.rank)
    n = rs.num_positive
    level: dict[bytes, Subsystem] = {}
    for i in range(n):
        s = span_closure(rs, [i])
        level[np.packbits(_mask_of(s, n)).tobytes()] = s
    result = list(level.values())
    work = 0
    for k in range(2, top + 1):
        last = k == top
        sizes = None
        if last and wanted is not None:
            sizes = {_SIZES.get(t, -1) for t in wanted if int(t[1:]) == k}
        nxt: dict[bytes, Subsystem | None] = {}
        for sub in level.values():
            for mask, comp in _extensions(rs, sub, irreducible, need_complement=not last):
                work += 1
                if work > budget:
                    raise CapExceeded(f"subsystem enumeration exceeded budget {budget}")
                key = np.packbits(mask).tobytes()
                if key in nxt:
                    continue
                if sizes is not None and int(mask.sum()) not in sizes:
                    nxt[key] = None
                    continue
                s = _make(rs, mask, comp)
                nxt[key] = None if irreducible and not s.irreducible else s
        level = {key: s for key, s in nxt.items() if s is not None}
        result.extend(sorted(level.values(), key=lambda s: s.positive))
    if wanted is not None:
        result = [s for s in result if s.type_label in wanted]
    return result


def _mask_of(sub: Subsystem, n: int) -> np.ndarray:
    m = np.zeros(n, dtype=bool)
    m[sub.positive] = True
    return m


@functools.lru_cache(maxsize=None)
def stellar_subsystems(rs: RootSystem) -> tuple[Subsystem, ...]:
    return tuple(enumerate_subsystems(rs, 4, irreducible=True, types=STELLAR_TYPES))


# -- signatures -------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _signature_index(type_label: str) -> dict[int, int]:
    G = weyl_group(canonical(type_label))
    weights = [1 << i for i in range(G.system.num_positive)]
    return {int(np.dot(row.astype(object), weights)): i for i, row in enumerate(G.inv_matrix)}


def signature(w: WeylElement, delta: Subsystem) -> int:
    """Inversion bitmask, in the canonical system, of ``I(w) ∩ Delta+``."""
    bits = inversion_set(w)
    return sum(1 << i for i, a in enumerate(delta.pattern_map.tolist()) if bits >> a & 1)


def signatures(inv: np.ndarray, delta: Subsystem) -> np.ndarray:
    """Vectorised :func:`signature` over rows of a boolean inversion matrix."""
    sub = inv[:, delta.pattern_map].astype(np.int64)
    return sub @ (np.int64(1) << np.arange(sub.shape[1], dtype=np.int64))


def element_of_signature(type_label: str, sig: int) -> WeylElement:
    G = weyl_group(canonical(type_label))
    try:
        return G[_signature_index(type_label)[sig]]
    except KeyError:
        raise SelfCheckError(f"{sig:#x} is not an inversion set of {type_label}") from None


def flatten_by_peeling(w: WeylElement, delta: Subsystem) -> WeylElement:
    return element_from_inversion_set(canonical(delta.type_label), signature(w, delta))


def flatten(w: WeylElement, delta: Subsystem) -> WeylElement:
    """The element of ``W_Delta`` whose inversion set is ``I(w) ∩ Delta+``.

    Looked up among the inversion sets of ``W_Delta`` and cross-checked
    against greedy peeling.
    """
    sig = signature(w, delta)
    sigma = element_of_signature(delta.type_label, sig)
    if sigma != element_from_inversion_set(sigma.system, sig):
        raise SelfCheckError("flattening lookup and peeling disagree")
    return sigma


# -- witnesses -------------------------------------------------------------

@dataclass
class PatternWitness:
    criterion: str
    delta_type: str
    delta_simples: list[list[int]]
    flattened_word: list[int]
    verdict: str = "singular"
    embedding_kind: str | None = None
    images: list[list[int]] | None = None
    dual: bool | None = None
    proper: bool | None = None

    def to_json(self) -> dict:
        out = {"criterion": self.criterion, "delta_type": self.delta_type,
               "delta_simples": self.delta_simples,
               "flattened_word": self.flattened_word, "verdict": self.verdict}
        if self.embedding_kind is not None:
            out.update(embedding_kind=self.embedding_kind, images=self.images,
                       dual=self.dual, proper=self.proper)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict | str) -> "PatternWitness":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(**data)


def contains_pattern(w: WeylElement, stellar_type: str, bad: Iterable[int] | Sequence[int],
                     verdict: str = "singular") -> PatternWitness | None:
    """First stellar subsystem of the given type where ``w`` flattens into ``bad``."""
    bad = set(bad)
    for delta in stellar_subsystems(w.system):
        if delta.type_label != stellar_type:
            continue
        sig = signature(w, delta)
        if sig in bad:
            sigma = element_of_signature(stellar_type, sig)
            return PatternWitness("stellar-pattern", stellar_type, delta.simple_coords,
                                  list(sigma.reduced_word()), verdict)
    return None
