"""
The E8 verification pipeline at desk scale.

``W(E8)`` is never enumerated.  With ``J`` = every node except 1, each
``w`` factors as ``u v`` with ``u`` in ``W_J`` (type D7) and ``v`` one of the
2160 minimal coset representatives.  Only smooth ``u`` matter, so the
candidates are (smooth D7 element) x (representative).  For a candidate the
stellar-pattern verdict is computed over all A3 and D4 subsystems of E8; a
singular verdict must be confirmed by an asymmetry among the outer
coefficients of ``P_w``.

:func:`sample_run` checks a seeded random sample.  :func:`full_run` walks
every pair and only runs when explicitly allowed.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .classical import smooth_mask
from .criteria import pattern_hits
from .errors import ConfigurationError
from .poincare import truncated_asymmetry
from .root_system import RootSystem, build, classify_cartan
from .weyl import WeylElement, from_one_line, from_word, min_coset_reps

E8_J = (2, 3, 4, 5, 6, 7, 8)

__all__ = ["E8_J", "d7_node_map", "smooth_d7", "quotient_reps", "embed_d7",
           "pattern_singular", "SampleReport", "sample_run", "full_run"]


def _e8() -> RootSystem:
    return build("E", 8)


@functools.lru_cache(maxsize=None)
def d7_node_map() -> dict[int, int]:
    """Bourbaki node of D7 -> node of E8 inside ``J``."""
    rs = _e8()
    idx = [a - 1 for a in E8_J]
    ((name, nodes),) = classify_cartan(rs.cartan[np.ix_(idx, idx)])
    if name != "D7":
        raise ConfigurationError(f"parabolic subsystem has type {name}")
    return {i + 1: E8_J[j] for i, j in enumerate(nodes)}


@functools.lru_cache(maxsize=None)
def smooth_d7() -> np.ndarray:
    """One-line notations of the smooth elements of ``W(D7)``."""
    W, ok = smooth_mask("D", 7)
    return W[ok]


@functools.lru_cache(maxsize=None)
def quotient_reps() -> tuple[WeylElement, ...]:
    return tuple(sorted(min_coset_reps(_e8(), E8_J)))


def embed_d7(one_line) -> WeylElement:
    """The element of ``W_J`` matching a D7 signed permutation."""
    u = from_one_line(build("D", 7), [int(x) for x in one_line])
    m = d7_node_map()
    return from_word(_e8(), [m[a] for a in u.reduced_word()])


def _inv_row(w: WeylElement) -> np.ndarray:
    n = w.system.num_positive
    p = np.argsort(np.array(w.perm))
    return p[:n] >= n


def pattern_singular(ws: list[WeylElement]) -> np.ndarray:
    """Stellar-pattern verdicts (True = singular) for a batch of E8 elements."""
    inv = np.array([_inv_row(w) for w in ws])
    return pattern_hits(inv, _e8(), rational=False)


@dataclass
class SampleReport:
    samples: int
    singular: int
    confirmed: int
    max_depth: int
    depth_counts: dict[int, int] = field(default_factory=dict)
    smooth_checked_depth: int = 0
    smooth_asymmetric: int = 0

    @property
    def ok(self) -> bool:
        return self.confirmed == self.singular and self.smooth_asymmetric == 0


def _check(ws: list[WeylElement], depth: int, smooth_depth: int) -> SampleReport:
    verdict = pattern_singular(ws)
    rep = SampleReport(len(ws), int(verdict.sum()), 0, 0, smooth_checked_depth=smooth_depth)
    for w, singular in zip(ws, verdict):
        if singular:
            k = truncated_asymmetry(w, depth)
            if k is not None:
                rep.confirmed += 1
                rep.max_depth = max(rep.max_depth, k)
                rep.depth_counts[k] = rep.depth_counts.get(k, 0) + 1
        elif smooth_depth and truncated_asymmetry(w, smooth_depth) is not None:
            rep.smooth_asymmetric += 1
    return rep


def sample_run(n: int = 1000, seed: int = 0, depth: int = 5, smooth_depth: int = 1) -> SampleReport:
    """Check ``n`` random products ``u v`` (seeded, reproducible).

    Singular verdicts need an asymmetry within ``depth`` coefficients;
    pattern-clean samples must show none within ``smooth_depth``.
    """
    rng = np.random.default_rng(seed)
    us = smooth_d7()
    reps = quotient_reps()
    ws = []
    for _ in range(n):
        u = embed_d7(us[rng.integers(len(us))])
        v = reps[rng.integers(len(reps))]
        ws.append(u * v)
    return _check(ws, depth, smooth_depth)


def full_run(allow: bool = False, depth: int = 5) -> SampleReport:  # pragma: no cover - opt-in
    """Every smooth ``u`` against every representative (about 20 million products)."""
    if not allow:
        raise ConfigurationError("the full E8 run is opt-in: pass allow=True")
    reps = quotient_reps()
    total = SampleReport(0, 0, 0, 0)
    for one_line in smooth_d7():
        u = embed_d7(one_line)
        part = _check([u * v for v in reps], depth, 0)
        total.samples += part.samples
        total.singular += part.singular
        total.confirmed += part.confirmed
        total.max_depth = max(total.max_depth, part.max_depth)
        for k, c in part.depth_counts.items():
            total.depth_counts[k] = total.depth_counts.get(k, 0) + c
    return total
