"""Edge scoring strategies and budgeted top-score selection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from rarebridge.errors import InvalidParameterError
from rarebridge.graph import GeneratedInstance, Graph
from rarebridge.spectral import ResistanceMap

__all__ = [
    "STRATEGIES",
    "DEFAULT_LAMBDA",
    "Strategy",
    "ScoredEdges",
    "score_edges",
    "budget",
    "rank_edges",
    "select_top",
    "sparsify",
]

STRATEGIES = ("Random", "Standard", "Weighted", "Oracle")
DEFAULT_LAMBDA = 2.0

# Scores closer than this (relative to max(1, |score|)) share a tie class.
# Mathematically equal resistances come out of the pseudoinverse differing
# in the last few ulps; without this they would be ordered by round-off
# instead of by the random tie-break key.
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class Strategy:
    tag: str
    lam: float = DEFAULT_LAMBDA

    def __post_init__(self):
        if self.tag not in STRATEGIES:
            raise InvalidParameterError(f"unknown strategy {self.tag!r}; expected one of {STRATEGIES}")
        lam = float(self.lam)
        if not lam >= 0.0 or math.isnan(lam):
            raise InvalidParameterError(f"lambda must be >= 0, got {lam}")
        object.__setattr__(self, "lam", lam)


@dataclass(frozen=True)
class ScoredEdges:
    scores: np.ndarray
    tiebreak: np.ndarray

    def __len__(self):
        return len(self.scores)


def score_edges(
    strategy: Strategy, inst: GeneratedInstance, rmap: ResistanceMap, rng: np.random.Generator
) -> ScoredEdges:
    """Score every template edge.

    Consumes ``m`` uniforms for the tie-break key, then (Random only)
    another ``m`` for the scores themselves.
    """
    m = inst.graph.m
    if len(rmap) != m:
        raise InvalidParameterError(f"resistance map covers {len(rmap)} edges, graph has {m}")
    tiebreak = rng.random(m)
    if strategy.tag == "Random":
        scores = rng.random(m)
    elif strategy.tag == "Standard":
        scores = inst.freq.as_array()
    elif strategy.tag == "Weighted":
        scores = inst.freq.as_array() + strategy.lam * rmap.r
    else:
        scores = np.array(rmap.r, dtype=np.float64)
    return ScoredEdges(scores, tiebreak)


def budget(rho: float, m: int) -> int:
    """Number of edges kept at density ``rho``: round-half-up of ``rho * m``, in [1, m]."""
    rho = float(rho)
    if not 0.0 < rho <= 1.0:
        raise InvalidParameterError(f"rho must lie in (0, 1], got {rho}")
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    return min(m, max(1, math.floor(rho * m + 0.5)))


def _tie_classes(scores: np.ndarray) -> np.ndarray:
    """Class id per edge; 0 is the highest score, equal-within-tolerance share an id."""
    order = np.argsort(-scores, kind="stable")
    ranked = scores[order]
    gaps = ranked[:-1] - ranked[1:]
    tol = TIE_RTOL * np.maximum(1.0, np.abs(ranked[:-1]))
    cls_sorted = np.concatenate(([0], np.cumsum(gaps > tol)))
    classes = np.empty(len(scores), dtype=np.int64)
    classes[order] = cls_sorted
    return classes


def rank_edges(scored: ScoredEdges) -> np.ndarray:
    """Edge indices best-first under (score, tiebreak), both descending."""
    if len(scored) == 0:
        return np.zeros(0, dtype=np.int64)
    classes = _tie_classes(np.asarray(scored.scores, dtype=np.float64))
    # lexsort: last key is primary
    return np.lexsort((-np.asarray(scored.tiebreak), classes))


def select_top(scored: ScoredEdges, b: int) -> np.ndarray:
    """Sorted indices of the ``b`` best edges."""
    m = len(scored)
    if not 1 <= b <= m:
        raise InvalidParameterError(f"budget {b} outside [1, {m}]")
    return np.sort(rank_edges(scored)[:b])


def sparsify(
    inst: GeneratedInstance,
    rmap: ResistanceMap,
    strategy: Strategy,
    rho: float,
    rng: np.random.Generator,
) -> Graph:
    scored = score_edges(strategy, inst, rmap, rng)
    keep = select_top(scored, budget(rho, inst.graph.m))
    return inst.graph.subgraph(keep.tolist())
