"""Dense Laplacian spectra: pseudoinverse, effective resistance, Fiedler value.

Everything here is exact O(n^3) dense linear algebra; the graphs in this
package have at most a few hundred vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from rarebridge.errors import ContractError, DomainError, InvalidParameterError
from rarebridge.graph import Graph, component_labels, is_connected

__all__ = [
    "ResistanceMap",
    "laplacian",
    "sym_eigendecomposition",
    "pseudoinverse",
    "effective_resistance",
    "weight_map",
    "fiedler_value",
    "relative_spectral_error",
    "format_resistance_dump",
    "write_resistance_dump",
    "CONNECTIVITY_TOL",
]

# lambda_2 at or below this is treated as a disconnected spectrum
CONNECTIVITY_TOL = 1e-8
MAX_EIG_DIM = 512


@dataclass(frozen=True)
class ResistanceMap:
    """Per-edge effective resistance ``r`` and weight ``w = 1 + lam * r``."""

    r: np.ndarray
    lam: float
    w: np.ndarray

    def __post_init__(self):
        for name in ("r", "w"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "lam", float(self.lam))

    def __len__(self):
        return len(self.r)

    def with_lambda(self, lam: float) -> "ResistanceMap":
        lam = _check_lambda(lam)
        return ResistanceMap(self.r, lam, 1.0 + lam * self.r)


def _check_lambda(lam):
    lam = float(lam)
    if not lam >= 0.0 or not np.isfinite(lam):
        raise InvalidParameterError(f"lambda must be a finite value >= 0, got {lam}")
    return lam


def laplacian_from_edges(n: int, eu: np.ndarray, ev: np.ndarray) -> np.ndarray:
    adj = np.zeros((n, n), dtype=np.float64)
    adj[eu, ev] = 1.0
    adj[ev, eu] = 1.0
    lap = -adj
    lap[np.diag_indices(n)] = adj.sum(axis=1)
    return lap


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian ``D - A`` as a dense float array."""
    eu, ev = g.edge_arrays
    return laplacian_from_edges(g.n, eu, ev)


def _check_symmetric(a):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {a.shape}")
    scale = np.abs(a).max() if a.size else 0.0
    if a.size and np.abs(a - a.T).max() > 1e-12 * scale:
        raise ContractError("matrix is not symmetric")
    return a


def sym_eigendecomposition(a) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a symmetric matrix."""
    a = _check_symmetric(a)
    if a.shape[0] > MAX_EIG_DIM:
        raise InvalidParameterError(f"dimension {a.shape[0]} exceeds {MAX_EIG_DIM}")
    vals, vecs = np.linalg.eigh(a)
    return vals, vecs


def pseudoinverse(lap) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a Laplacian.

    Eigenvalues at or below ``1e-9 * n * lambda_max`` are treated as zero.
    """
    vals, vecs = sym_eigendecomposition(lap)
    n = len(vals)
    if n == 0:
        return np.zeros((0, 0))
    lam_max = vals[-1]
    if lam_max <= 0.0:
        return np.zeros((n, n))
    tau = 1e-9 * n * lam_max
    inv = np.zeros_like(vals)
    keep = vals > tau
    inv[keep] = 1.0 / vals[keep]
    lp = (vecs * inv) @ vecs.T
    return 0.5 * (lp + lp.T)


def _separated_pair(g: Graph) -> tuple[int, int]:
    labels = component_labels(g)
    other = int(np.flatnonzero(labels != labels[0])[0])
    return 0, other


def effective_resistance(g: Graph) -> ResistanceMap:
    """Resistance between the endpoints of every edge, with lambda = 0."""
    if not is_connected(g):
        a, b = _separated_pair(g)
        raise DomainError(
            f"graph is disconnected (vertices {a} and {b} lie in different components); "
            "effective resistance is infinite across components"
        )
    lp = pseudoinverse(laplacian(g))
    eu, ev = g.edge_arrays
    diag = np.diag(lp)
    r = diag[eu] + diag[ev] - 2.0 * lp[eu, ev]
    return ResistanceMap(r, 0.0, np.ones_like(r))


def weight_map(g: Graph, lam: float = 2.0) -> ResistanceMap:
    lam = _check_lambda(lam)
    return effective_resistance(g).with_lambda(lam)


def fiedler_from_edges(n: int, eu, ev) -> float:
    vals = np.linalg.eigvalsh(laplacian_from_edges(n, eu, ev))
    return float(vals[1])


def fiedler_value(g: Graph) -> float:
    """Second-smallest Laplacian eigenvalue (algebraic connectivity)."""
    if g.n < 2:
        raise InvalidParameterError("the Fiedler value needs at least two vertices")
    eu, ev = g.edge_arrays
    return fiedler_from_edges(g.n, eu, ev)


def rse_from_lambda2(lam2_true: float, lam2_h: float) -> float:
    return max(0.0, abs(lam2_true - lam2_h) / lam2_true)


def relative_spectral_error(g_true: Graph, h: Graph) -> float:
    """``|lambda_2(G) - lambda_2(H)| / lambda_2(G)``.

    A disconnected ``h`` (by union-find) is assigned ``lambda_2 = 0`` exactly,
    so it scores 1.0 without spectral round-off.
    """
    if h.n != g_true.n:
        raise InvalidParameterError(f"vertex counts differ: {g_true.n} vs {h.n}")
    extra = set(h.edges) - set(g_true.edges)
    if extra:
        raise InvalidParameterError(f"h has edges not in g_true, e.g. {sorted(extra)[0]}")
    if not is_connected(g_true):
        raise DomainError("reference graph is disconnected; relative error undefined")
    lam_true = fiedler_value(g_true)
    lam_h = fiedler_value(h) if is_connected(h) else 0.0
    return rse_from_lambda2(lam_true, lam_h)


def format_resistance_dump(g: Graph, rmap: ResistanceMap) -> str:
    """One line ``edge_index u v r_eff w`` per edge."""
    lines = [
        f"{i} {u} {v} {r:.9f} {w:.9f}"
        for i, ((u, v), r, w) in enumerate(zip(g.edges, rmap.r, rmap.w))
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def write_resistance_dump(g: Graph, rmap: ResistanceMap, path) -> None:
    Path(path).write_text(format_resistance_dump(g, rmap), encoding="utf-8", newline="\n")
