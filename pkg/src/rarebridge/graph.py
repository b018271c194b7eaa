"""Simple undirected graphs, exact connectivity, and the adversarial generators.

Edges carry a stable integer index (their position in ``Graph.edges``); every
per-edge quantity in the package (frequencies, resistances, scores) is an
array aligned with that index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from rarebridge import _backend
from rarebridge.errors import EdgeListFormatError, InvalidParameterError

__all__ = [
    "Graph",
    "FrequencyModel",
    "GeneratedInstance",
    "is_connected",
    "component_labels",
    "gen_barbell",
    "gen_chain_sbm",
    "gen_visible_barbell",
    "visible_bridge_frequency",
    "read_edge_list",
    "write_edge_list",
    "read_frequencies",
    "write_frequencies",
]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Pairs are normalised to ``u < v`` but keep the order they were given in,
    so edge ``i`` is always ``edges[i]``.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    _eu: np.ndarray = field(init=False, repr=False, compare=False)
    _ev: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidParameterError(f"vertex count must be a positive integer, got {self.n!r}")
        normalised = []
        seen = set()
        for pair in self.edges:
            u, v = (int(x) for x in pair)
            if u == v:
                raise InvalidParameterError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= self.n:
                raise InvalidParameterError(f"edge ({u}, {v}) out of range for n={self.n}")
            if (u, v) in seen:
                raise InvalidParameterError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            normalised.append((u, v))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", tuple(normalised))
        eu = np.array([e[0] for e in normalised], dtype=np.int64)
        ev = np.array([e[1] for e in normalised], dtype=np.int64)
        eu.flags.writeable = False
        ev.flags.writeable = False
        object.__setattr__(self, "_eu", eu)
        object.__setattr__(self, "_ev", ev)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Read-only ``(u, v)`` endpoint arrays indexed by edge."""
        return self._eu, self._ev

    def subgraph(self, keep: Iterable[int]) -> "Graph":
        """Same vertex set, only the edges whose indices are in ``keep``.

        Surviving edges are re-indexed in ascending order of their old index.
        """
        idx = sorted(set(int(i) for i in keep))
        return Graph(self.n, tuple(self.edges[i] for i in idx))

    def without(self, drop: Iterable[int]) -> "Graph":
        drop = set(int(i) for i in drop)
        return self.subgraph(i for i in range(self.m) if i not in drop)


@dataclass(frozen=True)
class FrequencyModel:
    """Per-edge marginal appearance probability, aligned with edge indices."""

    freq: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(f) for f in self.freq)
        for i, f in enumerate(values):
            if not 0.0 <= f <= 1.0:
                raise InvalidParameterError(f"frequency of edge {i} is {f}, outside [0, 1]")
        object.__setattr__(self, "freq", values)

    def __len__(self):
        return len(self.freq)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.freq, dtype=np.float64)


@dataclass(frozen=True)
class GeneratedInstance:
    graph: Graph
    freq: FrequencyModel
    bridge_edges: frozenset[int]

    def __post_init__(self):
        if len(self.freq) != self.graph.m:
            raise InvalidParameterError(
                f"frequency model covers {len(self.freq)} edges, graph has {self.graph.m}"
            )
        bad = [b for b in self.bridge_edges if not 0 <= b < self.graph.m]
        if bad:
            raise InvalidParameterError(f"bridge indices out of range: {sorted(bad)}")
        object.__setattr__(self, "bridge_edges", frozenset(int(b) for b in self.bridge_edges))


def is_connected(g: Graph) -> bool:
    """True iff ``g`` has exactly one connected component (union-find, exact)."""
    eu, ev = g.edge_arrays
    return _backend.kernels.count_components(g.n, eu, ev) == 1


def component_labels(g: Graph) -> np.ndarray:
    """Component representative for each vertex (smallest vertex in its component)."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    return np.array([find(x) for x in range(g.n)], dtype=np.int64)


def _check_probability(name, value):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidParameterError(f"{name} must lie in [0, 1], got {value}")
    return value


def _check_size(name, value, minimum):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < minimum:
        raise InvalidParameterError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def _clique_chain(sizes: Sequence[int], clique_freq: float, bridge_freq: float) -> GeneratedInstance:
    # Bridges join the last vertex of one clique to the first vertex of the
    # next; emitting edges clique by clique keeps the list in ascending order.
    edges = []
    freq = []
    bridges = []
    offset = 0
    for pos, size in enumerate(sizes):
        verts = range(offset, offset + size)
        for u, v in combinations(verts, 2):
            edges.append((u, v))
            freq.append(clique_freq)
        if pos + 1 < len(sizes):
            bridges.append(len(edges))
            edges.append((offset + size - 1, offset + size))
            freq.append(bridge_freq)
        offset += size
    return GeneratedInstance(Graph(offset, tuple(edges)), FrequencyModel(tuple(freq)), frozenset(bridges))


def gen_barbell(clique_size: int, clique_freq: float = 0.95, bridge_freq: float = 0.05) -> GeneratedInstance:
    """Two copies of K_s joined by a single bridge ``(s-1, s)``."""
    s = _check_size("clique_size", clique_size, 2)
    return _clique_chain(
        [s, s],
        _check_probability("clique_freq", clique_freq),
        _check_probability("bridge_freq", bridge_freq),
    )


def gen_chain_sbm(
    clique_sizes: Sequence[int], clique_freq: float = 0.95, bridge_freq: float = 0.05
) -> GeneratedInstance:
    """Complete blocks of the given sizes laid out in a path, one bridge between neighbours."""
    sizes = list(clique_sizes)
    if len(sizes) < 2:
        raise InvalidParameterError(f"need at least two cliques, got {len(sizes)}")
    sizes = [_check_size("clique size", s, 2) for s in sizes]
    return _clique_chain(
        sizes,
        _check_probability("clique_freq", clique_freq),
        _check_probability("bridge_freq", bridge_freq),
    )


def visible_bridge_frequency(k: int) -> float:
    """Bridge frequency after thickening by ``k``: ``min(1, k/4)``."""
    k = _check_size("k", k, 1)
    return min(1.0, k / 4.0)


def gen_visible_barbell(clique_size: int, k: int, clique_freq: float = 0.95) -> GeneratedInstance:
    """Barbell whose bridge frequency is raised by thickening factor ``k``.

    The structure is always a single bridge, so its resistance stays 1;
    only the frequency attached to it changes with ``k``.
    """
    return gen_barbell(clique_size, clique_freq, visible_bridge_frequency(k))


# -- edge-list text format ---------------------------------------------------


def _parse_ints(text, path, lineno, count):
    parts = text.split()
    if len(parts) != count:
        raise EdgeListFormatError(f"expected {count} integers, got {text.strip()!r}", path, lineno)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise EdgeListFormatError(f"non-integer token in {text.strip()!r}", path, lineno) from None


def read_edge_list(path) -> Graph:
    """Parse ``n m`` followed by ``m`` lines of ``u v`` (0-based)."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EdgeListFormatError("empty file", path, 1)
    n, m = _parse_ints(lines[0], path, 1, 2)
    if len(lines) - 1 != m:
        raise EdgeListFormatError(f"header declares {m} edges, found {len(lines) - 1}", path, 1)
    edges = []
    for lineno, text in enumerate(lines[1:], start=2):
        u, v = _parse_ints(text, path, lineno, 2)
        edges.append((u, v))
        try:
            Graph(max(n, 1), ((u, v),))
        except InvalidParameterError as exc:
            raise EdgeListFormatError(str(exc), path, lineno) from None
    try:
        return Graph(n, tuple(edges))
    except InvalidParameterError as exc:
        raise EdgeListFormatError(str(exc), path) from None


def write_edge_list(g: Graph, path) -> None:
    rows = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8", newline="\n")


def read_frequencies(path, m: int | None = None) -> FrequencyModel:
    path = Path(path)
    values = []
    for lineno, text in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not text.strip():
            continue
        try:
            values.append(float(text))
        except ValueError:
            raise EdgeListFormatError(f"not a number: {text.strip()!r}", path, lineno) from None
        if not 0.0 <= values[-1] <= 1.0:
            raise EdgeListFormatError(f"probability {values[-1]} outside [0, 1]", path, lineno)
    if m is not None and len(values) != m:
        raise EdgeListFormatError(f"expected {m} frequencies, found {len(values)}", path)
    return FrequencyModel(tuple(values))


def write_frequencies(freq: FrequencyModel, path) -> None:
    Path(path).write_text(
        "".join(f"{f!r}\n" for f in freq.freq), encoding="utf-8", newline="\n"
    )
