"""Independent reference computations used by the tests.

Nothing here imports the package's spectral, sparsify or protocol code;
resistances come from spanning-tree counts in exact arithmetic and trials
are re-run with plain Python sorting and BFS.
"""

from collections import deque
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

M64 = (1 << 64) - 1


def _acyclic(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def spanning_tree_counts(n, edges):
    """(total trees, per-edge tree counts) by enumerating every (n-1)-subset."""
    per_edge = [0] * len(edges)
    total = 0
    for subset in combinations(range(len(edges)), n - 1):
        if _acyclic(n, [edges[i] for i in subset]):
            total += 1
            for i in subset:
                per_edge[i] += 1
    return total, per_edge


def resistance_by_enumeration(n, edges):
    total, per_edge = spanning_tree_counts(n, edges)
    return [Fraction(c, total) for c in per_edge]


def _det_int(mat):
    """Exact integer determinant (Bareiss)."""
    a = [row[:] for row in mat]
    size = len(a)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _int_laplacian(n, edges):
    lap = [[0] * n for _ in range(n)]
    for u, v in edges:
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    return lap


def resistance_by_kirchhoff(n, edges):
    """R(u,v) = det(L minus rows/cols u,v) / det(L minus row/col 0), exactly."""
    lap = _int_laplacian(n, edges)
    trees = _det_int([row[1:] for row in lap[1:]])
    out = []
    for u, v in edges:
        keep = [i for i in range(n) if i not in (u, v)]
        minor = _det_int([[lap[i][j] for j in keep] for i in keep])
        out.append(Fraction(minor, trees))
    return out


def bfs_connected(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == n


def lambda2(n, edges):
    lap = np.array(_int_laplacian(n, edges), dtype=float)
    return float(np.sort(np.linalg.eigvals(lap).real)[1])


def _splitmix(x):
    z = (x + 0x9E3779B97F4A7C15) & M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return z ^ (z >> 31)


def trial_stream(seed, index):
    return np.random.Generator(np.random.PCG64(_splitmix(seed ^ _splitmix(index))))


def brute_force_protocol(n, edges, freq, strategies, rho, lam, trials, seed):
    """Re-run the sparsification protocol with exact rational scores.

    Returns ``{tag: (connected_count, rse_list)}``.
    """
    m = len(edges)
    b = min(m, max(1, int(Fraction(rho).limit_denominator(10**6) * m + Fraction(1, 2))))
    res = resistance_by_kirchhoff(n, edges)
    fr = [Fraction(f).limit_denominator(10**6) for f in freq]
    lam_q = Fraction(lam).limit_denominator(10**6)
    l2_true = lambda2(n, edges)
    out = {}
    for tag in strategies:
        connected = 0
        rses = []
        for t in range(trials):
            rng = trial_stream(seed, t)
            tiebreak = rng.random(m)
            if tag == "Random":
                scores = list(rng.random(m))
            elif tag == "Standard":
                scores = fr
            elif tag == "Weighted":
                scores = [f + lam_q * r for f, r in zip(fr, res)]
            else:
                scores = res
            order = sorted(range(m), key=lambda i: (-scores[i], -tiebreak[i]))
            kept = [edges[i] for i in order[:b]]
            if bfs_connected(n, kept):
                connected += 1
                rses.append(abs(l2_true - lambda2(n, kept)) / l2_true)
            else:
                rses.append(1.0)
        out[tag] = (connected, rses)
    return out


def barbell_edges(s):
    edges = [(u, v) for u, v in combinations(range(s), 2)]
    edges.append((s - 1, s))
    edges += [(u, v) for u, v in combinations(range(s, 2 * s), 2)]
    return edges


def connected_corpus(count, seed, max_n=8, max_subsets=20000):
    """Random connected simple graphs on 2..max_n vertices, as (n, edges)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(2, max_n + 1))
        pairs = list(combinations(range(n), 2))
        keep = rng.random(len(pairs)) < rng.uniform(0.2, 0.9)
        edges = [p for p, k in zip(pairs, keep) if k]
        if not edges or not bfs_connected(n, edges):
            continue
        if comb(len(edges), n - 1) > max_subsets:
            continue
        out.append((n, edges))
    return out
