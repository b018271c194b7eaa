"""Pure-Python implementations of the hot loops.

Drop-in twin of ``_ckernels``; used when the extension is not built. The
floating-point operation order in ``sgd_trajectory`` matches the compiled
version exactly, so both backends produce bit-identical traces.
"""

import math

import numpy as np


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def count_components(n, eu, ev, keep=None):
    """Number of connected components of the graph on ``n`` vertices.

    ``keep`` optionally masks which of the edges ``(eu[i], ev[i])`` are present.
    """
    parent = list(range(n))
    components = n
    eu = eu.tolist() if hasattr(eu, "tolist") else list(eu)
    ev = ev.tolist() if hasattr(ev, "tolist") else list(ev)
    mask = None if keep is None else np.asarray(keep).tolist()
    for i in range(len(eu)):
        if mask is not None and not mask[i]:
            continue
        ru = _find(parent, eu[i])
        rv = _find(parent, ev[i])
        if ru != rv:
            parent[rv] = ru
            components -= 1
            if components == 1:
                break
    return components


def batch_connected(n, eu, ev, keep_masks):
    """Row-wise connectivity of a (trials, m) 0/1 edge mask matrix."""
    keep_masks = np.asarray(keep_masks, dtype=np.uint8)
    out = np.zeros(keep_masks.shape[0], dtype=bool)
    for row in range(keep_masks.shape[0]):
        out[row] = count_components(n, eu, ev, keep_masks[row]) == 1
    return out


def _sigmoid(theta):
    if theta >= 0.0:
        return 1.0 / (1.0 + math.exp(-theta))
    z = math.exp(theta)
    return z / (1.0 + z)


def sgd_trajectory(positives, batch, omega, eta, theta0):
    """Predicted probabilities of a single-logit SGD run.

    ``positives[t]`` is the number of ``y=1`` labels in the batch of step t.
    Returns an array of length ``len(positives) + 1`` starting at sigmoid(theta0).
    """
    positives = np.asarray(positives, dtype=np.int64).tolist()
    probs = np.empty(len(positives) + 1, dtype=np.float64)
    theta = float(theta0)
    b = float(batch)
    p = _sigmoid(theta)
    probs[0] = p
    for t, k in enumerate(positives):
        kk = float(k)
        g = ((b - kk) * p + kk * omega * (p - 1.0)) / b
        theta = theta - eta * g
        p = _sigmoid(theta)
        probs[t + 1] = p
    return probs
