# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: union-find connectivity and the SGD trajectory.

Mirrors ``_pykernels`` function for function.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()


cdef inline Py_ssize_t _find(Py_ssize_t[::1] parent, Py_ssize_t x) noexcept nogil:
    cdef Py_ssize_t root = x, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


cdef Py_ssize_t _components(Py_ssize_t n, const cnp.int64_t[::1] eu,
                            const cnp.int64_t[::1] ev, const cnp.uint8_t[::1] keep,
                            bint use_mask, Py_ssize_t[::1] parent) noexcept nogil:
    cdef Py_ssize_t i, ru, rv, comps = n
    for i in range(n):
        parent[i] = i
    for i in range(eu.shape[0]):
        if use_mask and not keep[i]:
            continue
        ru = _find(parent, eu[i])
        rv = _find(parent, ev[i])
        if ru != rv:
            parent[rv] = ru
            comps -= 1
            if comps == 1:
                break
    return comps


def count_components(Py_ssize_t n, eu, ev, keep=None):
    cdef const cnp.int64_t[::1] u = np.ascontiguousarray(eu, dtype=np.int64)
    cdef const cnp.int64_t[::1] v = np.ascontiguousarray(ev, dtype=np.int64)
    cdef Py_ssize_t[::1] parent = np.empty(n, dtype=np.intp)
    cdef const cnp.uint8_t[::1] mask
    if keep is None:
        mask = np.zeros(1, dtype=np.uint8)
        return _components(n, u, v, mask, False, parent)
    mask = np.ascontiguousarray(keep, dtype=np.uint8)
    return _components(n, u, v, mask, True, parent)


def batch_connected(Py_ssize_t n, eu, ev, keep_masks):
    cdef const cnp.int64_t[::1] u = np.ascontiguousarray(eu, dtype=np.int64)
    cdef const cnp.int64_t[::1] v = np.ascontiguousarray(ev, dtype=np.int64)
    cdef const cnp.uint8_t[:, ::1] masks = np.ascontiguousarray(keep_masks, dtype=np.uint8)
    cdef Py_ssize_t[::1] parent = np.empty(max(n, 1), dtype=np.intp)
    out = np.zeros(masks.shape[0], dtype=bool)
    cdef cnp.uint8_t[::1] res = out.view(np.uint8)
    cdef Py_ssize_t row
    with nogil:
        for row in range(masks.shape[0]):
            res[row] = _components(n, u, v, masks[row], True, parent) == 1
    return out


cdef inline double _sigmoid(double theta) noexcept nogil:
    cdef double z
    if theta >= 0.0:
        return 1.0 / (1.0 + exp(-theta))
    z = exp(theta)
    return z / (1.0 + z)


def sgd_trajectory(positives, Py_ssize_t batch, double omega, double eta, double theta0):
    cdef const cnp.int64_t[::1] pos = np.ascontiguousarray(positives, dtype=np.int64)
    cdef Py_ssize_t steps = pos.shape[0], t
    out = np.empty(steps + 1, dtype=np.float64)
    cdef double[::1] probs = out
    cdef double theta = theta0, b = <double>batch, p, g, kk
    with nogil:
        p = _sigmoid(theta)
        probs[0] = p
        for t in range(steps):
            kk = <double>pos[t]
            g = ((b - kk) * p + kk * omega * (p - 1.0)) / b
            theta = theta - eta * g
            p = _sigmoid(theta)
            probs[t + 1] = p
    return out
