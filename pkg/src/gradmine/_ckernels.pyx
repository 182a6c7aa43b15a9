# cython: language_level=3
"""Compiled order-matrix kernels. Mirrors ``gradmine._pykernels`` exactly."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def item_matrix(const double[::1] values, bint up):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t a, b
    cdef double v
    out = np.zeros((n, n), dtype=np.uint8)
    cdef unsigned char[:, ::1] m = out
    with nogil:
        if up:
            for a in range(n):
                v = values[a]
                for b in range(n):
                    m[a, b] = values[b] > v
        else:
            for a in range(n):
                v = values[a]
                for b in range(n):
                    m[a, b] = values[b] < v
    return out


def and_count(const unsigned char[:, ::1] m1, const unsigned char[:, ::1] m2):
    cdef Py_ssize_t n = m1.shape[0]
    cdef Py_ssize_t k = m1.shape[1]
    if m2.shape[0] != n or m2.shape[1] != k:
        raise ValueError("matrix dimensions differ")
    out = np.empty((n, k), dtype=np.uint8)
    if n * k == 0:
        return out, 0
    cdef unsigned char[:, ::1] o = out
    cdef const unsigned char* p1 = &m1[0, 0]
    cdef const unsigned char* p2 = &m2[0, 0]
    cdef unsigned char* po = &o[0, 0]
    cdef Py_ssize_t i, size = n * k
    with nogil:
        for i in range(size):
            po[i] = p1[i] & p2[i]
    return out, _sum_bytes(po, size)


cdef long long _sum_bytes(const unsigned char* p, Py_ssize_t size) noexcept nogil:
    # entries are 0/1; 8-bit-safe partial sums let gcc vectorize the inner loop
    cdef long long total = 0
    cdef unsigned int part
    cdef Py_ssize_t i = 0, j, stop
    while i < size:
        stop = i + 255 if i + 255 < size else size
        part = 0
        for j in range(i, stop):
            part += p[j] != 0
        total += part
        i = stop
    return total


def count_ones(const unsigned char[:, ::1] m):
    if m.shape[0] * m.shape[1] == 0:
        return 0
    cdef long long total
    with nogil:
        total = _sum_bytes(&m[0, 0], m.shape[0] * m.shape[1])
    return total


def triangle_counts(const unsigned char[:, ::1] m):
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t a, b
    cdef long long upper = 0, lower = 0
    if m.shape[1] != n:
        raise ValueError("order matrix must be square")
    with nogil:
        for a in range(n):
            for b in range(a + 1, n):
                upper += m[a, b] != 0
                lower += m[b, a] != 0
    return upper, lower


def chain_lengths(const unsigned char[:, ::1] m):
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t a, b, head = 0, tail = 0, u
    cdef long long best_succ
    if m.shape[1] != n:
        raise ValueError("order matrix must be square")
    best = np.zeros(n, dtype=np.int64)
    cdef long long[::1] bst = best
    cdef long long[::1] outdeg = np.zeros(n, dtype=np.int64)
    cdef long long[::1] queue = np.zeros(n, dtype=np.int64)
    with nogil:
        for a in range(n):
            for b in range(n):
                if m[a, b]:
                    outdeg[a] += 1
        for a in range(n):
            if outdeg[a] == 0:
                queue[tail] = a
                tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            best_succ = 0
            for b in range(n):
                if m[u, b] and bst[b] > best_succ:
                    best_succ = bst[b]
            bst[u] = best_succ + 1
            for a in range(n):
                if m[a, u]:
                    outdeg[a] -= 1
                    if outdeg[a] == 0:
                        queue[tail] = a
                        tail += 1
    if tail != n:
        raise ValueError("order matrix contains a cycle")
    return best
