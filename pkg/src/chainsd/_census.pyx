# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled census and closure kernels; see ``_kernels_py`` for the reference versions."""

import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector

cnp.import_array()


cdef struct State:
    const int* add
    const int* mul
    const int* neg
    int N
    int q
    int level
    int Q
    int n
    bint so_only
    int* vals
    int* rows
    int* qp
    vector[int]* out


cdef inline int _add(State* s, int a, int b) nogil:
    return s.add[a * s.N + b] % s.Q


cdef inline int _mul(State* s, int a, int b) nogil:
    return s.mul[a * s.N + b] % s.Q


cdef int _dot(State* s, int* a, int* b) nogil:
    cdef int acc = 0, t
    for t in range(s.n):
        if a[t] and b[t]:
            acc = _add(s, acc, _mul(s, a[t], b[t]))
    return acc


cdef bint _howell_ok(State* s, int j, int* row, int v, int* w) nogil:
    cdef int k, t, x, vk, c
    cdef int sh
    if v == 0:
        return True
    sh = s.qp[s.level - v]
    for t in range(s.n):
        w[t] = (row[t] * sh) % s.Q
    for k in range(j + 1, s.n):
        x = w[k]
        if x == 0:
            continue
        vk = s.vals[k]
        if vk == s.level or x % s.qp[vk] != 0:
            return False
        c = s.neg[x // s.qp[vk]]
        for t in range(k, s.n):
            if s.rows[k * s.n + t]:
                w[t] = _add(s, w[t], _mul(s, c, s.rows[k * s.n + t]))
    return True


cdef void _rec(State* s, int j) nogil:
    cdef int n = s.n, k, t, v, r
    cdef long long total, code, cc
    cdef int row[32]
    cdef int w[32]
    cdef int radix[32]
    cdef bint bad
    if j < 0:
        for t in range(n):
            s.out.push_back(s.vals[t])
        for t in range(n * n):
            s.out.push_back(s.rows[t])
        return
    s.vals[j] = s.level
    for t in range(n):
        s.rows[j * n + t] = 0
    _rec(s, j - 1)
    total = 1
    for k in range(j + 1, n):
        radix[k] = s.qp[s.vals[k]] if s.vals[k] < s.level else s.Q
        total *= radix[k]
    for v in range(s.level):
        for code in range(total):
            for t in range(n):
                row[t] = 0
            row[j] = s.qp[v]
            cc = code
            for k in range(j + 1, n):
                row[k] = <int>(cc % radix[k])
                cc //= radix[k]
            if s.so_only:
                if _dot(s, row, row) != 0:
                    continue
                bad = False
                for k in range(j + 1, n):
                    if s.vals[k] < s.level and _dot(s, row, &s.rows[k * n]) != 0:
                        bad = True
                        break
                if bad:
                    continue
            if not _howell_ok(s, j, row, v, w):
                continue
            s.vals[j] = v
            for t in range(n):
                s.rows[j * n + t] = row[t]
            _rec(s, j - 1)
        s.vals[j] = s.level
        for t in range(n):
            s.rows[j * n + t] = 0


def census(cnp.ndarray add, cnp.ndarray mul, cnp.ndarray neg, int q, int level, int n, bint so_only):
    if n > 32:
        raise ValueError("census supports n <= 32")
    cdef cnp.ndarray[int, ndim=2, mode="c"] A = np.ascontiguousarray(add, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=2, mode="c"] M = np.ascontiguousarray(mul, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] NG = np.ascontiguousarray(neg, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] vals = np.full(n, level, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] rows = np.zeros(n * n, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] qp = np.array([q ** i for i in range(level + 1)], dtype=np.intc)
    cdef vector[int] out
    cdef State s
    s.add = &A[0, 0]
    s.mul = &M[0, 0]
    s.neg = &NG[0]
    s.N = A.shape[0]
    s.q = q
    s.level = level
    s.Q = q ** level
    s.n = n
    s.so_only = so_only
    s.vals = &vals[0]
    s.rows = &rows[0]
    s.qp = &qp[0]
    s.out = &out
    with nogil:
        _rec(&s, n - 1)
    width = n + n * n
    cdef Py_ssize_t count = out.size() // width
    res = np.empty((count, width), dtype=np.int32)
    cdef int[:, ::1] rv = res
    cdef Py_ssize_t i, t
    for i in range(count):
        for t in range(width):
            rv[i, t] = out[i * width + t]
    return res


def closure(cnp.ndarray add, cnp.ndarray mul, int q, int level, rows, ranges):
    cdef cnp.ndarray[int, ndim=2, mode="c"] A = np.ascontiguousarray(add, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=2, mode="c"] M = np.ascontiguousarray(mul, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=2, mode="c"] R = np.ascontiguousarray(np.asarray(rows).reshape(len(ranges), -1), dtype=np.intc)
    cdef cnp.ndarray[long long, ndim=1, mode="c"] rg = np.ascontiguousarray(ranges, dtype=np.longlong)
    cdef int k = R.shape[0]
    cdef int n = R.shape[1]
    cdef int N = A.shape[0]
    cdef int Q = q ** level
    cdef long long total = 1
    cdef int i, t
    for i in range(k):
        total *= rg[i]
    res = np.zeros((total, n), dtype=np.int32)
    cdef int[:, ::1] out = res
    cdef long long idx, c
    cdef int coef, acc
    with nogil:
        for idx in range(total):
            c = idx
            for t in range(n):
                out[idx, t] = 0
            for i in range(k):
                coef = <int>(c % rg[i])
                c //= rg[i]
                if coef:
                    for t in range(n):
                        if R[i, t]:
                            out[idx, t] = A[out[idx, t], M[coef, R[i, t]] % Q] % Q
    return res
