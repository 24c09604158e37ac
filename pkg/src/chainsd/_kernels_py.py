"""Pure-Python/numpy versions of the compiled kernels in ``_census.pyx``.

Both modules expose the same two functions with identical outputs; the
package picks the compiled one when it imports.
"""

from __future__ import annotations

import numpy as np


def census(add: np.ndarray, mul: np.ndarray, neg: np.ndarray, q: int, level: int, n: int, so_only: bool) -> np.ndarray:
    """Every submodule of R_l^n as its canonical Howell form.

    Each output row is ``vals (n) + rows (n*n)``: vals[j] is the leading
    valuation at column j (``level`` when absent) and row j of the matrix is
    the generator pivoting at column j (zero when absent).
    """
    A = add.tolist()
    M = mul.tolist()
    NG = neg.tolist()
    Q = q**level
    qp = [q**i for i in range(level + 1)]
    vals = [level] * n
    rows = [[0] * n for _ in range(n)]
    out: list[list[int]] = []

    def dot(a, b):
        acc = 0
        for x, y in zip(a, b):
            if x and y:
                acc = A[acc][M[x][y]]
        return acc % Q

    def howell_ok(j: int, row: list[int], v: int) -> bool:
        if v == 0:
            return True
        sh = qp[level - v]
        w = [(x * sh) % Q for x in row]
        for k in range(j + 1, n):
            x = w[k]
            if not x:
                continue
            vk = vals[k]
            if vk == level or x % qp[vk]:
                return False
            c = NG[x // qp[vk]]
            rk = rows[k]
            for t in range(k, n):
                if rk[t]:
                    w[t] = A[w[t]][M[c][rk[t]]] % Q
        return True

    def rec(j: int) -> None:
        if j < 0:
            out.append(vals + [x for r in rows for x in r])
            return
        vals[j] = level
        rows[j] = [0] * n
        rec(j - 1)
        later = list(range(j + 1, n))
        radices = [qp[vals[k]] if vals[k] < level else Q for k in later]
        pivoted = [k for k in later if vals[k] < level]
        total = 1
        for r in radices:
            total *= r
        for v in range(level):
            for code in range(total):
                row = [0] * n
                row[j] = qp[v]
                c = code
                for k, r in zip(later, radices):
                    row[k] = c % r
                    c //= r
                if so_only:
                    if dot(row, row):
                        continue
                    if any(dot(row, rows[k]) for k in pivoted):
                        continue
                if not howell_ok(j, row, v):
                    continue
                vals[j] = v
                rows[j] = row
                rec(j - 1)
            vals[j] = level
            rows[j] = [0] * n

    rec(n - 1)
    width = n + n * n
    if not out:
        return np.zeros((0, width), dtype=np.int32)
    return np.asarray(out, dtype=np.int32)


def closure(add: np.ndarray, mul: np.ndarray, q: int, level: int, rows: np.ndarray, ranges: np.ndarray) -> np.ndarray:
    """All sums sum_i c_i rows[i] with 0 <= c_i < ranges[i]."""
    Q = q**level
    rows = np.asarray(rows, dtype=np.int64)
    n = rows.shape[1] if rows.ndim == 2 and rows.size else 0
    words = np.zeros((1, n), dtype=np.int64)
    for r, rng in zip(rows, ranges):
        coeffs = np.arange(int(rng), dtype=np.int64)
        terms = mul[coeffs[:, None], r[None, :]] % Q
        words = (add[words[:, None, :], terms[None, :, :]] % Q).reshape(-1, n)
    return words.astype(np.int32)
