"""Time the compiled census/closure kernels against the pure-Python fallback.

    python3 benchmarks/bench_census.py [--repeat 3] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from chainsd import _kernels_py, kernels
from chainsd.chain_ring import preset
from chainsd.oracle import _tables

CASES = [("R31", 3), ("F2u2", 4), ("R41", 3), ("R51", 3), ("F4u2", 3), ("R42", 2)]


def _best(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _as_set(arr: np.ndarray) -> set:
    return set(map(tuple, np.asarray(arr).reshape(len(arr), -1).tolist()))


def bench(repeat: int) -> list[dict]:
    if kernels.BACKEND != "cython":
        raise SystemExit("compiled extension not available; build with pip install -e . --no-build-isolation")
    compiled = kernels._compiled
    rows = []
    for name, n in CASES:
        ring = preset(name)
        add, mul, neg = _tables(ring)
        args = (add, mul, neg, ring.q, ring.e, n, True)
        tc, rc = _best(lambda: compiled.census(*args), repeat)
        tp, rp = _best(lambda: _kernels_py.census(*args), repeat)
        same = _as_set(rc) == _as_set(rp)
        rows.append({"kernel": "census", "ring": name, "n": n, "codes": len(rc), "cython_s": tc, "python_s": tp, "speedup": tp / tc if tc else None, "agree": bool(same)})

        gens = np.eye(n, dtype=np.int32)
        ranges = np.full(n, ring.q**ring.e, dtype=np.int64)
        cargs = (add, mul, ring.q, ring.e, gens, ranges)
        tc, cc = _best(lambda: compiled.closure(*cargs), repeat)
        tp, cp = _best(lambda: _kernels_py.closure(*cargs), repeat)
        rows.append({"kernel": "closure", "ring": name, "n": n, "codes": len(cc), "cython_s": tc, "python_s": tp, "speedup": tp / tc if tc else None, "agree": _as_set(cc) == _as_set(cp)})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None, help="also write results here")
    a = ap.parse_args()
    rows = bench(a.repeat)
    print(f"{'kernel':8} {'ring':5} {'n':>2} {'size':>8} {'cython s':>10} {'python s':>10} {'speedup':>8} agree")
    for r in rows:
        print(f"{r['kernel']:8} {r['ring']:5} {r['n']:>2} {r['codes']:>8} {r['cython_s']:>10.4f} {r['python_s']:>10.4f} {r['speedup']:>8.1f} {r['agree']}")
    if a.json:
        with open(a.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
