"""Rank of an integer matrix by gcd-normalised fraction-free elimination.

Three interchangeable paths compute the same pivots:

* ``numba``  -- an @njit loop over int64 (default when numba imports);
* ``numpy``  -- the same elimination vectorised over rows with int64 arrays;
* ``python`` -- arbitrary-precision ints, never overflows.

The int64 paths refuse (return -1) as soon as an update could leave
|entry| < 2**62; callers then rerun on the python path.  The backend is
read from the ITERFORMS_BACKEND environment variable at call time.
"""

from __future__ import annotations

import os
from math import gcd

import numpy as np

from ..errors import UsageError

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

LIMIT = 1 << 62


def backend() -> str:
    name = os.environ.get("ITERFORMS_BACKEND", "numba" if HAS_NUMBA else "numpy").lower()
    if name not in ("numba", "numpy", "python"):
        raise UsageError(f"unknown ITERFORMS_BACKEND {name!r}")
    if name == "numba" and not HAS_NUMBA:
        return "numpy"
    return name


def _rank_numpy(a: np.ndarray) -> int:
    a = a.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = np.abs(a[r:, c])
        p = int(np.argmax(col))
        if col[p] == 0:
            continue
        p += r
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = a[r, c]
        prow = a[r, c:]
        below = a[r + 1:, c]
        idx = np.nonzero(below)[0] + r + 1
        if idx.size:
            sub = a[idx, c:]
            f = a[idx, c]
            bound = (float(abs(piv)) * np.abs(sub).max(axis=1).astype(np.float64)
                     + np.abs(f).astype(np.float64) * float(np.abs(prow).max()))
            if bound.max() >= 2.0 ** 62:
                return -1
            new = piv * sub - f[:, None] * prow[None, :]
            g = np.gcd.reduce(new, axis=1)
            g[g == 0] = 1
            a[idx, c:] = new // g[:, None]
        r += 1
    return r


def _rank_python(rows_in) -> int:
    a = [list(map(int, row)) for row in rows_in]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p, best = -1, 0
        for i in range(r, rows):
            v = abs(a[i][c])
            if v > best:
                p, best = i, v
        if p < 0:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        prow = a[r]
        for i in range(r + 1, rows):
            f = a[i][c]
            if not f:
                continue
            row = a[i]
            g = 0
            for j in range(c, cols):
                v = piv * row[j] - f * prow[j]
                row[j] = v
                g = gcd(g, v)
            if g > 1:
                for j in range(c, cols):
                    row[j] //= g
        r += 1
    return r


if HAS_NUMBA:
    @njit(cache=True)
    def _rank_numba(a):  # pragma: no cover - compiled
        rows, cols = a.shape
        r = 0
        for c in range(cols):
            if r == rows:
                break
            p = -1
            best = 0
            for i in range(r, rows):
                v = abs(a[i, c])
                if v > best:
                    best = v
                    p = i
            if p < 0:
                continue
            if p != r:
                for j in range(cols):
                    t = a[r, j]
                    a[r, j] = a[p, j]
                    a[p, j] = t
            piv = a[r, c]
            apiv = abs(piv)
            pmax = 0
            for j in range(c, cols):
                v = abs(a[r, j])
                if v > pmax:
                    pmax = v
            for i in range(r + 1, rows):
                f = a[i, c]
                if f == 0:
                    continue
                rmax = 0
                for j in range(c, cols):
                    v = abs(a[i, j])
                    if v > rmax:
                        rmax = v
                af = abs(f)
                if rmax > 0 and apiv > LIMIT // rmax:
                    return -1
                if af > LIMIT // pmax:
                    return -1
                if apiv * rmax > LIMIT - af * pmax:
                    return -1
                g = 0
                for j in range(c, cols):
                    v = piv * a[i, j] - f * a[r, j]
                    a[i, j] = v
                    x = abs(v)
                    y = g
                    while y:
                        x, y = y, x % y
                    g = x
                if g > 1:
                    for j in range(c, cols):
                        a[i, j] //= g
            r += 1
        return r
else:  # pragma: no cover
    _rank_numba = None


def integer_rank(rows, which: str | None = None) -> int:
    """Rank of an integer matrix given as a list of rows of Python ints."""
    which = which or backend()
    if not rows or not rows[0]:
        return 0
    if which != "python":
        big = max(abs(v) for row in rows for v in row)
        if big < LIMIT:
            arr = np.array(rows, dtype=np.int64)
            r = _rank_numba(arr.copy()) if which == "numba" else _rank_numpy(arr)
            if r >= 0:
                return int(r)
    return _rank_python(rows)
