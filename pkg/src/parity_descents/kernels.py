"""Enumeration kernels: joint statistic histograms over S_n and B_n.

Two interchangeable implementations exist for every kernel: a numba ``@njit``
loop over permutations in lexicographic order, and a vectorised numpy path
that materialises one first-letter block of permutations at a time. The
numba path is used unless ``PARITY_DESCENTS_PURE_NUMPY=1`` is set or numba
is not importable. Both return identical integer histograms; the test-suite
cross-checks them.

Every kernel works on one first-letter block (``first`` in ``1..n``) so the
blocks can be folded in any order or in parallel.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

_FLAG = "PARITY_DESCENTS_PURE_NUMPY"


def numba_available() -> bool:
    return numba is not None


def default_backend() -> str:
    if os.environ.get(_FLAG, "").lower() in ("1", "true", "yes", "on"):
        return "numpy"
    return "numba" if numba is not None else "numpy"


def plain_shape(n: int) -> tuple[int, int, int, int]:
    """Histogram axes: (des0, des1, inv, lpk)."""
    return ((n - 1) // 2 + 1, n // 2 + 1, n * (n - 1) // 2 + 1, n // 2 + 1)


def signed_shape(n: int) -> tuple[int, int, int]:
    """Histogram axes: (first letter negative, des0 incl. position 0, des1)."""
    return (2, (n + 1) // 2 + 1, n // 2 + 1)


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

if numba is not None:

    @njit(cache=True, nogil=True)
    def _next_perm(a, lo):
        # in-place lexicographic successor of a[lo:]; False when exhausted
        n = a.shape[0]
        i = n - 2
        while i >= lo and a[i] >= a[i + 1]:
            i -= 1
        if i < lo:
            return False
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        l, r = i + 1, n - 1
        while l < r:
            a[l], a[r] = a[r], a[l]
            l += 1
            r -= 1
        return True

    @njit(cache=True, nogil=True)
    def _first_block(n, first):
        p = np.empty(n, dtype=np.int64)
        p[0] = first
        k = 1
        for v in range(1, n + 1):
            if v != first:
                p[k] = v
                k += 1
        return p

    @njit(cache=True, nogil=True)
    def _plain_numba(n, first, out):
        p = _first_block(n, first)
        while True:
            d0 = 0
            d1 = 0
            inv = 0
            lpk = 0
            for i in range(n - 1):
                if p[i] > p[i + 1]:
                    # 0-based index i is position i+1
                    if (i + 1) % 2 == 0:
                        d0 += 1
                    else:
                        d1 += 1
                for j in range(i + 1, n):
                    if p[i] > p[j]:
                        inv += 1
                left = p[i - 1] if i > 0 else 0
                if left < p[i] and p[i] > p[i + 1]:
                    lpk += 1
            out[d0, d1, inv, lpk] += 1
            if not _next_perm(p, 1):
                break

    @njit(cache=True, nogil=True)
    def _signed_numba(n, first, out):
        p = _first_block(n, first)
        w = np.empty(n + 1, dtype=np.int64)
        w[0] = 0
        while True:
            for mask in range(1 << n):
                for i in range(n):
                    if (mask >> i) & 1:
                        w[i + 1] = -p[i]
                    else:
                        w[i + 1] = p[i]
                d0 = 0
                d1 = 0
                for i in range(n):
                    if w[i] > w[i + 1]:
                        if i % 2 == 0:
                            d0 += 1
                        else:
                            d1 += 1
                out[mask & 1, d0, d1] += 1
            if not _next_perm(p, 1):
                break

    @njit(cache=True, nogil=True)
    def _is_andre_numba(p, n):
        if n >= 2 and p[n - 2] > p[n - 1]:
            return False
        for i in range(1, n - 1):
            if p[i - 1] > p[i] and p[i] > p[i + 1]:
                return False
        for i in range(1, n - 1):
            if p[i - 1] > p[i] and p[i] < p[i + 1]:
                m2 = 0
                k = i - 1
                while k >= 0 and p[k] > p[i]:
                    if p[k] > m2:
                        m2 = p[k]
                    k -= 1
                m4 = 0
                k = i + 1
                while k < n and p[k] > p[i]:
                    if p[k] > m4:
                        m4 = p[k]
                    k += 1
                if m2 >= m4:
                    return False
        return True

    @njit(cache=True, nogil=True)
    def _is_simsun_numba(p, n, buf):
        for k in range(3, n + 1):
            m = 0
            for i in range(n):
                if p[i] <= k:
                    buf[m] = p[i]
                    m += 1
            for i in range(m - 2):
                if buf[i] > buf[i + 1] and buf[i + 1] > buf[i + 2]:
                    return False
        return True

    @njit(cache=True, nogil=True)
    def _andre_numba(n, first, out):
        p = _first_block(n, first)
        while True:
            if _is_andre_numba(p, n):
                d = 0
                for i in range(n - 1):
                    if p[i] > p[i + 1]:
                        d += 1
                out[d] += 1
            if not _next_perm(p, 1):
                break

    @njit(cache=True, nogil=True)
    def _simsun_numba(n, first, out):
        p = _first_block(n, first)
        buf = np.empty(n, dtype=np.int64)
        while True:
            if _is_simsun_numba(p, n, buf):
                d = 0
                for i in range(n - 1):
                    if p[i] > p[i + 1]:
                        d += 1
                out[d] += 1
            if not _next_perm(p, 1):
                break


# ---------------------------------------------------------------------------
# numpy kernels
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16)
def _index_permutations(k: int) -> np.ndarray:
    """All permutations of ``range(k)`` as a ``(k!, k)`` int8 array."""
    perms = np.zeros((1, 0), dtype=np.int8)
    for m in range(k):
        blocks = [np.insert(perms, pos, m, axis=1) for pos in range(m + 1)]
        perms = np.concatenate(blocks, axis=0)
    perms.setflags(write=False)
    return perms


def _block(n: int, first: int) -> np.ndarray:
    rest = np.array([v for v in range(1, n + 1) if v != first], dtype=np.int64)
    idx = _index_permutations(n - 1)
    block = np.empty((idx.shape[0], n), dtype=np.int64)
    block[:, 0] = first
    block[:, 1:] = rest[idx]
    return block


def _plain_numpy(n: int, first: int, out: np.ndarray) -> None:
    P = _block(n, first)
    rows = P.shape[0]
    d0 = np.zeros(rows, dtype=np.int64)
    d1 = np.zeros(rows, dtype=np.int64)
    inv = np.zeros(rows, dtype=np.int64)
    for i in range(n - 1):
        des = P[:, i] > P[:, i + 1]
        if (i + 1) % 2 == 0:
            d0 += des
        else:
            d1 += des
        inv += (P[:, i : i + 1] > P[:, i + 1 :]).sum(axis=1)
    padded = np.zeros((rows, n + 2), dtype=np.int64)
    padded[:, 1:-1] = P
    padded[:, -1] = n + 1
    mid = padded[:, 1:n]
    lpk = ((padded[:, 0 : n - 1] < mid) & (mid > padded[:, 2 : n + 1])).sum(axis=1)
    flat = np.ravel_multi_index((d0, d1, inv, lpk), out.shape)
    out += np.bincount(flat, minlength=out.size).reshape(out.shape)


def _signed_numpy(n: int, first: int, out: np.ndarray) -> None:
    P = _block(n, first)
    rows = P.shape[0]
    W = np.zeros((rows, n + 1), dtype=np.int64)
    even = np.arange(n) % 2 == 0
    for mask in range(1 << n):
        signs = np.array([-1 if (mask >> i) & 1 else 1 for i in range(n)], dtype=np.int64)
        W[:, 1:] = P * signs
        des = W[:, :-1] > W[:, 1:]
        d0 = des[:, even].sum(axis=1)
        d1 = des[:, ~even].sum(axis=1)
        flat = np.ravel_multi_index((d0, d1), out.shape[1:])
        out[mask & 1] += np.bincount(flat, minlength=out[0].size).reshape(out.shape[1:])


def _descents(P: np.ndarray) -> np.ndarray:
    return (P[:, :-1] > P[:, 1:]).sum(axis=1)


def _andre_mask_numpy(P: np.ndarray) -> np.ndarray:
    rows, n = P.shape
    ok = np.ones(rows, dtype=bool)
    if n >= 2:
        ok &= P[:, n - 2] < P[:, n - 1]
    for i in range(1, n - 1):
        ok &= ~((P[:, i - 1] > P[:, i]) & (P[:, i] > P[:, i + 1]))
    for i in range(1, n - 1):
        valley = (P[:, i - 1] > P[:, i]) & (P[:, i] < P[:, i + 1])
        pivot = P[:, i]
        m2 = np.zeros(rows, dtype=np.int64)
        alive = np.ones(rows, dtype=bool)
        for k in range(i - 1, -1, -1):
            alive &= P[:, k] > pivot
            m2 = np.where(alive, np.maximum(m2, P[:, k]), m2)
        m4 = np.zeros(rows, dtype=np.int64)
        alive = np.ones(rows, dtype=bool)
        for k in range(i + 1, n):
            alive &= P[:, k] > pivot
            m4 = np.where(alive, np.maximum(m4, P[:, k]), m4)
        ok &= ~(valley & (m2 >= m4))
    return ok


def _simsun_mask_numpy(P: np.ndarray) -> np.ndarray:
    rows, n = P.shape
    ok = np.ones(rows, dtype=bool)
    for k in range(3, n + 1):
        R = P[P <= k].reshape(rows, k)
        dd = (R[:, :-2] > R[:, 1:-1]) & (R[:, 1:-1] > R[:, 2:])
        ok &= ~dd.any(axis=1)
    return ok


def _andre_numpy(n: int, first: int, out: np.ndarray) -> None:
    P = _block(n, first)
    d = _descents(P[_andre_mask_numpy(P)])
    out += np.bincount(d, minlength=out.size)[: out.size]


def _simsun_numpy(n: int, first: int, out: np.ndarray) -> None:
    P = _block(n, first)
    d = _descents(P[_simsun_mask_numpy(P)])
    out += np.bincount(d, minlength=out.size)[: out.size]


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_IMPLS = {
    "plain": (plain_shape, "_plain"),
    "signed": (signed_shape, "_signed"),
    "andre": (lambda n: (n,), "_andre"),
    "simsun": (lambda n: (n,), "_simsun"),
}


def _impl(kind: str, backend: str):
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and numba is None:
        raise RuntimeError("numba backend requested but numba is not installed")
    return globals()[f"{_IMPLS[kind][1]}_{backend}"]


def histogram(kind: str, n: int, backend: str | None = None, jobs: int = 1) -> np.ndarray:
    """Fold the per-first-letter blocks of one kernel into a single histogram."""
    if kind not in _IMPLS:
        raise ValueError(f"unknown kernel {kind!r}")
    if n < 1:
        raise ValueError("n must be at least 1")
    backend = backend or default_backend()
    shape = _IMPLS[kind][0](n)
    fn = _impl(kind, backend)

    def block(first: int) -> np.ndarray:
        out = np.zeros(shape, dtype=np.int64)
        fn(n, first, out)
        return out

    if jobs > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(block, range(1, n + 1)))
    else:
        parts = [block(first) for first in range(1, n + 1)]
    total = np.zeros(shape, dtype=np.int64)
    for part in parts:
        total += part
    return total
