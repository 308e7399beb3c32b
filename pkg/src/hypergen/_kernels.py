"""Rank-mod-p screening kernels for the projective witness enumeration.

The exact rank of an integer matrix over Q is bounded below by its rank
modulo any prime, so a candidate whose modular rank already exceeds the
target can be discarded without exact arithmetic.  Survivors are
re-checked with Fractions by the caller.

Two interchangeable backends exist: numba ``@njit`` loops, and batched
numpy elimination.  Set ``HYPERGEN_DISABLE_NUMBA=1`` (or run without numba
installed) to force the numpy path.
"""
from __future__ import annotations

import os

import numpy as np

PRIME = 2147483647  # 2**31 - 1; products of two residues fit in int64

_DISABLED = os.environ.get("HYPERGEN_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by HYPERGEN_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy backend


def _powmod_np(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    while e:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def combine_forms_np(forms: np.ndarray, mus: np.ndarray, p: int = PRIME) -> np.ndarray:
    """Stack of ``sum_l mus[n, l] * forms[l]`` reduced mod p, shape ``(N, m, m)``."""
    mus = mus % p
    out = np.zeros((mus.shape[0],) + forms.shape[1:], dtype=np.int64)
    for l in range(forms.shape[0]):
        out = (out + mus[:, l, None, None] * forms[l][None, :, :]) % p
    return out


def batch_rank_mod_p_np(forms: np.ndarray, mus: np.ndarray, p: int = PRIME) -> np.ndarray:
    mats = combine_forms_np(forms % p, mus, p)
    n, rows, cols = mats.shape
    rank = np.zeros(n, dtype=np.int64)
    row_ids = np.arange(rows)
    batch = np.arange(n)
    for c in range(cols):
        col = mats[:, :, c]
        cand = (col != 0) & (row_ids[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        b = batch[has]
        r = rank[has]
        pr = piv[has]
        tmp = mats[b, r, :].copy()
        mats[b, r, :] = mats[b, pr, :]
        mats[b, pr, :] = tmp
        inv = _powmod_np(mats[b, r, c], p - 2, p)
        pivot_rows = (mats[b, r, :] * inv[:, None]) % p
        below = row_ids[None, :] > r[:, None]
        factors = mats[b, :, c] * below
        mats[b] = (mats[b] - factors[:, :, None] * pivot_rows[:, None, :]) % p
        rank[has] += 1
    return rank


def first_rank_at_most_np(
    forms: np.ndarray, mus: np.ndarray, target: int, start: int = 0, p: int = PRIME, chunk: int = 4096
) -> int:
    for lo in range(start, mus.shape[0], chunk):
        ranks = batch_rank_mod_p_np(forms, mus[lo:lo + chunk], p)
        hits = np.nonzero(ranks <= target)[0]
        if hits.size:
            return lo + int(hits[0])
    return -1


# ---------------------------------------------------------------------------
# numba backend

if HAVE_NUMBA:

    @njit(cache=True)
    def _powmod_nb(a, e, p):
        result = 1
        base = a % p
        while e > 0:
            if e & 1:
                result = (result * base) % p
            base = (base * base) % p
            e >>= 1
        return result

    @njit(cache=True)
    def _rank_one_nb(forms, mu, p, work):
        d, m, _ = forms.shape
        for i in range(m):
            for j in range(m):
                acc = 0
                for l in range(d):
                    acc = (acc + (mu[l] % p) * forms[l, i, j]) % p
                work[i, j] = acc
        r = 0
        for c in range(m):
            piv = -1
            for i in range(r, m):
                if work[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(m):
                    t = work[r, j]
                    work[r, j] = work[piv, j]
                    work[piv, j] = t
            inv = _powmod_nb(work[r, c], p - 2, p)
            for j in range(c, m):
                work[r, j] = (work[r, j] * inv) % p
            for i in range(r + 1, m):
                f = work[i, c]
                if f != 0:
                    for j in range(c, m):
                        work[i, j] = (work[i, j] - f * work[r, j]) % p
            r += 1
            if r == m:
                break
        return r

    @njit(cache=True)
    def _batch_rank_nb(forms, mus, p):
        n = mus.shape[0]
        m = forms.shape[1]
        out = np.empty(n, dtype=np.int64)
        work = np.empty((m, m), dtype=np.int64)
        for k in range(n):
            out[k] = _rank_one_nb(forms, mus[k], p, work)
        return out

    @njit(cache=True)
    def _first_rank_at_most_nb(forms, mus, target, start, p):
        m = forms.shape[1]
        work = np.empty((m, m), dtype=np.int64)
        for k in range(start, mus.shape[0]):
            if _rank_one_nb(forms, mus[k], p, work) <= target:
                return k
        return -1


def batch_rank_mod_p(forms: np.ndarray, mus: np.ndarray, p: int = PRIME, backend: str | None = None) -> np.ndarray:
    """Rank mod p of ``sum_l mus[n, l] forms[l]`` for every row ``n`` of ``mus``."""
    forms = np.ascontiguousarray(forms, dtype=np.int64) % p
    mus = np.ascontiguousarray(mus, dtype=np.int64)
    if _use_numba(backend):
        return _batch_rank_nb(forms, mus, p)
    return batch_rank_mod_p_np(forms, mus, p)


def first_rank_at_most(
    forms: np.ndarray, mus: np.ndarray, target: int, start: int = 0, p: int = PRIME, backend: str | None = None
) -> int:
    """Index of the first candidate (from ``start``) whose modular rank is at most ``target``, else -1."""
    forms = np.ascontiguousarray(forms, dtype=np.int64) % p
    mus = np.ascontiguousarray(mus, dtype=np.int64)
    if _use_numba(backend):
        return int(_first_rank_at_most_nb(forms, mus, target, start, p))
    return first_rank_at_most_np(forms, mus, target, start, p)


def _use_numba(backend: str | None) -> bool:
    if backend is None:
        return HAVE_NUMBA
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but unavailable")
        return True
    if backend == "numpy":
        return False
    raise ValueError(f"unknown backend {backend!r}")
