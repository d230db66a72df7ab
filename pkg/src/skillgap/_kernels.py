"""Hot inner loops, each in a numba flavour and a pure-numpy flavour.

The public names (``lcs_length``, ``gibbs_sweep``, ``fold_in_sweep``) are bound
to one flavour at import time according to :data:`skillgap._accel.USE_NUMBA`.
The other flavour stays importable under its suffixed name so tests and the
benchmark can compare them directly.
"""
from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit
from ._rng import uniform_at, uniforms


# --------------------------------------------------------------------------
# longest common subsequence


@njit(cache=True, nogil=True)
def lcs_length_numba(a, b):
    n = a.shape[0]
    m = b.shape[0]
    if n == 0 or m == 0:
        return 0
    prev = np.zeros(m + 1, dtype=np.int64)
    cur = np.zeros(m + 1, dtype=np.int64)
    for i in range(n):
        ai = a[i]
        for j in range(m):
            if ai == b[j]:
                cur[j + 1] = prev[j] + 1
            elif prev[j + 1] >= cur[j]:
                cur[j + 1] = prev[j + 1]
            else:
                cur[j + 1] = cur[j]
        for j in range(m + 1):
            prev[j] = cur[j]
    return prev[m]


def lcs_length_numpy(a: np.ndarray, b: np.ndarray) -> int:
    # Row update: cur[j] = max(cur[j-1], prev[j], prev[j-1] + eq[j]); the
    # dependency on cur[j-1] is a running maximum.
    if a.shape[0] > b.shape[0]:
        a, b = b, a
    n, m = a.shape[0], b.shape[0]
    if n == 0:
        return 0
    prev = np.zeros(m + 1, dtype=np.int64)
    cur = np.zeros(m + 1, dtype=np.int64)
    for i in range(n):
        eq = (b == a[i]).astype(np.int64)
        np.maximum(prev[1:], prev[:-1] + eq, out=cur[1:])
        np.maximum.accumulate(cur, out=cur)
        prev, cur = cur, prev
    return int(prev[m])


# --------------------------------------------------------------------------
# collapsed Gibbs sampling for LDA


@njit(cache=True, nogil=True)
def init_assignments_numba(words, docs, z, n_dk, n_kw, n_k, seed):
    n_topics = n_k.shape[0]
    for i in range(words.shape[0]):
        u = uniform_at(seed, np.uint64(i))
        k = np.int64(u * n_topics)
        if k >= n_topics:
            k = n_topics - 1
        z[i] = k
        n_dk[docs[i], k] += 1
        n_kw[k, words[i]] += 1
        n_k[k] += 1


def init_assignments_numpy(words, docs, z, n_dk, n_kw, n_k, seed):
    n_topics = n_k.shape[0]
    u = uniforms(int(seed), 0, words.shape[0])
    k = np.minimum((u * n_topics).astype(np.int64), n_topics - 1)
    z[:] = k
    np.add.at(n_dk, (docs, k), 1)
    np.add.at(n_kw, (k, words), 1)
    n_k[:] = np.bincount(k, minlength=n_topics)


@njit(cache=True, nogil=True)
def gibbs_sweep_numba(words, docs, z, n_dk, n_kw, n_k, alpha, beta, seed, counter_base):
    n_topics = n_k.shape[0]
    vbeta = n_kw.shape[1] * beta
    cum = np.empty(n_topics, dtype=np.float64)
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        old = z[i]
        n_dk[d, old] -= 1
        n_kw[old, w] -= 1
        n_k[old] -= 1
        total = 0.0
        for k in range(n_topics):
            total += (n_dk[d, k] + alpha) * (n_kw[k, w] + beta) / (n_k[k] + vbeta)
            cum[k] = total
        u = uniform_at(seed, counter_base + np.uint64(i)) * total
        new = n_topics - 1
        for k in range(n_topics):
            if cum[k] > u:
                new = k
                break
        z[i] = new
        n_dk[d, new] += 1
        n_kw[new, w] += 1
        n_k[new] += 1


def gibbs_sweep_numpy(words, docs, z, n_dk, n_kw, n_k, alpha, beta, seed, counter_base):
    n_topics = n_k.shape[0]
    vbeta = n_kw.shape[1] * beta
    draws = uniforms(int(seed), int(counter_base), words.shape[0])
    last = n_topics - 1
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        old = z[i]
        n_dk[d, old] -= 1
        n_kw[old, w] -= 1
        n_k[old] -= 1
        cum = np.cumsum((n_dk[d] + alpha) * (n_kw[:, w] + beta) / (n_k + vbeta))
        new = min(int(np.searchsorted(cum, draws[i] * cum[last], side="right")), last)
        z[i] = new
        n_dk[d, new] += 1
        n_kw[new, w] += 1
        n_k[new] += 1


@njit(cache=True, nogil=True)
def fold_in_sweep_numba(words, z, n_dk, n_kw, n_k, alpha, beta, seed, counter_base):
    n_topics = n_k.shape[0]
    vbeta = n_kw.shape[1] * beta
    cum = np.empty(n_topics, dtype=np.float64)
    for i in range(words.shape[0]):
        w = words[i]
        n_dk[z[i]] -= 1
        total = 0.0
        for k in range(n_topics):
            total += (n_dk[k] + alpha) * (n_kw[k, w] + beta) / (n_k[k] + vbeta)
            cum[k] = total
        u = uniform_at(seed, counter_base + np.uint64(i)) * total
        new = n_topics - 1
        for k in range(n_topics):
            if cum[k] > u:
                new = k
                break
        z[i] = new
        n_dk[new] += 1


def fold_in_sweep_numpy(words, z, n_dk, n_kw, n_k, alpha, beta, seed, counter_base):
    n_topics = n_k.shape[0]
    vbeta = n_kw.shape[1] * beta
    draws = uniforms(int(seed), int(counter_base), words.shape[0])
    last = n_topics - 1
    denom = n_k + vbeta
    for i in range(words.shape[0]):
        w = words[i]
        n_dk[z[i]] -= 1
        cum = np.cumsum((n_dk + alpha) * (n_kw[:, w] + beta) / denom)
        new = min(int(np.searchsorted(cum, draws[i] * cum[last], side="right")), last)
        z[i] = new
        n_dk[new] += 1


NUMBA_KERNELS = {
    "lcs_length": lcs_length_numba,
    "init_assignments": init_assignments_numba,
    "gibbs_sweep": gibbs_sweep_numba,
    "fold_in_sweep": fold_in_sweep_numba,
}
NUMPY_KERNELS = {
    "lcs_length": lcs_length_numpy,
    "init_assignments": init_assignments_numpy,
    "gibbs_sweep": gibbs_sweep_numpy,
    "fold_in_sweep": fold_in_sweep_numpy,
}

_active = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS
lcs_length = _active["lcs_length"]
init_assignments = _active["init_assignments"]
gibbs_sweep = _active["gibbs_sweep"]
fold_in_sweep = _active["fold_in_sweep"]
BACKEND = "numba" if USE_NUMBA else "numpy"
