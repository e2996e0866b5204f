"""numba kernels for the subspace-scan oracles (characteristic 2 only).

Field elements are ints whose bits are the F_2 coordinates; products go
through exp/log tables.  ``U`` is an (N, k) array holding N F_2-independent
generators of the F_q-space being tested.  A subspace W of F_{q^n}^k is given
by the rows ``C`` (shape (a, k)) of its annihilator, so v lies in W iff
c . v = 0 for each row c.
"""

import numpy as np
from numba import njit

_CACHE = True


@njit(cache=_CACHE, inline="always")
def _mul(a, b, exp, log):
    if a == 0 or b == 0:
        return 0
    return exp[log[a] + log[b]]


@njit(cache=_CACHE)
def fp_meet_dim(U, C, d, exp, log, basis):
    """F_2-dimension of U ∩ W, i.e. N minus the rank of the map b -> (c_i . sum b_j u_j)_i."""
    N, k = U.shape
    a = C.shape[0]
    rank = 0
    for j in range(N):
        x = 0
        for i in range(a):
            v = 0
            for col in range(k):
                c = C[i, col]
                if c != 0:
                    v ^= _mul(c, U[j, col], exp, log)
            x |= v << (i * d)
        for r in range(rank):
            if x & (basis[r] & -basis[r]):
                x ^= basis[r]
        if x != 0:
            basis[rank] = x
            rank += 1
    return N - rank


@njit(cache=_CACHE)
def _qn_rank(M, nrows, k, exp, log, order):
    """Rank over F_{2^d} of the first nrows rows of M (destroyed)."""
    rank = 0
    for col in range(k):
        piv = -1
        for i in range(rank, nrows):
            if M[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for c in range(k):
                t = M[rank, c]
                M[rank, c] = M[piv, c]
                M[piv, c] = t
        inv = exp[order - log[M[rank, col]]]
        for c in range(k):
            M[rank, c] = _mul(inv, M[rank, c], exp, log)
        for i in range(rank + 1, nrows):
            f = M[i, col]
            if f != 0:
                for c in range(k):
                    M[i, c] ^= _mul(f, M[rank, c], exp, log)
        rank += 1
        if rank == nrows:
            break
    return rank


@njit(cache=_CACHE)
def hyperplane_span_dim(U, c, d, exp, log, order, basis, W):
    """F_{q^n}-dimension of the span of U ∩ H, where H = {v : c . v = 0}."""
    N, k = U.shape
    dmask = (np.int64(1) << d) - 1
    rank = 0
    nker = 0
    for j in range(N):
        v = 0
        for col in range(k):
            if c[col] != 0:
                v ^= _mul(c[col], U[j, col], exp, log)
        x = v | (np.int64(1) << (d + j))
        for r in range(rank):
            if x & (basis[r] & dmask & -(basis[r] & dmask)):
                x ^= basis[r]
        if x & dmask:
            basis[rank] = x
            rank += 1
        else:
            combo = x >> d
            for col in range(k):
                w = 0
                for jj in range(N):
                    if (combo >> jj) & 1:
                        w ^= U[jj, col]
                W[nker, col] = w
            nker += 1
    return _qn_rank(W, nker, k, exp, log, order)


@njit(cache=_CACHE)
def _set_digits(C, fr, fc, Q, index):
    nf = fr.shape[0]
    for f in range(nf - 1, -1, -1):
        C[fr[f], fc[f]] = index % Q
        index //= Q


@njit(cache=_CACHE)
def _advance(C, fr, fc, Q):
    f = fr.shape[0] - 1
    while f >= 0:
        v = C[fr[f], fc[f]] + 1
        if v < Q:
            C[fr[f], fc[f]] = v
            return
        C[fr[f], fc[f]] = 0
        f -= 1


@njit(cache=_CACHE, nogil=True)
def meet_scan(U, piv, fr, fc, Q, d, exp, log, lo, hi, hist):
    """Scan RREF annihilators lo..hi-1 of one pivot pattern; returns (max, first argmax)."""
    k = U.shape[1]
    a = piv.shape[0]
    C = np.zeros((a, k), dtype=np.int64)
    for i in range(a):
        C[i, piv[i]] = 1
    _set_digits(C, fr, fc, Q, lo)
    basis = np.zeros(U.shape[0] + 1, dtype=np.int64)
    best = -1
    best_idx = -1
    for idx in range(lo, hi):
        dim = fp_meet_dim(U, C, d, exp, log, basis)
        hist[dim] += 1
        if dim > best:
            best = dim
            best_idx = idx
        _advance(C, fr, fc, Q)
    return best, best_idx


@njit(cache=_CACHE, nogil=True)
def meet_batch(U, Cs, d, exp, log):
    out = np.empty(Cs.shape[0], dtype=np.int64)
    basis = np.zeros(U.shape[0] + 1, dtype=np.int64)
    for s in range(Cs.shape[0]):
        out[s] = fp_meet_dim(U, Cs[s], d, exp, log, basis)
    return out


@njit(cache=_CACHE, nogil=True)
def cutting_scan(U, piv, fr, fc, Q, d, exp, log, order, lo, hi, hist):
    """Hyperplane scan; returns (min span dim, first argmin)."""
    N, k = U.shape
    C = np.zeros((1, k), dtype=np.int64)
    C[0, piv[0]] = 1
    _set_digits(C, fr, fc, Q, lo)
    basis = np.zeros(N + 1, dtype=np.int64)
    W = np.zeros((N, k), dtype=np.int64)
    worst = k + 1
    worst_idx = -1
    for idx in range(lo, hi):
        s = hyperplane_span_dim(U, C[0], d, exp, log, order, basis, W)
        hist[s] += 1
        if s < worst:
            worst = s
            worst_idx = idx
        _advance(C, fr, fc, Q)
    return worst, worst_idx


@njit(cache=_CACHE, nogil=True)
def cutting_batch(U, Cs, d, exp, log, order):
    N, k = U.shape
    out = np.empty(Cs.shape[0], dtype=np.int64)
    basis = np.zeros(N + 1, dtype=np.int64)
    W = np.zeros((N, k), dtype=np.int64)
    for s in range(Cs.shape[0]):
        out[s] = hyperplane_span_dim(U, Cs[s, 0], d, exp, log, order, basis, W)
    return out
