"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The backend is chosen once at import from ``COARSEGRAIN_BACKEND``
(``numba`` or ``numpy``; default ``numba`` when importable) and can be
overridden at runtime with :func:`use_backend`.  Kernels take any
randomness as pre-drawn arrays, so both backends return the same numbers
for the same inputs.

Metric codes: 0 euclidean, 1 l1, 2 weighted product
``||ds||_2 + C ||da||_2`` with the first ``split`` coordinates as state.
"""

from __future__ import annotations

import contextlib
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

EUCLIDEAN, L1, WEIGHTED_PRODUCT = 0, 1, 2

_PAIR_BLOCK = 256
_QUERY_BLOCK = 2048


def _initial_backend():
    requested = os.environ.get("COARSEGRAIN_BACKEND", "numba").strip().lower()
    if requested not in ("numba", "numpy"):
        raise ValueError(f"COARSEGRAIN_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and numba is None:
        return "numpy"
    return requested


_backend = _initial_backend()


def backend():
    return _backend


def set_backend(name):
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and numba is None:
        raise RuntimeError("numba is not installed")
    _backend = name


@contextlib.contextmanager
def use_backend(name):
    previous = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


# ---------------------------------------------------------------- numpy side


def distance_matrix(A, B, metric, split, C):
    """Pairwise distances between rows of ``A`` (n, D) and ``B`` (m, D)."""
    diff = A[:, None, :] - B[None, :, :]
    if metric == EUCLIDEAN:
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    if metric == L1:
        return np.abs(diff).sum(axis=2)
    ds = diff[:, :, :split]
    da = diff[:, :, split:]
    return np.sqrt(np.einsum("ijk,ijk->ij", ds, ds)) + C * np.sqrt(np.einsum("ijk,ijk->ij", da, da))


def _pair_max_slope_numpy(X, f, alphas, metric, split, C):
    n = X.shape[0]
    K = alphas.shape[0]
    best = np.full(K, -1.0)
    bi = np.full(K, -1, dtype=np.int64)
    bj = np.full(K, -1, dtype=np.int64)
    dmax = 0.0
    for i0 in range(0, n, _PAIR_BLOCK):
        i1 = min(n, i0 + _PAIR_BLOCK)
        d = distance_matrix(X[i0:i1], X[i0:], metric, split, C)
        # keep j > i only
        rows = np.arange(i0, i1)[:, None]
        cols = np.arange(i0, n)[None, :]
        upper = cols > rows
        if upper.any():
            dmax = max(dmax, float(d[upper].max()))
        pos = upper & (d > 0.0)
        if not pos.any():
            continue
        slope = np.where(pos, np.abs(f[i0:i1, None] - f[None, i0:]) / np.where(pos, d, 1.0), -1.0)
        for k in range(K):
            cand = np.where(d >= alphas[k], slope, -1.0)
            flat = int(np.argmax(cand))
            r, c = divmod(flat, cand.shape[1])
            if cand[r, c] > best[k]:
                best[k], bi[k], bj[k] = cand[r, c], i0 + r, i0 + c
    return best, bi, bj, dmax


def _envelope_numpy(Q, X, f, lip, alphas, lalphas, metric, split, C):
    nq = Q.shape[0]
    lower = np.empty(nq)
    upper = np.empty(nq)
    for q0 in range(0, nq, _QUERY_BLOCK):
        q1 = min(nq, q0 + _QUERY_BLOCK)
        d = distance_matrix(Q[q0:q1], X, metric, split, C)
        g = np.full(d.shape, np.inf)
        if lip >= 0.0:
            g = lip * d
        for a, la in zip(alphas, lalphas):
            g = np.minimum(g, np.where(d <= a, la * (d + 2.0 * a), la * d))
        upper[q0:q1] = (f[None, :] + g).min(axis=1)
        lower[q0:q1] = (f[None, :] - g).max(axis=1)
    return lower, upper


def _rollout_right_numpy(s0, noise, drift, r_left, r_right, gamma):
    n, horizon = noise.shape
    s = s0.astype(np.float64).copy()
    ret = np.zeros(n)
    done = np.zeros(n, dtype=np.bool_)
    disc = 1.0
    for t in range(horizon):
        live = ~done
        if not live.any():
            break
        disc *= gamma
        s[live] = s[live] + drift + noise[live, t]
        hit_r = live & (s >= 1.0)
        hit_l = live & (s <= -1.0)
        ret[hit_r] = disc * r_right
        ret[hit_l] = disc * r_left
        done |= hit_r | hit_l
    return ret, done


def _walk_numpy(pos, u, delta, jump):
    pos = pos.astype(np.int64).copy()
    steps = np.zeros(pos.shape[0], dtype=np.int64)
    for t in range(u.shape[1]):
        live = pos > 0
        if not live.any():
            break
        steps[live] += 1
        fwd = live & (u[:, t] < 1.0 - delta)
        back = live & ~fwd
        pos[fwd] -= 1
        pos[back] += jump
    return pos, steps


# ---------------------------------------------------------------- numba side

if numba is not None:

    @numba.njit(cache=True, inline="always")
    def _dist_rows(A, i, B, j, metric, split, C):
        D = A.shape[1]
        if metric == 0:
            acc = 0.0
            for k in range(D):
                t = A[i, k] - B[j, k]
                acc += t * t
            return np.sqrt(acc)
        if metric == 1:
            acc = 0.0
            for k in range(D):
                acc += abs(A[i, k] - B[j, k])
            return acc
        s_acc = 0.0
        for k in range(split):
            t = A[i, k] - B[j, k]
            s_acc += t * t
        a_acc = 0.0
        for k in range(split, D):
            t = A[i, k] - B[j, k]
            a_acc += t * t
        return np.sqrt(s_acc) + C * np.sqrt(a_acc)

    @numba.njit(cache=True)
    def _pair_max_slope_nb(X, f, alphas, metric, split, C):
        n = X.shape[0]
        K = alphas.shape[0]
        best = np.full(K, -1.0)
        bi = np.full(K, -1, dtype=np.int64)
        bj = np.full(K, -1, dtype=np.int64)
        dmax = 0.0
        amin = alphas.min()
        for i in range(n):
            fi = f[i]
            for j in range(i + 1, n):
                d = _dist_rows(X, i, X, j, metric, split, C)
                if d > dmax:
                    dmax = d
                if d >= amin and d > 0.0:
                    s = abs(fi - f[j]) / d
                    for k in range(K):
                        if d >= alphas[k] and s > best[k]:
                            best[k] = s
                            bi[k] = i
                            bj[k] = j
        return best, bi, bj, dmax

    @numba.njit(cache=True)
    def _envelope_nb(Q, X, f, lip, alphas, lalphas, metric, split, C):
        nq = Q.shape[0]
        n = X.shape[0]
        K = alphas.shape[0]
        lower = np.empty(nq)
        upper = np.empty(nq)
        for q in range(nq):
            ub = np.inf
            lb = -np.inf
            for j in range(n):
                d = _dist_rows(Q, q, X, j, metric, split, C)
                g = np.inf
                if lip >= 0.0:
                    g = lip * d
                for k in range(K):
                    a = alphas[k]
                    if d <= a:
                        gk = lalphas[k] * (d + 2.0 * a)
                    else:
                        gk = lalphas[k] * d
                    if gk < g:
                        g = gk
                u = f[j] + g
                l = f[j] - g
                if u < ub:
                    ub = u
                if l > lb:
                    lb = l
            lower[q] = lb
            upper[q] = ub
        return lower, upper

    @numba.njit(cache=True)
    def _rollout_right_nb(s0, noise, drift, r_left, r_right, gamma):
        n, horizon = noise.shape
        ret = np.zeros(n)
        done = np.zeros(n, dtype=np.bool_)
        for i in range(n):
            s = s0[i]
            disc = 1.0
            for t in range(horizon):
                disc *= gamma
                s = s + drift + noise[i, t]
                if s >= 1.0:
                    ret[i] = disc * r_right
                    done[i] = True
                    break
                if s <= -1.0:
                    ret[i] = disc * r_left
                    done[i] = True
                    break
        return ret, done

    @numba.njit(cache=True)
    def _walk_nb(pos, u, delta, jump):
        n, m = u.shape
        out = pos.copy()
        steps = np.zeros(n, dtype=np.int64)
        for i in range(n):
            p = out[i]
            for t in range(m):
                if p <= 0:
                    break
                steps[i] += 1
                if u[i, t] < 1.0 - delta:
                    p -= 1
                else:
                    p += jump
            out[i] = p
        return out, steps


# ---------------------------------------------------------------- dispatch


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def pair_max_slope_multi(X, f, alphas, metric=EUCLIDEAN, split=0, C=0.0):
    """One O(N^2) pass answering several distance cut-offs at once.

    Returns ``(slopes, i, j, max_pair_distance)`` with one slope and one
    argmax pair per cut-off; a slope of -1 means no pair qualified.
    """
    X, f = _f64(X), _f64(f)
    alphas = _f64(alphas).ravel()
    if _backend == "numba":
        best, bi, bj, dmax = _pair_max_slope_nb(X, f, alphas, int(metric), int(split), float(C))
    else:
        best, bi, bj, dmax = _pair_max_slope_numpy(X, f, alphas, int(metric), int(split), float(C))
    return best, bi, bj, float(dmax)


def pair_max_slope(X, f, alpha, metric=EUCLIDEAN, split=0, C=0.0):
    """Largest ``|f_i - f_j| / d_ij`` over pairs with ``d_ij >= alpha`` (and d > 0).

    Returns ``(slope, i, j, max_pair_distance)``; ``slope`` is -1 and the
    indices -1 when no pair qualifies.
    """
    best, bi, bj, dmax = pair_max_slope_multi(X, f, [alpha], metric, split, C)
    return float(best[0]), int(bi[0]), int(bj[0]), dmax


def envelope(Q, X, f, lip, alphas, lalphas, metric=EUCLIDEAN, split=0, C=0.0):
    """Lower/upper envelopes at the rows of ``Q``.

    The per-observation radius function is the pointwise minimum of
    ``lip * d`` (skipped when ``lip < 0``) and every coarse-grained term.
    """
    Q, X, f = _f64(Q), _f64(X), _f64(f)
    alphas, lalphas = _f64(alphas).ravel(), _f64(lalphas).ravel()
    if _backend == "numba":
        return _envelope_nb(Q, X, f, float(lip), alphas, lalphas, int(metric), int(split), float(C))
    return _envelope_numpy(Q, X, f, float(lip), alphas, lalphas, int(metric), int(split), float(C))


def rollout_right(s0, noise, drift, r_left, r_right, gamma):
    """Discounted terminal reward of always-right rollouts (reward discounted on arrival)."""
    s0, noise = _f64(s0), _f64(noise)
    if _backend == "numba":
        return _rollout_right_nb(s0, noise, float(drift), float(r_left), float(r_right), float(gamma))
    return _rollout_right_numpy(s0, noise, float(drift), float(r_left), float(r_right), float(gamma))


def walk(pos, u, delta, jump):
    """Advance skip-free random walkers by up to ``u.shape[1]`` steps; absorbed at 0."""
    pos = np.ascontiguousarray(pos, dtype=np.int64)
    u = _f64(u)
    if _backend == "numba":
        return _walk_nb(pos, u, float(delta), int(jump))
    return _walk_numpy(pos, u, float(delta), int(jump))
