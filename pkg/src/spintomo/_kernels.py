"""Hot numeric kernels.

Each kernel exists twice: a loop version compiled with numba (``*_nb``) and
a vectorised numpy version (``*_np``). The public name points at one of
them according to :data:`spintomo._accel.USE_NUMBA`. Both versions are
kept importable so tests and ``benchmarks/`` can compare them directly.

All angular-momentum labels enter as doubled integers.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit, numba_parallel, prange

LNFACT_MAX = 1024


def _build_lnfact(nmax):
    out = np.empty(nmax + 1)
    for n in range(nmax + 1):
        if n <= 170:
            out[n] = math.log(math.factorial(n))
        else:
            out[n] = math.lgamma(n + 1.0)
    return out


# populated once at import; read-only afterwards
LNFACT = _build_lnfact(LNFACT_MAX)
LNFACT.setflags(write=False)


def _d_params(tj, tm1, tm2):
    """Jacobi-form parameters of d^j_{m1 m2}: (k, a, b, sign, log prefactor)."""
    # all quantities below are integers: j +- m is integral for valid labels
    jp2 = (tj + tm2) // 2
    jm2 = (tj - tm2) // 2
    jp1 = (tj + tm1) // 2
    jm1 = (tj - tm1) // 2
    diff = (tm1 - tm2) // 2
    k = min(jp2, jm2, jp1, jm1)
    if k == jp2:
        a, lam = diff, diff
    elif k == jm2:
        a, lam = -diff, 0
    elif k == jp1:
        a, lam = -diff, 0
    else:
        a, lam = diff, diff
    b = tj - 2 * k - a
    return k, a, b, lam


_d_params_nb = njit()(_d_params)


@njit()
def _jacobi_nb(n, a, b, x):
    """P_n^{(a,b)}(x) by the three-term recurrence (a, b >= 0)."""
    if n == 0:
        return 1.0
    p0 = 1.0
    p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for k in range(2, n + 1):
        s = 2.0 * k + a + b
        c1 = 2.0 * k * (k + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b)
        c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
    return p1


@njit(**numba_parallel)
def small_d_block_nb(tj, tm1s, tm2s, betas, lnfact):
    nb = betas.shape[0]
    n1 = tm1s.shape[0]
    n2 = tm2s.shape[0]
    out = np.empty((nb, n1, n2))
    for ib in prange(nb):
        beta = betas[ib]
        x = math.cos(beta)
        sh = math.sin(0.5 * beta)
        ch = math.cos(0.5 * beta)
        for i1 in range(n1):
            for i2 in range(n2):
                k, a, b, lam = _d_params_nb(tj, tm1s[i1], tm2s[i2])
                logpre = 0.5 * (
                    lnfact[tj - k] - lnfact[k + a] - lnfact[tj - 2 * k - a]
                    - lnfact[k + b] + lnfact[k] + lnfact[b]
                )
                val = math.exp(logpre) * _jacobi_nb(k, a, b, x)
                if a > 0:
                    val *= sh ** a
                if b > 0:
                    val *= ch ** b
                if lam % 2 != 0:
                    val = -val
                out[ib, i1, i2] = val
    return out


def _jacobi_np(n, a, b, x):
    p0 = np.ones_like(x)
    if n == 0:
        return p0
    p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for k in range(2, n + 1):
        s = 2.0 * k + a + b
        c1 = 2.0 * k * (k + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b)
        c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
    return p1


def small_d_block_np(tj, tm1s, tm2s, betas, lnfact):
    betas = np.asarray(betas, dtype=float)
    x = np.cos(betas)
    sh = np.sin(0.5 * betas)
    ch = np.cos(0.5 * betas)
    out = np.empty((betas.size, len(tm1s), len(tm2s)))
    for i1, tm1 in enumerate(tm1s):
        for i2, tm2 in enumerate(tm2s):
            k, a, b, lam = _d_params(int(tj), int(tm1), int(tm2))
            logpre = 0.5 * (
                lnfact[tj - k] - lnfact[k + a] - lnfact[tj - 2 * k - a]
                - lnfact[k + b] + lnfact[k] + lnfact[b]
            )
            val = math.exp(logpre) * _jacobi_np(k, a, b, x)
            if a > 0:
                val = val * sh ** a
            if b > 0:
                val = val * ch ** b
            out[:, i1, i2] = -val if lam % 2 else val
    return out


@njit()
def jacobi_eigvals_sym_nb(a, tol, max_sweeps):
    a = a.copy()
    n = a.shape[0]
    scale = 0.0
    for i in range(n):
        for k in range(n):
            scale += a[i, k] * a[i, k]
    scale = math.sqrt(scale)
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if math.sqrt(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for r in range(n):
                    arp = a[r, p]
                    arq = a[r, q]
                    a[r, p] = c * arp - s * arq
                    a[r, q] = s * arp + c * arq
                for r in range(n):
                    apr = a[p, r]
                    aqr = a[q, r]
                    a[p, r] = c * apr - s * aqr
                    a[q, r] = s * apr + c * aqr
    out = np.empty(n)
    for i in range(n):
        out[i] = a[i, i]
    return out


def jacobi_eigvals_sym_np(a, tol, max_sweeps):
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    scale = np.linalg.norm(a)
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        if np.sqrt(np.sum(a[iu] ** 2)) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                cp = a[:, p].copy()
                a[:, p] = c * cp - s * a[:, q]
                a[:, q] = s * cp + c * a[:, q]
                rp = a[p, :].copy()
                a[p, :] = c * rp - s * a[q, :]
                a[q, :] = s * rp + c * a[q, :]
    return np.diag(a).copy()


@njit(**numba_parallel)
def triple_trace_table_nb(left, right, last):
    """K[i, k] = Tr(left[i] @ right[k] @ last)."""
    nl = left.shape[0]
    nr = right.shape[0]
    n = last.shape[0]
    tail = np.empty((nr, n, n), dtype=np.complex128)
    for k in prange(nr):
        tail[k] = right[k] @ last
    out = np.empty((nl, nr), dtype=np.complex128)
    for i in prange(nl):
        for k in range(nr):
            acc = 0.0 + 0.0j
            for a in range(n):
                for b in range(n):
                    acc += left[i, a, b] * tail[k, b, a]
            out[i, k] = acc
    return out


def triple_trace_table_np(left, right, last):
    tail = right @ last
    n = last.shape[0]
    # Tr(X Y) = sum_ab X_ab Y_ba
    return left.reshape(left.shape[0], n * n) @ tail.transpose(0, 2, 1).reshape(tail.shape[0], n * n).T


if USE_NUMBA:
    small_d_block = small_d_block_nb
    jacobi_eigvals_sym = jacobi_eigvals_sym_nb
else:
    small_d_block = small_d_block_np
    jacobi_eigvals_sym = jacobi_eigvals_sym_np

# One BLAS matmul beats the compiled loop at every size we use (see
# benchmarks/bench_kernels.py), so the table always takes the numpy path.
triple_trace_table = triple_trace_table_np
