"""Half-integer labels and SU(2) special functions.

Angular-momentum labels are carried as doubled integers so that parity and
triangle checks are exact. Factorial ratios are formed in log-domain with
the sign tracked separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

import numpy as np

from . import _kernels
from .errors import LabelError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, order=True)
class HalfInt:
    """A half-integer stored as ``twice`` = 2 * value."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, (int, np.integer)) or isinstance(self.twice, bool):
            raise TypeError(f"twice must be an integer, got {self.twice!r}")
        object.__setattr__(self, "twice", int(self.twice))

    @classmethod
    def of(cls, value) -> HalfInt:
        """Build from a HalfInt, an int, a Fraction or a float multiple of 1/2."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            return cls(2 * int(value))
        if isinstance(value, Fraction):
            doubled = 2 * value
            if doubled.denominator != 1:
                raise LabelError(f"{value} is not a half-integer")
            return cls(int(doubled))
        if isinstance(value, Real):
            doubled = 2.0 * float(value)
            if not math.isfinite(doubled) or abs(doubled - round(doubled)) > 1e-9:
                raise LabelError(f"{value} is not a half-integer")
            return cls(int(round(doubled)))
        raise TypeError(f"cannot interpret {value!r} as a half-integer")

    @property
    def value(self) -> float:
        return self.twice / 2

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __float__(self):
        return self.twice / 2

    def __neg__(self):
        return HalfInt(-self.twice)

    def __str__(self):
        return str(self.twice // 2) if self.is_integer else f"{self.twice}/2"


def half(value) -> HalfInt:
    return HalfInt.of(value)


def check_jm(j, m) -> tuple[int, int]:
    """Validate a (j, m) pair and return the doubled integers."""
    tj, tm = half(j).twice, half(m).twice
    if tj < 0 or abs(tm) > tj or (tj - tm) % 2:
        raise LabelError(f"invalid angular-momentum pair j={tj}/2, m={tm}/2")
    return tj, tm


def m_values(j) -> np.ndarray:
    """Doubled projections 2j, 2j-2, ..., -2j (descending, matrix row order)."""
    tj = half(j).twice
    if tj < 0:
        raise LabelError(f"negative spin {tj}/2")
    return np.arange(tj, -tj - 1, -2)


def m_index(j, m) -> int:
    """Row index of |j m> in the descending-m basis."""
    tj, tm = check_jm(j, m)
    return (tj - tm) // 2


@dataclass(frozen=True)
class EulerAngles:
    """zyz Euler angles; alpha and gamma are reduced modulo 2*pi."""

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        vals = (self.alpha, self.beta, self.gamma)
        if not all(math.isfinite(float(v)) for v in vals):
            raise ValueError(f"Euler angles must be finite, got {vals}")
        if not 0.0 <= float(self.beta) <= math.pi:
            raise ValueError(f"beta must lie in [0, pi], got {self.beta}")
        object.__setattr__(self, "alpha", float(self.alpha) % TWO_PI)
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "gamma", float(self.gamma) % TWO_PI)


def ln_factorial(n: int) -> float:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    if n <= _kernels.LNFACT_MAX:
        return float(_kernels.LNFACT[n])
    return math.lgamma(n + 1.0)


def _triangle(ta, tb, tc):
    return (ta + tb + tc) % 2 == 0 and abs(ta - tb) <= tc <= ta + tb


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """<j1 m1; j2 m2 | J M> in the Condon-Shortley convention (Racah sum)."""
    tj1, tm1 = check_jm(j1, m1)
    tj2, tm2 = check_jm(j2, m2)
    tJ, tM = check_jm(J, M)
    if tM != tm1 + tm2 or not _triangle(tj1, tj2, tJ):
        return 0.0
    # integer arguments of the factorials
    a = (tj1 + tj2 - tJ) // 2
    b = (tj1 - tj2 + tJ) // 2
    c = (-tj1 + tj2 + tJ) // 2
    s = (tj1 + tj2 + tJ) // 2 + 1
    log_pre = 0.5 * (
        math.log(tJ + 1)
        + ln_factorial(a) + ln_factorial(b) + ln_factorial(c) - ln_factorial(s)
        + ln_factorial((tj1 + tm1) // 2) + ln_factorial((tj1 - tm1) // 2)
        + ln_factorial((tj2 + tm2) // 2) + ln_factorial((tj2 - tm2) // 2)
        + ln_factorial((tJ + tM) // 2) + ln_factorial((tJ - tM) // 2)
    )
    d1 = (tj1 - tm1) // 2
    d2 = (tj2 + tm2) // 2
    d3 = (tJ - tj2 + tm1) // 2
    d4 = (tJ - tj1 - tm2) // 2
    kmin = max(0, -d3, -d4)
    kmax = min(a, d1, d2)
    terms = []
    for k in range(kmin, kmax + 1):
        log_den = (ln_factorial(k) + ln_factorial(a - k) + ln_factorial(d1 - k)
                   + ln_factorial(d2 - k) + ln_factorial(d3 + k) + ln_factorial(d4 + k))
        terms.append((-1.0) ** k * math.exp(log_pre - log_den))
    return math.fsum(terms)


def wigner_small_d_sum(j, m1, m2, beta: float) -> float:
    """d^j_{m1 m2}(beta) by the explicit alternating factorial sum.

    Exact in structure but loses digits to cancellation for large j; used as
    a cross-check of :func:`wigner_small_d` at small spin.
    """
    tj, tm1 = check_jm(j, m1)
    _, tm2 = check_jm(j, m2)
    jm1 = (tj - tm1) // 2
    jp2 = (tj + tm2) // 2
    diff = (tm1 - tm2) // 2
    ch, sh = math.cos(beta / 2), -math.sin(beta / 2)
    log_root = 0.5 * (ln_factorial((tj + tm2) // 2) + ln_factorial((tj - tm2) // 2)
                      + ln_factorial((tj + tm1) // 2) + ln_factorial(jm1))
    terms = []
    for s in range(max(0, -diff), min(jm1, jp2) + 1):
        log_den = (ln_factorial(s) + ln_factorial(jm1 - s)
                   + ln_factorial(jp2 - s) + ln_factorial(diff + s))
        pc = tj - 2 * s - diff
        ps = diff + 2 * s
        terms.append((-1.0) ** s * math.exp(log_root - log_den) * ch ** pc * sh ** ps)
    return math.fsum(terms)


def wigner_small_d(j, m1, m2, beta: float) -> float:
    """d^j_{m1 m2}(beta); stable for j well beyond 50."""
    tj, tm1 = check_jm(j, m1)
    _, tm2 = check_jm(j, m2)
    table = _kernels.small_d_block(
        tj, np.array([tm1]), np.array([tm2]), np.array([float(beta)]), _kernels.LNFACT
    )
    return float(table[0, 0, 0])


def small_d_matrix(j, betas) -> np.ndarray:
    """Stack of d^j(beta) matrices, shape (len(betas), 2j+1, 2j+1), rows m1 = j..-j."""
    tms = m_values(j)
    return _kernels.small_d_block(
        half(j).twice, tms, tms, np.atleast_1d(np.asarray(betas, dtype=float)), _kernels.LNFACT
    )


def wigner_D(j, m1, m2, angles: EulerAngles) -> complex:
    """D^j_{m1 m2} = exp(-i m2 alpha) exp(-i m1 gamma) d^j_{m1 m2}(beta)."""
    tm1, tm2 = half(m1).twice, half(m2).twice
    d = wigner_small_d(j, m1, m2, angles.beta)
    phase = -0.5 * (tm2 * angles.alpha + tm1 * angles.gamma)
    return complex(d * math.cos(phase), d * math.sin(phase))


def wigner_D_matrix(j, alphas, betas, gammas) -> np.ndarray:
    """Vectorised D^j matrices for arrays of angles, shape (n, 2j+1, 2j+1)."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    gammas = np.atleast_1d(np.asarray(gammas, dtype=float))
    d = small_d_matrix(j, betas)
    ms = m_values(j) / 2.0
    col = np.exp(-1j * np.multiply.outer(alphas, ms))   # m2 <-> alpha
    row = np.exp(-1j * np.multiply.outer(gammas, ms))   # m1 <-> gamma
    return row[:, :, None] * d * col[:, None, :]


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence."""
    if n < 0:
        raise ValueError("Hermite degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    h0 = np.ones_like(x)
    if n == 0:
        return h0 if h0.ndim else float(h0)
    h1 = 2.0 * x
    for k in range(1, n):
        h0, h1 = h1, 2.0 * x * h1 - 2.0 * k * h0
    return h1 if h1.ndim else float(h1)


def log_hermite_function_sq(n: int, x):
    """log of H_n(x)^2 exp(-x^2) / (2^n n! sqrt(pi)), evaluated without overflow.

    Uses the orthonormal recurrence
    h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1},
    rescaling whenever the running values grow large.
    """
    x = np.asarray(x, dtype=float)
    log_scale = -0.5 * x * x - 0.25 * math.log(math.pi)
    h_prev = np.zeros_like(x)
    h = np.ones_like(x)
    for k in range(n):
        h_prev, h = h, math.sqrt(2.0 / (k + 1)) * x * h - math.sqrt(k / (k + 1)) * h_prev
        big = np.abs(h) > 1e100
        if np.any(big):
            f = np.where(big, np.abs(h), 1.0)
            h = h / f
            h_prev = h_prev / f
            log_scale = log_scale + np.log(f)
    with np.errstate(divide="ignore"):
        out = 2.0 * (np.log(np.abs(h)) + log_scale)
    return out if out.ndim else float(out)
