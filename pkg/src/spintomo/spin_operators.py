"""Spin-j operators: J_z, ladders, rotations, polarization operators T_LM and
the trace-orthogonal diagonal basis S_L built from powers of J_z."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import LabelError
from .su2 import EulerAngles, check_jm, clebsch_gordan, half, m_index, m_values, wigner_D_matrix


def dim_of(j) -> int:
    return half(j).twice + 1


def jz_matrix(j) -> np.ndarray:
    return np.diag(m_values(j) / 2.0).astype(complex)


def jplus_matrix(j) -> np.ndarray:
    tj = half(j).twice
    jv = tj / 2
    ms = m_values(j)[1:] / 2.0
    # <m+1| J+ |m> sits one row above m
    return np.diag(np.sqrt(jv * (jv + 1) - ms * (ms + 1)), 1).astype(complex)


def jminus_matrix(j) -> np.ndarray:
    return jplus_matrix(j).conj().T


def rotation_matrix(j, angles: EulerAngles) -> np.ndarray:
    """u with entries u[m1, m2] = D^j_{m1 m2}(alpha, beta, gamma)."""
    return wigner_D_matrix(j, angles.alpha, angles.beta, angles.gamma)[0]


def rotate(op, u) -> np.ndarray:
    """u^dagger op u."""
    return u.conj().T @ op @ u


def projector(j, m) -> np.ndarray:
    n = dim_of(j)
    out = np.zeros((n, n), dtype=complex)
    k = m_index(j, m)
    out[k, k] = 1.0
    return out


def parity_matrix(j) -> np.ndarray:
    """The swap |j m> <-> |j -m>."""
    return np.eye(dim_of(j), dtype=complex)[::-1].copy()


def tensor_operator(j, L, M) -> np.ndarray:
    """Polarization operator T_LM with entry (m2, m1) = (-1)^{j-m1} <j m2; j -m1 | L M>."""
    tj = half(j).twice
    tL, tM = half(L).twice, half(M).twice
    if tL % 2 or tL < 0 or tL > 2 * tj:
        raise LabelError(f"L must be an integer in [0, 2j], got {tL}/2")
    check_jm(L, M)
    ms = m_values(j)
    n = len(ms)
    out = np.zeros((n, n), dtype=complex)
    for c, tm1 in enumerate(ms):
        sign = -1.0 if ((tj - tm1) // 2) % 2 else 1.0
        for r, tm2 in enumerate(ms):
            if tm2 - tm1 != tM:
                continue
            out[r, c] = sign * clebsch_gordan(
                Fraction(tj, 2), Fraction(tm2, 2), Fraction(tj, 2), Fraction(-tm1, 2),
                Fraction(tL, 2), Fraction(tM, 2),
            )
    return out


def _trace_jz_power_exact(tj: int, k: int) -> Fraction:
    if k % 2:
        return Fraction(0)
    return sum((Fraction(tm, 2) ** k for tm in range(-tj, tj + 1, 2)), Fraction(0))


def trace_jz_power(j, k: int) -> float:
    """Sum over m = -j..j of m**k, summed exactly."""
    if k < 0:
        raise ValueError("power must be nonnegative")
    return float(_trace_jz_power_exact(half(j).twice, k))


def _cramer_system_exact(tj: int, L: int):
    n, odd = divmod(L, 2)
    shift = 2 if odd else 0
    mat = [[_trace_jz_power_exact(tj, 2 * (p + q) + shift) for q in range(n)] for p in range(n)]
    rhs = [_trace_jz_power_exact(tj, 2 * n + 2 * p + shift) for p in range(n)]
    return mat, rhs


def cramer_system(j, L: int):
    """(matrix, right-hand column) of the linear system fixing S_L.

    Even L = 2n: unknowns a_0, a_2, ..., a_{2n-2} against Tr J_z^{2(p+q)};
    odd L = 2n+1: b_1, ..., b_{2n-1} against Tr J_z^{2(p+q)+2}.
    """
    mat, rhs = _cramer_system_exact(half(j).twice, L)
    n = len(rhs)
    return np.array(mat, dtype=float).reshape(n, n), np.array(rhs, dtype=float)


def _solve_exact(mat, rhs):
    """Gaussian elimination over the rationals."""
    n = len(rhs)
    a = [row[:] + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _det_exact(mat):
    n = len(mat)
    a = [row[:] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def cramer_determinant(j, L: int) -> float:
    """Delta_L, the determinant of the trace matrix of the S_L system (1 if empty)."""
    mat, _ = _cramer_system_exact(half(j).twice, L)
    return float(_det_exact(mat))


def cramer_coefficients(j, L: int) -> np.ndarray:
    """Polynomial coefficients (power 0..L) of S_L with the determinant normalization
    a_L = -Delta_L and lower coefficients Delta_L^{(i)} (column-replaced determinants)."""
    mat, rhs = _cramer_system_exact(half(j).twice, L)
    n = len(rhs)
    coeffs = [Fraction(0)] * (L + 1)
    coeffs[L] = -_det_exact(mat)
    for i in range(n):
        repl = [row[:i] + [r] + row[i + 1:] for row, r in zip(mat, rhs)]
        coeffs[L % 2 + 2 * i] = _det_exact(repl)
    return np.array([float(c) for c in coeffs])


def _leading(L: int) -> Fraction:
    # reproduces S_0 = I, S_1 = J_z, S_2 = 3J_z^2 - ..., S_3 = 5J_z^3 - ...
    return Fraction(1) if L == 0 else Fraction(2 * L - 1)


@dataclass(frozen=True)
class SLBasis:
    """Diagonal operators S_0..S_{2j} as polynomials in J_z.

    ``coeffs[L][k]`` is the coefficient of J_z^k in S_L, ``diags[L]`` the
    diagonal of S_L in descending-m order and ``norms[L]`` = Tr(S_L^2).
    """

    twice_j: int
    coeffs: tuple
    diags: np.ndarray
    norms: np.ndarray

    @property
    def j(self) -> float:
        return self.twice_j / 2

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    def op(self, L: int) -> np.ndarray:
        return np.diag(self.diags[L]).astype(complex)

    @property
    def ops(self) -> list:
        return [self.op(L) for L in range(self.dim)]

    def rescaled(self, factors) -> SLBasis:
        """Same basis with S_L multiplied by factors[L]; norms recomputed."""
        factors = np.asarray(factors, dtype=float)
        diags = self.diags * factors[:, None]
        return SLBasis(
            self.twice_j,
            tuple(c * f for c, f in zip(self.coeffs, factors)),
            diags,
            np.sum(diags ** 2, axis=1),
        )


def sl_basis(j, normalization: str = "standard") -> SLBasis:
    """Build S_L for L = 0..2j from the trace-orthogonality systems.

    The systems have rational entries and are solved exactly, so the basis is
    orthogonal to rounding even at j = 11/2 where the trace matrices are badly
    conditioned. ``normalization="standard"`` fixes the leading coefficient to
    2L-1 (1 for L=0), giving S_0 = I, S_1 = J_z, S_2 = 3J_z^2 - j(j+1),
    S_3 = 5J_z^3 - (3j^2+3j-1)J_z; ``"cramer"`` keeps a_L = -Delta_L.
    """
    if normalization not in ("standard", "cramer"):
        raise ValueError(f"unknown normalization {normalization!r}")
    tj = half(j).twice
    if tj < 0:
        raise LabelError("negative spin")
    coeffs, diags = [], []
    for L in range(tj + 1):
        mat, rhs = _cramer_system_exact(tj, L)
        c = [Fraction(0)] * (L + 1)
        c[L] = Fraction(1)
        for i, x in enumerate(_solve_exact(mat, rhs)):
            c[L % 2 + 2 * i] = -x
        if normalization == "cramer":
            c = [-_det_exact(mat) * x for x in c]
        else:
            c = [_leading(L) * x for x in c]
        coeffs.append(np.array([float(x) for x in c]))
        diags.append([float(sum(x * Fraction(tm, 2) ** k for k, x in enumerate(c)))
                      for tm in range(tj, -tj - 1, -2)])
    diags = np.array(diags)
    return SLBasis(tj, tuple(coeffs), diags, np.sum(diags ** 2, axis=1))


def f_function(basis: SLBasis, L: int, m) -> float:
    """f_L(m) = S_L(m) / Tr(S_L^2) (coefficient form)."""
    tm = half(m).twice
    check_jm(Fraction(basis.twice_j, 2), Fraction(tm, 2))
    c = basis.coeffs[L]
    return float(np.polynomial.polynomial.polyval(tm / 2.0, c) / basis.norms[L])


def f_values(basis: SLBasis, m) -> np.ndarray:
    """All f_L(m), L = 0..2j, read off the stored diagonals."""
    k = m_index(Fraction(basis.twice_j, 2), m)
    return basis.diags[:, k] / basis.norms


def f_function_cg(basis: SLBasis, L: int, m) -> float:
    """[Tr S_L^2]^{-1/2} (-1)^{j-m} <j m; j -m | L 0>."""
    tj, tm = basis.twice_j, half(m).twice
    check_jm(Fraction(tj, 2), Fraction(tm, 2))
    sign = -1.0 if ((tj - tm) // 2) % 2 else 1.0
    cg = clebsch_gordan(Fraction(tj, 2), Fraction(tm, 2), Fraction(tj, 2), Fraction(-tm, 2), L, 0)
    return sign * cg / math.sqrt(basis.norms[L])


def f_recurrence(basis: SLBasis, m) -> np.ndarray:
    """f_0..f_{2j} at m from f_0, f_1 via the three-term recurrence in L."""
    tj = basis.twice_j
    jj = tj  # 2j
    mv = half(m).twice / 2.0
    norms = basis.norms
    f = np.zeros(tj + 1)
    f[0] = f_function(basis, 0, m)
    if tj >= 1:
        f[1] = f_function(basis, 1, m)
    for L in range(2, tj + 1):
        pre = math.sqrt(4.0 * (2 * L - 1) * (2 * L + 1)
                        / (L * L * (jj - L + 1) * (jj + L + 1) * norms[L]))
        back = math.sqrt((L - 1) ** 2 * (jj - L + 2) * (jj + L) * norms[L - 2]
                         / (4.0 * (2 * L - 3) * (2 * L - 1)))
        f[L] = pre * (math.sqrt(norms[L - 1]) * mv * f[L - 1] - back * f[L - 2])
    return f


def projector_expansion(basis: SLBasis, m) -> np.ndarray:
    """sum_L f_L(m) S_L."""
    return np.diag(f_values(basis, m) @ basis.diags).astype(complex)
