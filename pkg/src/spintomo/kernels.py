"""Symbols, dual symbols and the kernels of the star-product scheme.

Numeric kernels are traces of quantizer/dequantizer products and work for
any spin. Closed forms for qubits (j = 1/2) and qutrits (j = 1) are written
out term by term in the axis vectors n = (cos a sin b, sin a sin b, cos b),
independently of the trace code, so the two can be compared.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DimensionError, GridMismatchError
from .matrix import as_matrix
from .su2 import EulerAngles, half
from .tomography import (
    QuadratureGrid,
    Tomogram,
    TomographyPoint,
    dequantizer,
    grid_operators,
    make_grid,
    quantizer,
    symbol_samples,
)

MAX_STAR_TWICE_J = 2


@dataclass(frozen=True)
class AxisVector:
    n: np.ndarray

    def __post_init__(self):
        v = np.array(self.n, dtype=float).reshape(3)
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError(f"axis vector must be a unit vector, got |n|={np.linalg.norm(v)}")
        v.setflags(write=False)
        object.__setattr__(self, "n", v)


def axis_vector(angles: EulerAngles) -> AxisVector:
    a, b = angles.alpha, angles.beta
    return AxisVector(np.array([math.cos(a) * math.sin(b), math.sin(a) * math.sin(b), math.cos(b)]))


def _vec(n):
    return n.n if isinstance(n, AxisVector) else np.asarray(n, dtype=float)


def _mval(m):
    return float(half(m).value) if not isinstance(m, float) else m


def _spin_of(a) -> Fraction:
    return Fraction(a.shape[0] - 1, 2)


# symbols -----------------------------------------------------------------------


def symbol(a, x: TomographyPoint) -> complex:
    """f_A(x) = Tr(A U(x))."""
    a = as_matrix(a)
    return complex(np.trace(a @ dequantizer(_spin_of(a), x)))


def dual_symbol(b, x: TomographyPoint) -> complex:
    """f^d_B(x) = Tr(B D(x))."""
    b = as_matrix(b)
    return complex(np.trace(b @ quantizer(_spin_of(b), x)))


def symbol_tomogram(a, grid: QuadratureGrid, dual: bool = False) -> Tomogram:
    """Symbol (or dual symbol) samples of A on ``grid``."""
    vals = symbol_samples(a, grid, "quantizer" if dual else "dequantizer")
    return Tomogram(grid.twice_j, grid, vals)


# numeric kernels -----------------------------------------------------------------


def delta_kernel_numeric(j, x2: TomographyPoint, x1: TomographyPoint) -> complex:
    """Tr(D(x2) U(x1))."""
    return complex(np.trace(quantizer(j, x2) @ dequantizer(j, x1)))


def star_kernel_numeric(j, x3, x2, x1) -> complex:
    """K(x3, x2, x1) = Tr(D(x3) D(x2) U(x1))."""
    return complex(np.trace(quantizer(j, x3) @ quantizer(j, x2) @ dequantizer(j, x1)))


def dual_kernel_numeric(j, x3, x2, x1) -> complex:
    """K^d(x3, x2, x1) = Tr(U(x3) U(x2) D(x1))."""
    return complex(np.trace(dequantizer(j, x3) @ dequantizer(j, x2) @ quantizer(j, x1)))


# closed forms --------------------------------------------------------------------


def delta_kernel_qubit(m2, n2, m1, n1) -> float:
    m1, m2 = _mval(m1), _mval(m2)
    return 0.5 + 6.0 * m1 * m2 * float(_vec(n1) @ _vec(n2))


def delta_kernel_qutrit(m2, n2, m1, n1) -> float:
    m1, m2 = _mval(m1), _mval(m2)
    c = float(_vec(n1) @ _vec(n2))
    q1, q2 = 3 * m1 * m1 - 2, 3 * m2 * m2 - 2
    return 1 / 3 + 1.5 * m1 * m2 * c + 5 / 12 * q1 * q2 * (3 * c * c - 1)


def _qubit_three_point(m3, n3, m2, n2, m1, n1, c23, c_triple):
    m1, m2, m3 = _mval(m1), _mval(m2), _mval(m3)
    n1, n2, n3 = _vec(n1), _vec(n2), _vec(n3)
    triple = float(n1 @ np.cross(n2, n3))
    return complex(
        0.25 + 3 * m1 * m2 * (n1 @ n2) + c23 * m2 * m3 * (n2 @ n3) + 3 * m1 * m3 * (n3 @ n1),
        c_triple * m1 * m2 * m3 * triple,
    )


def star_kernel_qubit(m3, n3, m2, n2, m1, n1) -> complex:
    return _qubit_three_point(m3, n3, m2, n2, m1, n1, 9.0, 18.0)


def dual_kernel_qubit(m3, n3, m2, n2, m1, n1) -> complex:
    return _qubit_three_point(m3, n3, m2, n2, m1, n1, 1.0, 6.0)


# Coefficients of the qutrit three-point kernels, keyed by term family.
# p_ik: linear pairs m_i m_k (n_i.n_k); t: i m1 m2 m3 triple;
# q_ik: quadrupole pairs q_i q_k (3 (n_i.n_k)^2 - 1);
# mixed_i: q_i times the other two m's; iq_i: imaginary q q m triple terms;
# qqq: product of all three q's.
QUTRIT_STAR = {
    "p12": 1 / 2, "p23": 3 / 2, "p31": 1 / 2, "t": 9 / 8,
    "q12": 5 / 36, "q23": 25 / 36, "q31": 5 / 36,
    "mixed1": 3 / 8, "mixed2": 5 / 8, "mixed3": 5 / 8,
    "iq1": 25 / 8, "iq2": 15 / 8, "iq3": 15 / 8,
    "qqq": 25 / 72,
}

QUTRIT_DUAL = {
    "p12": 1 / 2, "p23": 1 / 6, "p31": 1 / 2, "t": 3 / 8,
    "q12": 5 / 36, "q23": 1 / 36, "q31": 5 / 36,
    "mixed1": 5 / 24, "mixed2": 1 / 8, "mixed3": 1 / 8,
    "iq1": 3 / 8, "iq2": 5 / 8, "iq3": 5 / 8,
    "qqq": 5 / 72,
}


def qutrit_kernel_terms(m3, n3, m2, n2, m1, n1) -> dict:
    """Value of each term family (without its numeric coefficient)."""
    m1, m2, m3 = _mval(m1), _mval(m2), _mval(m3)
    n1, n2, n3 = _vec(n1), _vec(n2), _vec(n3)
    q1, q2, q3 = (3 * m * m - 2 for m in (m1, m2, m3))
    c12, c23, c31 = float(n1 @ n2), float(n2 @ n3), float(n3 @ n1)
    triple = float(n1 @ np.cross(n2, n3))
    bracket = (3 * c12 * float(np.cross(n1, n3) @ np.cross(n2, n3))
               + 3 * c23 * float(np.cross(n2, n1) @ np.cross(n3, n1))
               + 3 * c31 * float(np.cross(n3, n2) @ np.cross(n1, n2)) - 2)
    return {
        "const": 1 / 9,
        "p12": m1 * m2 * c12,
        "p23": m2 * m3 * c23,
        "p31": m1 * m3 * c31,
        "t": 1j * m1 * m2 * m3 * triple,
        "q12": q1 * q2 * (3 * c12 ** 2 - 1),
        "q23": q2 * q3 * (3 * c23 ** 2 - 1),
        "q31": q1 * q3 * (3 * c31 ** 2 - 1),
        "mixed1": q1 * m2 * m3 * (3 * c12 * float(n1 @ n3) - c23),
        "mixed2": m1 * q2 * m3 * (3 * c23 * float(n2 @ n1) - c31),
        "mixed3": m1 * m2 * q3 * (3 * c31 * float(n3 @ n2) - c12),
        "iq1": 1j * m1 * q2 * q3 * c23 * triple,
        "iq2": 1j * q1 * m2 * q3 * c31 * triple,
        "iq3": 1j * q1 * q2 * m3 * c12 * triple,
        "qqq": q1 * q2 * q3 * bracket,
    }


def _qutrit_kernel(coeffs, *args) -> complex:
    terms = qutrit_kernel_terms(*args)
    return complex(terms["const"] + sum(coeffs[k] * terms[k] for k in coeffs))


def star_kernel_qutrit(m3, n3, m2, n2, m1, n1) -> complex:
    return _qutrit_kernel(QUTRIT_STAR, m3, n3, m2, n2, m1, n1)


def dual_kernel_qutrit(m3, n3, m2, n2, m1, n1) -> complex:
    return _qutrit_kernel(QUTRIT_DUAL, m3, n3, m2, n2, m1, n1)


CLOSED_FORMS = {
    ("delta", 1): delta_kernel_qubit,
    ("delta", 2): delta_kernel_qutrit,
    ("star", 1): star_kernel_qubit,
    ("star", 2): star_kernel_qutrit,
    ("dual", 1): dual_kernel_qubit,
    ("dual", 2): dual_kernel_qutrit,
}

NUMERIC_FORMS = {
    "delta": delta_kernel_numeric,
    "star": star_kernel_numeric,
    "dual": dual_kernel_numeric,
}


def closed_form(kind: str, j, *points: TomographyPoint) -> complex:
    """Evaluate a closed-form kernel at tomographic points (x3, x2, x1) or (x2, x1)."""
    try:
        fn = CLOSED_FORMS[(kind, half(j).twice)]
    except KeyError:
        raise ValueError(f"no closed form for {kind} kernel at j={half(j)}") from None
    args = []
    for x in points:
        args += [x.m.value, axis_vector(x.angles)]
    return complex(fn(*args))


# quadratures -----------------------------------------------------------------------


@lru_cache(maxsize=16)
def _stack(grid: QuadratureGrid, kind: str) -> np.ndarray:
    ops = np.ascontiguousarray(grid_operators(grid, kind))
    ops.setflags(write=False)
    return ops


def _flat_weights(grid):
    return np.tile(grid.angle_weights(), grid.dim)


def marginalize_kernel(j, x2: TomographyPoint, x1: TomographyPoint,
                       grid: QuadratureGrid | None = None) -> complex:
    """int K(x3, x2, x1) dx3 by quadrature over x3."""
    grid = make_grid(j) if grid is None else grid
    if grid.twice_j != half(j).twice:
        raise GridMismatchError("grid spin differs from j")
    d3 = _stack(grid, "quantizer")
    tail = quantizer(j, x2) @ dequantizer(j, x1)
    k = _kernels.triple_trace_table(d3, tail[None, :, :], np.eye(grid.dim, dtype=complex))[:, 0]
    return complex(_flat_weights(grid) @ k)


def _samples(f):
    if isinstance(f, Tomogram):
        return f.grid, f.values
    grid, values = f
    return grid, np.asarray(values)


def star_product(f_a, f_b, x1: TomographyPoint, allow_large: bool = False) -> complex:
    """(f_A * f_B)(x1) = int int f_A(x3) f_B(x2) K(x3, x2, x1) dx2 dx3.

    Symbols are given as Tomogram instances (or (grid, values) pairs) on one
    grid. The double quadrature costs O(grid^2) traces, so spins above 1 need
    ``allow_large=True``.
    """
    grid_a, va = _samples(f_a)
    grid_b, vb = _samples(f_b)
    if not grid_a.same_as(grid_b):
        raise GridMismatchError("star product needs both symbols on the same grid")
    if grid_a.twice_j > MAX_STAR_TWICE_J and not allow_large:
        raise ValueError("double quadrature above j=1 requires allow_large=True")
    j = Fraction(grid_a.twice_j, 2)
    d = _stack(grid_a, "quantizer")
    table = _kernels.triple_trace_table(d, d, dequantizer(j, x1))   # K[i3, i2]
    w = _flat_weights(grid_a)
    return complex((w * va.ravel()) @ table @ (w * vb.ravel()))


def star_product_samples(f_a, f_b, allow_large: bool = False) -> Tomogram:
    """f_A * f_B evaluated on every node of the common grid."""
    grid, _ = _samples(f_a)
    a, b, g = grid.angle_nodes()
    vals = np.empty(grid.shape, dtype=complex)
    flat = vals.reshape(grid.dim, -1)
    for k, tm in enumerate(range(grid.twice_j, -grid.twice_j - 1, -2)):
        for p in range(grid.n_angles):
            x1 = TomographyPoint.of(Fraction(tm, 2), a[p], b[p], g[p])
            flat[k, p] = star_product(f_a, f_b, x1, allow_large)
    return Tomogram(grid.twice_j, grid, vals)


def pairing(f_a, f_b_dual) -> complex:
    """int f_A(x) f^d_B(x) dx on a common grid."""
    grid_a, va = _samples(f_a)
    grid_b, vb = _samples(f_b_dual)
    if not grid_a.same_as(grid_b):
        raise GridMismatchError("pairing needs both symbols on the same grid")
    return complex(grid_a.integrate(va * vb))


def check_dim(a, j):
    if as_matrix(a).shape[0] != half(j).twice + 1:
        raise DimensionError("operator dimension does not match j")
