"""Dequantizers, quantizers, tomograms and reconstruction on exact grids.

A tomographic point x = (m, alpha, beta, gamma) pairs a spin projection with
the Euler angles of a rotation u. The dequantizer U(x) = u^dag |jm><jm| u
turns an operator into its tomographic symbol Tr(A U(x)); the quantizer D(x)
maps symbols back through the integral over the sample space

    int dx = sum_m 1/(8 pi^2) int dalpha int sin(beta) dbeta int dgamma.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import expm

from .errors import ConvergenceError, DimensionError, GridMismatchError, ReconstructionError, SingularityError
from .matrix import DensityMatrix, as_matrix, eigvals_hermitian
from .spin_operators import SLBasis, jz_matrix, rotation_matrix, sl_basis
from .su2 import (
    EulerAngles,
    HalfInt,
    check_jm,
    half,
    log_hermite_function_sq,
    m_index,
    m_values,
    small_d_matrix,
    wigner_small_d,
)


@dataclass(frozen=True)
class TomographyPoint:
    m: HalfInt
    angles: EulerAngles = field(default_factory=EulerAngles)

    def __post_init__(self):
        object.__setattr__(self, "m", half(self.m))

    @classmethod
    def of(cls, m, alpha=0.0, beta=0.0, gamma=0.0) -> TomographyPoint:
        return cls(half(m), EulerAngles(alpha, beta, gamma))


def _spin(j) -> Fraction:
    return Fraction(half(j).twice, 2)


def _check_point(j, x: TomographyPoint):
    check_jm(_spin(j), Fraction(x.m.twice, 2))


@lru_cache(maxsize=64)
def cached_basis(twice_j: int) -> SLBasis:
    return sl_basis(Fraction(twice_j, 2))


def _basis(j, basis):
    return cached_basis(half(j).twice) if basis is None else basis


def _frame_diagonal(basis: SLBasis, m, weights) -> np.ndarray:
    """Diagonal of sum_L weights[L] f_L(m) S_L in the unrotated frame."""
    k = m_index(Fraction(basis.twice_j, 2), m)
    f = basis.diags[:, k] / basis.norms
    return (np.asarray(weights) * f) @ basis.diags


def dequantizer(j, x: TomographyPoint, basis: SLBasis | None = None) -> np.ndarray:
    """U(x) = sum_L f_L(m) u^dag S_L u."""
    _check_point(j, x)
    basis = _basis(j, basis)
    u = rotation_matrix(_spin(j), x.angles)
    diag = _frame_diagonal(basis, x.m, np.ones(basis.dim))
    return u.conj().T @ (diag[:, None] * u)


def quantizer(j, x: TomographyPoint, basis: SLBasis | None = None) -> np.ndarray:
    """D(x) = sum_L (2L+1) f_L(m) u^dag S_L u."""
    _check_point(j, x)
    basis = _basis(j, basis)
    u = rotation_matrix(_spin(j), x.angles)
    diag = _frame_diagonal(basis, x.m, 2.0 * np.arange(basis.dim) + 1.0)
    return u.conj().T @ (diag[:, None] * u)


def _rotated_jz(j, x):
    u = rotation_matrix(_spin(j), x.angles)
    return u.conj().T @ jz_matrix(_spin(j)) @ u


def dequantizer_exponential(j, x: TomographyPoint, n_phi: int | None = None) -> np.ndarray:
    """(1/2pi) int_0^{2pi} exp[i (m - u^dag J_z u) phi] dphi as a uniform sum.

    The integrand is a trigonometric polynomial of degree <= 2j, so 4j+3
    equally spaced nodes integrate it exactly.
    """
    _check_point(j, x)
    tj = half(j).twice
    n_phi = 2 * tj + 3 if n_phi is None else n_phi
    gen = x.m.value * np.eye(tj + 1) - _rotated_jz(j, x)
    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    return sum(expm(1j * phi * gen) for phi in phis) / n_phi


def quantizer_exponential(j, x: TomographyPoint, n_phi: int | None = None) -> np.ndarray:
    """((2j+1)/pi) int_0^{2pi} sin^2(phi/2) exp[i (m - u^dag J_z u) phi] dphi."""
    _check_point(j, x)
    tj = half(j).twice
    n_phi = 2 * tj + 5 if n_phi is None else n_phi
    gen = x.m.value * np.eye(tj + 1) - _rotated_jz(j, x)
    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    acc = sum(math.sin(phi / 2) ** 2 * expm(1j * phi * gen) for phi in phis)
    return (tj + 1) * 2.0 / n_phi * acc


def shift_matrices(j) -> tuple[np.ndarray, np.ndarray]:
    """(R_plus, R_minus): ones on the superdiagonal and its adjoint."""
    n = half(j).twice + 1
    rp = np.eye(n, k=1, dtype=complex)
    return rp, rp.T.copy()


def _rotated_shifts(j, x):
    u = rotation_matrix(_spin(j), x.angles)
    rp, rm = shift_matrices(j)
    return u.conj().T @ rp @ u, u.conj().T @ rm @ u


def quantizer_from_dequantizer(j, x: TomographyPoint, u_op=None, basis=None) -> np.ndarray:
    """(2j+1) [U - R+(u) U R-(u)/2 - R-(u) U R+(u)/2] with R+-(u) = u^dag R+- u."""
    u_op = dequantizer(j, x, basis) if u_op is None else as_matrix(u_op)
    rp, rm = _rotated_shifts(j, x)
    return (half(j).twice + 1) * (u_op - 0.5 * rp @ u_op @ rm - 0.5 * rm @ u_op @ rp)


def default_series_cap(j, tol, scale=1.0) -> int:
    """Iteration cap for :func:`dequantizer_from_quantizer`.

    The shift-averaging map contracts by cos(pi/(2j+2)) per step, so reaching
    ``tol`` from a start of size ``scale`` needs about log(tol/scale)/log(rate)
    terms. The cap allows twice that, and never fewer than 10(2j+1).
    """
    tj = half(j).twice
    rate = math.cos(math.pi / (tj + 2))
    need = math.log(tol / max(scale, tol)) / math.log(rate) if tj else 1
    return max(10 * (tj + 1), 2 * math.ceil(need))


def dequantizer_from_quantizer(j, x: TomographyPoint, tol: float = 1e-10,
                               max_iter: int | None = None, d_op=None) -> np.ndarray:
    """Invert the R+- relation: U = (2j+1)^-1 sum_k D^(k),
    D^(k) = [R+(u) D^(k-1) R-(u) + R-(u) D^(k-1) R+(u)] / 2, D^(0) = D.

    ``d_op`` defaults to :func:`quantizer_from_dequantizer`, the operator this
    series inverts.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    d_k = quantizer_from_dequantizer(j, x) if d_op is None else as_matrix(d_op)
    if max_iter is None:
        max_iter = default_series_cap(j, tol, np.linalg.norm(d_k))
    rp, rm = _rotated_shifts(j, x)
    total = d_k.copy()
    for k in range(1, max_iter + 1):
        d_k = 0.5 * (rp @ d_k @ rm + rm @ d_k @ rp)
        total += d_k
        resid = float(np.linalg.norm(d_k))
        if resid < tol:
            return total / (half(j).twice + 1)
    raise ConvergenceError(
        f"series did not reach tol={tol:g} in {max_iter} terms (last term norm {resid:.3g})",
        residual=resid, iterations=max_iter,
    )


def tomogram_value(rho, x: TomographyPoint, basis=None) -> float:
    """w(x) = Tr(rho U(x))."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)
    tj = mat.shape[0] - 1
    try:
        _check_point(Fraction(tj, 2), x)
    except ValueError as exc:
        raise DimensionError(f"point {x} does not fit a {tj + 1}-dimensional state") from exc
    val = np.trace(mat @ dequantizer(Fraction(tj, 2), x, basis))
    if abs(val.imag) > 1e-12:
        raise ValueError(f"tomogram value has imaginary part {val.imag:.3g}; is rho Hermitian?")
    return float(val.real)


# quadrature ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Product rule for int dx over (m, beta, alpha, gamma).

    ``beta_weights`` integrate against sin(beta) dbeta (they sum to 2);
    alpha and gamma nodes are uniform on [0, 2pi). The weight of one angle
    node is beta_weight / (2 N_alpha N_gamma), so every m contributes 1 and
    the constant function integrates to 2j+1.
    """

    twice_j: int
    betas: np.ndarray
    beta_weights: np.ndarray
    alphas: np.ndarray
    gammas: np.ndarray
    oversample: int | None = None

    def __post_init__(self):
        for name in ("betas", "beta_weights", "alphas", "gammas"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(self.beta_weights <= 0):
            raise ValueError("quadrature weights must be positive")

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    @property
    def shape(self) -> tuple:
        return (self.dim, len(self.betas), len(self.alphas), len(self.gammas))

    @property
    def n_angles(self) -> int:
        return len(self.betas) * len(self.alphas) * len(self.gammas)

    def angle_weights(self) -> np.ndarray:
        """Weights of the (beta, alpha, gamma) nodes, flattened beta-major."""
        na, ng = len(self.alphas), len(self.gammas)
        w = self.beta_weights / (2.0 * na * ng)
        return np.repeat(w, na * ng)

    def angle_nodes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        b, a, g = np.meshgrid(self.betas, self.alphas, self.gammas, indexing="ij")
        return a.ravel(), b.ravel(), g.ravel()

    def weights(self) -> np.ndarray:
        """Full weight array of shape ``self.shape``."""
        return np.broadcast_to(self.angle_weights().reshape(self.shape[1:]), self.shape)

    def integrate(self, values) -> complex | float:
        values = np.asarray(values)
        if values.shape != self.shape:
            raise GridMismatchError(f"values of shape {values.shape} do not match grid {self.shape}")
        return np.sum(self.weights() * values)

    def same_as(self, other: QuadratureGrid) -> bool:
        return (self.twice_j == other.twice_j
                and all(np.array_equal(getattr(self, k), getattr(other, k))
                        for k in ("betas", "beta_weights", "alphas", "gammas")))


def make_grid(j, oversample: int = 1) -> QuadratureGrid:
    """Grid exact for integrands of harmonic degree <= 4j (times ``oversample``).

    N_beta = oversample(2j+1)+1 Gauss-Legendre nodes in cos(beta);
    N_alpha = N_gamma = oversample(4j+1)+1 uniform nodes.
    """
    if oversample < 1:
        raise ValueError("oversample must be a positive integer")
    tj = half(j).twice
    nb = oversample * (tj + 1) + 1
    na = oversample * (2 * tj + 1) + 1
    x, w = leggauss(nb)
    # descending cos(beta) -> ascending beta
    betas = np.arccos(x[::-1])
    ang = 2.0 * np.pi * np.arange(na) / na
    return QuadratureGrid(tj, betas, w[::-1], ang, ang.copy(), oversample)


def grid_rotations(grid: QuadratureGrid) -> np.ndarray:
    """u for every angle node, shape (n_angles, dim, dim), beta-major order."""
    j = Fraction(grid.twice_j, 2)
    d = small_d_matrix(j, grid.betas)                       # (nb, n, n)
    ms = m_values(j) / 2.0
    col = np.exp(-1j * np.multiply.outer(grid.alphas, ms))  # (na, n)
    row = np.exp(-1j * np.multiply.outer(grid.gammas, ms))  # (ng, n)
    u = (d[:, None, None, :, :]
         * row[None, None, :, :, None]
         * col[None, :, None, None, :])
    return u.reshape(-1, grid.dim, grid.dim)


def frame_diagonals(basis: SLBasis, quantizer: bool) -> np.ndarray:
    """Row k: diagonal of U or D at m = m_k in the unrotated frame."""
    f = (basis.diags / basis.norms[:, None]).T  # f[k, L] = f_L(m_k)
    if quantizer:
        f = f * (2.0 * np.arange(basis.dim) + 1.0)
    return f @ basis.diags


def grid_operators(grid: QuadratureGrid, kind: str = "dequantizer", basis=None) -> np.ndarray:
    """Stack of U(x) or D(x) over the whole grid, shape (dim * n_angles, dim, dim).

    Ordering matches ``Tomogram.values.ravel()`` (m outermost).
    """
    if kind not in ("dequantizer", "quantizer"):
        raise ValueError(f"unknown operator kind {kind!r}")
    basis = _basis(Fraction(grid.twice_j, 2), basis)
    u = grid_rotations(grid)
    diags = frame_diagonals(basis, kind == "quantizer")           # (n_m, n)
    ops = np.einsum("pka,mk,pkb->mpab", u.conj(), diags, u)
    return ops.reshape(-1, grid.dim, grid.dim)


def symbol_samples(a, grid: QuadratureGrid, kind: str = "dequantizer", basis=None) -> np.ndarray:
    """Tr(A U(x)) (or Tr(A D(x))) on every grid point, shape ``grid.shape``."""
    a = as_matrix(a)
    if a.shape[0] != grid.dim:
        raise DimensionError(f"{a.shape[0]}-dim operator on a {grid.dim}-dim grid")
    u = grid_rotations(grid)
    rot = u @ a @ u.conj().transpose(0, 2, 1)                     # u A u^dag
    diag = np.einsum("pkk->pk", rot)                              # (P, n)
    if kind == "dequantizer":
        vals = diag.T
    else:
        basis = _basis(Fraction(grid.twice_j, 2), basis)
        vals = frame_diagonals(basis, True) @ diag.T
    return vals.reshape(grid.shape)


def operator_from_samples(values, grid: QuadratureGrid, kind: str = "quantizer", basis=None) -> np.ndarray:
    """int f(x) D(x) dx (or with U(x)) by the grid rule."""
    values = np.asarray(values)
    if values.shape != grid.shape:
        raise GridMismatchError(f"values of shape {values.shape} do not match grid {grid.shape}")
    basis = _basis(Fraction(grid.twice_j, 2), basis)
    diags = frame_diagonals(basis, kind == "quantizer")          # (n_m, n)
    wv = values.reshape(grid.dim, -1) * grid.angle_weights()      # (n_m, P)
    c = wv.T @ diags                                              # (P, n)
    u = grid_rotations(grid)
    return np.einsum("pka,pk,pkb->ab", u.conj(), c, u)


@dataclass(frozen=True, eq=False)
class Tomogram:
    """Tomogram (or any symbol) sampled on a grid; values[m_index, ib, ia, ig]."""

    twice_j: int
    grid: QuadratureGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.grid.twice_j != self.twice_j or vals.shape != self.grid.shape:
            raise GridMismatchError(f"values {vals.shape} do not fit grid {self.grid.shape}")

    def m_sums(self) -> np.ndarray:
        """sum_m w(m, angles) at every angle node."""
        return self.values.sum(axis=0)

    def angle_integrals(self) -> np.ndarray:
        """(2j+1)/(8 pi^2) int w(m, angles) dangles for each m."""
        w = self.grid.angle_weights().reshape(self.grid.shape[1:])
        return self.dim * np.sum(self.values * w, axis=(1, 2, 3))

    @property
    def dim(self) -> int:
        return self.twice_j + 1


def sample_tomogram(rho, grid: QuadratureGrid) -> Tomogram:
    mat = rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)
    if mat.shape[0] != grid.dim:
        raise DimensionError(f"{mat.shape[0]}-dim state on a {grid.dim}-dim grid")
    vals = symbol_samples(mat, grid)
    if np.max(np.abs(vals.imag)) > 1e-12:
        raise ValueError("tomogram is not real; is rho Hermitian?")
    return Tomogram(grid.twice_j, grid, vals.real)


def reconstruct(w: Tomogram, basis=None, tol: float = 1e-10) -> DensityMatrix:
    """rho = int w(x) D(x) dx; raises ReconstructionError if the result is not a state."""
    rho = operator_from_samples(w.values, w.grid, "quantizer", basis)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    rho = 0.5 * (rho + rho.conj().T)
    diag = {"hermiticity": herm, "trace": complex(np.trace(rho))}
    try:
        diag["min_eigenvalue"] = float(eigvals_hermitian(rho)[-1])
        return DensityMatrix(rho, herm_tol=tol, trace_tol=tol, eig_tol=tol)
    except ValueError as exc:
        raise ReconstructionError(f"reconstruction is not a density matrix: {exc}", diag) from exc


# pure states -------------------------------------------------------------------


def pure_state_tomogram(j, mu, m, beta: float) -> float:
    """|D^j_{m mu}|^2 = d^j_{m mu}(beta)^2; independent of alpha and gamma."""
    return wigner_small_d(j, m, mu, beta) ** 2


def pure_state_tomogram_grid(j, mu, betas) -> np.ndarray:
    """w_{j mu}(m, beta) for all m (columns, descending) and the given betas (rows)."""
    from . import _kernels

    tj, tmu = check_jm(j, mu)
    d = _kernels.small_d_block(tj, m_values(_spin(j)), np.array([tmu]),
                               np.atleast_1d(np.asarray(betas, dtype=float)), _kernels.LNFACT)
    return d[:, :, 0] ** 2


def asymptotic_tomogram(j, mu, m, beta):
    """Large-j limit of the |j mu> tomogram:

    (pi j sin^2 beta)^(-1/2) [2^n n!]^-1 exp(-x^2) H_n(x)^2,
    n = j - mu, x = (m - j cos beta) / (sqrt(j) sin beta).
    """
    tj, tmu = check_jm(j, mu)
    if tj == 0:
        raise SingularityError("asymptotic form needs j > 0")
    jv = tj / 2
    sb = math.sin(beta)
    if abs(sb) < 1e-12:
        raise SingularityError(f"asymptotic tomogram is singular at beta={beta}")
    n = (tj - tmu) // 2
    x = (np.asarray(m, dtype=float) - jv * math.cos(beta)) / (math.sqrt(jv) * sb)
    out = np.exp(log_hermite_function_sq(n, x)) / math.sqrt(jv * sb * sb)
    return out if out.ndim else float(out)
