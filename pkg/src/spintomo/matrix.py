"""Small dense complex matrices.

Operators are plain ``numpy`` complex arrays of shape (n, n). Rows and
columns of a spin-j operator are indexed by m = j, j-1, ..., -j, so index 0
corresponds to m = j.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import DimensionError, NotHermitianError


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"expected a nonempty square matrix, got shape {a.shape}")
    return a


def _same_dim(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def multiply(a, b) -> np.ndarray:
    a, b = _same_dim(a, b)
    return a @ b


def add(a, b) -> np.ndarray:
    a, b = _same_dim(a, b)
    return a + b


def scale(a, s) -> np.ndarray:
    return complex(s) * as_matrix(a)


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a)))


def max_abs_diff(a, b) -> float:
    a, b = _same_dim(a, b)
    return float(np.max(np.abs(a - b)))


def is_hermitian(a, tol=1e-12) -> bool:
    a = as_matrix(a)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def eigvals_hermitian(a, tol=1e-12) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, descending, by cyclic Jacobi rotations.

    The complex problem A = X + iY is embedded as the real symmetric
    [[X, -Y], [Y, X]], whose spectrum is that of A with every value doubled.
    """
    a = as_matrix(a)
    if not is_hermitian(a, tol * max(1.0, np.max(np.abs(a)))):
        raise NotHermitianError("eigvals_hermitian requires a Hermitian matrix")
    a = 0.5 * (a + a.conj().T)
    x, y = a.real, a.imag
    big = np.block([[x, -y], [y, x]])
    lam = _kernels.jacobi_eigvals_sym(np.ascontiguousarray(big), 1e-15, 100)
    lam = np.sort(lam)[::-1]
    return lam[::2].copy()


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator."""

    mat: np.ndarray
    herm_tol: float = 1e-12
    trace_tol: float = 1e-12
    eig_tol: float = 1e-10

    def __post_init__(self):
        m = as_matrix(self.mat).copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)
        problems = self.violations()
        if problems:
            raise ValueError("not a density matrix: " + "; ".join(problems))

    def violations(self) -> list[str]:
        m = self.mat
        out = []
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > self.herm_tol:
            out.append(f"non-Hermitian by {herm:.3g}")
            return out
        tr = abs(np.trace(m) - 1.0)
        if tr > self.trace_tol:
            out.append(f"trace off by {tr:.3g}")
        lam_min = float(eigvals_hermitian(m, tol=self.herm_tol)[-1])
        if lam_min < -self.eig_tol:
            out.append(f"negative eigenvalue {lam_min:.3g}")
        return out

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def twice_j(self) -> int:
        return self.dim - 1


def to_json_obj(a) -> dict:
    a = as_matrix(a)
    return {"dim": a.shape[0], "re": a.real.tolist(), "im": a.imag.tolist()}


def from_json_obj(obj) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise DimensionError(f"matrix arrays do not match dim={dim}")
    return re + 1j * im


def save_matrix(path, a):
    Path(path).write_text(json.dumps(to_json_obj(a)))


def load_matrix(path) -> np.ndarray:
    return from_json_obj(json.loads(Path(path).read_text()))
