import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spintomo.errors import DimensionError, NotHermitianError
from spintomo.matrix import (
    DensityMatrix,
    add,
    adjoint,
    as_matrix,
    eigvals_hermitian,
    frobenius_norm,
    from_json_obj,
    is_hermitian,
    load_matrix,
    max_abs_diff,
    multiply,
    save_matrix,
    scale,
    to_json_obj,
    trace,
)

from conftest import random_hermitian


def test_plumbing_basics(rng):
    a, b = random_hermitian(3, rng), rng.normal(size=(3, 3)) + 0j
    assert np.allclose(multiply(a, b), a @ b)
    assert np.allclose(add(a, b), a + b)
    assert np.allclose(scale(a, 2j), 2j * a)
    assert np.allclose(adjoint(b), b.conj().T)
    assert trace(multiply(a, b)) == pytest.approx(trace(multiply(b, a)))
    assert frobenius_norm(np.eye(4)) == pytest.approx(2.0)
    assert max_abs_diff(a, a) == 0.0
    assert is_hermitian(a) and not is_hermitian(b + 1j * np.eye(3))


def test_dimension_errors():
    with pytest.raises(DimensionError):
        multiply(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError):
        as_matrix(np.zeros((2, 3)))
    with pytest.raises(DimensionError):
        as_matrix(np.zeros((0, 0)))


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2 ** 32 - 1))
def test_eigvals_match_lapack(n, seed):
    a = random_hermitian(n, np.random.default_rng(seed))
    ours = eigvals_hermitian(a)
    ref = np.sort(np.linalg.eigvalsh(a))[::-1]
    assert np.max(np.abs(ours - ref)) < 1e-12 * max(1.0, np.max(np.abs(ref)))


def test_eigvals_descending_and_degenerate():
    lam = eigvals_hermitian(np.diag([1.0, 3.0, 3.0, -2.0]))
    assert np.allclose(lam, [3, 3, 1, -2])


def test_eigvals_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        eigvals_hermitian(np.array([[0, 1], [0, 0]]))


def test_eigvals_dimension_101():
    rng = np.random.default_rng(1)
    a = random_hermitian(101, rng)
    assert np.allclose(eigvals_hermitian(a), np.sort(np.linalg.eigvalsh(a))[::-1], atol=1e-10)


def test_density_matrix_invariants():
    rho = DensityMatrix(np.diag([0.25, 0.75]))
    assert rho.dim == 2 and rho.twice_j == 1
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(np.eye(2))
    with pytest.raises(ValueError, match="negative"):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError, match="Hermitian"):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(ValueError, match="read-only"):
        rho.mat[0, 0] = 1
    with pytest.raises(AttributeError):
        rho.herm_tol = 1.0


def test_json_roundtrip_bit_exact(tmp_path, rng):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    path = tmp_path / "m.json"
    save_matrix(path, a)
    assert np.array_equal(load_matrix(path), a)
    obj = json.loads(path.read_text())
    assert set(obj) == {"dim", "re", "im"} and obj["dim"] == 3
    assert np.array_equal(from_json_obj(to_json_obj(a)), a)


def test_json_malformed():
    with pytest.raises(ValueError):
        from_json_obj({"re": [[1]]})
    with pytest.raises(DimensionError):
        from_json_obj({"dim": 2, "re": [[1]], "im": [[0]]})
