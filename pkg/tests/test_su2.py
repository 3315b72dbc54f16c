import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spintomo.errors import LabelError
from spintomo.su2 import (
    EulerAngles,
    HalfInt,
    check_jm,
    clebsch_gordan,
    hermite,
    ln_factorial,
    log_hermite_function_sq,
    m_index,
    m_values,
    small_d_matrix,
    wigner_D,
    wigner_D_matrix,
    wigner_small_d,
    wigner_small_d_sum,
)

F = Fraction


def cg_squared_exact(j1, m1, j2, m2, J, M):
    """Signed square of a Clebsch-Gordan coefficient over the rationals (Racah)."""
    if m1 + m2 != M or not abs(j1 - j2) <= J <= j1 + j2:
        return F(0)
    f = math.factorial
    pre = F((2 * J + 1) * f(int(j1 + j2 - J)) * f(int(j1 - j2 + J)) * f(int(-j1 + j2 + J)),
            f(int(j1 + j2 + J + 1)))
    pre *= (f(int(J + M)) * f(int(J - M)) * f(int(j1 - m1)) * f(int(j1 + m1))
            * f(int(j2 - m2)) * f(int(j2 + m2)))
    s = F(0)
    for k in range(0, int(j1 + j2 + J) + 2):
        args = [k, int(j1 + j2 - J) - k, int(j1 - m1) - k, int(j2 + m2) - k,
                int(J - j2 + m1) + k, int(J - j1 - m2) + k]
        if min(args) < 0:
            continue
        den = 1
        for a in args:
            den *= f(a)
        s += F((-1) ** k, den)
    val = pre * s * s
    return val if s >= 0 else -val


def test_halfint_parsing():
    assert HalfInt.of(F(3, 2)).twice == 3
    assert HalfInt.of(2).twice == 4
    assert HalfInt.of(-0.5).twice == -1
    assert str(HalfInt.of(F(5, 2))) == "5/2"
    assert (-HalfInt.of(1)).twice == -2
    with pytest.raises(LabelError):
        HalfInt.of(0.3)
    with pytest.raises(LabelError):
        HalfInt.of(F(1, 3))


def test_check_jm():
    assert check_jm(F(3, 2), F(-1, 2)) == (3, -1)
    for bad in [(F(1, 2), 1), (1, F(1, 2)), (1, 2), (-1, 0)]:
        with pytest.raises(LabelError):
            check_jm(*bad)


def test_m_values_and_index():
    assert list(m_values(F(3, 2))) == [3, 1, -1, -3]
    assert m_index(F(3, 2), F(-3, 2)) == 3
    assert m_index(1, 1) == 0


def test_euler_angles_validation():
    a = EulerAngles(7.0, 1.0, -1.0)
    assert 0 <= a.alpha < 2 * math.pi and 0 <= a.gamma < 2 * math.pi
    for bad in [(0, -0.1, 0), (0, 3.2, 0), (math.nan, 1, 0), (0, 1, math.inf)]:
        with pytest.raises(ValueError):
            EulerAngles(*bad)


def test_ln_factorial():
    for n in (0, 1, 5, 20, 170, 300):
        assert ln_factorial(n) == pytest.approx(math.lgamma(n + 1), rel=1e-14, abs=1e-14)


@pytest.mark.parametrize("tj1,tj2", [(1, 1), (2, 1), (2, 2), (3, 2), (4, 3), (5, 5)])
def test_clebsch_gordan_matches_exact_racah(tj1, tj2):
    j1, j2 = F(tj1, 2), F(tj2, 2)
    worst = 0.0
    for tJ in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
        J = F(tJ, 2)
        for tm1 in range(-tj1, tj1 + 1, 2):
            for tm2 in range(-tj2, tj2 + 1, 2):
                m1, m2 = F(tm1, 2), F(tm2, 2)
                M = m1 + m2
                if abs(M) > J:
                    continue
                sq = cg_squared_exact(j1, m1, j2, m2, J, M)
                ref = math.copysign(math.sqrt(abs(sq)), float(sq))
                worst = max(worst, abs(clebsch_gordan(j1, m1, j2, m2, J, M) - ref))
    assert worst < 1e-13


def test_clebsch_gordan_known_values():
    # spin-1/2 x spin-1/2 singlet and triplet
    h = F(1, 2)
    assert clebsch_gordan(h, h, h, -h, 1, 0) == pytest.approx(1 / math.sqrt(2))
    assert clebsch_gordan(h, h, h, -h, 0, 0) == pytest.approx(1 / math.sqrt(2))
    assert clebsch_gordan(h, -h, h, h, 0, 0) == pytest.approx(-1 / math.sqrt(2))
    assert clebsch_gordan(1, 1, 1, 1, 2, 2) == pytest.approx(1.0)
    assert clebsch_gordan(1, 0, 1, 0, 1, 0) == 0.0
    assert clebsch_gordan(1, 1, 1, 0, 1, 0) == 0.0  # M mismatch


def test_clebsch_gordan_orthogonality():
    j1, j2 = F(3, 2), 1
    for tJ in (1, 3, 5):
        for tJp in (1, 3, 5):
            M = F(1, 2)
            s = sum(clebsch_gordan(j1, F(t, 2), j2, M - F(t, 2), F(tJ, 2), M)
                    * clebsch_gordan(j1, F(t, 2), j2, M - F(t, 2), F(tJp, 2), M)
                    for t in range(-3, 4, 2) if abs(M - F(t, 2)) <= 1)
            assert s == pytest.approx(float(tJ == tJp), abs=1e-14)


@pytest.mark.parametrize("tj", range(0, 13))
def test_small_d_matches_alternating_sum(tj):
    j = F(tj, 2)
    for beta in (0.0, 0.3, 1.2, 2.0, math.pi):
        for tm1 in range(-tj, tj + 1, 2):
            for tm2 in range(-tj, tj + 1, 2):
                a = wigner_small_d(j, F(tm1, 2), F(tm2, 2), beta)
                b = wigner_small_d_sum(j, F(tm1, 2), F(tm2, 2), beta)
                assert abs(a - b) < 1e-12


def test_small_d_spin_half_closed_form():
    h = F(1, 2)
    b = 0.7
    assert wigner_small_d(h, h, h, b) == pytest.approx(math.cos(b / 2))
    assert wigner_small_d(h, h, -h, b) == pytest.approx(-math.sin(b / 2))
    assert wigner_small_d(h, -h, h, b) == pytest.approx(math.sin(b / 2))


def test_small_d_spin_one_closed_form():
    b = 1.1
    c, s = math.cos(b), math.sin(b)
    assert wigner_small_d(1, 1, 1, b) == pytest.approx((1 + c) / 2)
    assert wigner_small_d(1, 1, 0, b) == pytest.approx(-s / math.sqrt(2))
    assert wigner_small_d(1, 0, 0, b) == pytest.approx(c)
    assert wigner_small_d(1, -1, 1, b) == pytest.approx((1 - c) / 2)


def test_small_d_large_j_unitary():
    d = small_d_matrix(50, np.array([0.4, 1.3, 2.9]))
    for k in range(3):
        assert np.max(np.abs(d[k] @ d[k].T - np.eye(101))) < 1e-12


def test_small_d_symmetries():
    j = F(7, 2)
    b = 0.9
    for tm1 in range(-7, 8, 2):
        for tm2 in range(-7, 8, 2):
            m1, m2 = F(tm1, 2), F(tm2, 2)
            d = wigner_small_d(j, m1, m2, b)
            sign = -1 if (tm1 - tm2) // 2 % 2 else 1
            assert wigner_small_d(j, m2, m1, b) == pytest.approx(sign * d, abs=1e-14)
            assert wigner_small_d(j, -m1, -m2, b) == pytest.approx(sign * d, abs=1e-14)


def test_wigner_D_phases():
    ang = EulerAngles(0.4, 1.0, 2.2)
    j, m1, m2 = F(3, 2), F(1, 2), F(-3, 2)
    expect = np.exp(-1j * float(m2) * ang.alpha) * np.exp(-1j * float(m1) * ang.gamma) \
        * wigner_small_d(j, m1, m2, ang.beta)
    assert abs(wigner_D(j, m1, m2, ang) - expect) < 1e-14


def test_wigner_D_matrix_unitary():
    u = wigner_D_matrix(F(5, 2), [0.3, 2.0], [1.1, 0.2], [5.0, 1.0])
    for k in range(2):
        assert np.max(np.abs(u[k] @ u[k].conj().T - np.eye(6))) < 1e-13


def test_hermite_against_numpy_series():
    from numpy.polynomial.hermite import hermval

    x = np.linspace(-3, 3, 13)
    for n in range(12):
        c = np.zeros(n + 1)
        c[n] = 1
        assert np.allclose(hermite(n, x), hermval(x, c), rtol=1e-12, atol=1e-9)


def test_log_hermite_function_small_n():
    x = np.linspace(-2.5, 2.5, 11)
    for n in range(8):
        direct = hermite(n, x) ** 2 * np.exp(-x * x) / (2 ** n * math.factorial(n) * math.sqrt(math.pi))
        with np.errstate(divide="ignore"):
            assert np.allclose(np.exp(log_hermite_function_sq(n, x)), direct, rtol=1e-12, atol=1e-300)


def test_log_hermite_function_normalized_large_n():
    # integral of the squared Hermite function is 1 for every n
    x = np.linspace(-14, 14, 20001)
    vals = np.exp(log_hermite_function_sq(60, x))
    assert np.all(np.isfinite(vals))
    assert np.trapezoid(vals, x) == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(tj=st.integers(0, 10), beta=st.floats(0, math.pi))
def test_small_d_rows_normalized(tj, beta):
    d = small_d_matrix(F(tj, 2), np.array([beta]))[0]
    assert np.allclose(np.sum(d * d, axis=1), 1.0, atol=1e-13)
